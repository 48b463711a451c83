#include <catch2/catch_amalgamated.hpp>

#include "nsgal/continuation.hpp"
#include "test_helpers.hpp"

using namespace nsgal;
using nsgal::testutil::random_field;
using nsgal::testutil::single_mode;
using nsgal::testutil::taylor_green;

namespace {
const TorusSpec SPEC{2.0 * M_PI, 32};
const ForcingSpec NO_FORCE{SPEC, {}};

std::vector<double> linspace_times(double T, int n) {
    std::vector<double> ts;
    for (int i = 1; i <= n; ++i) ts.push_back(T * double(i) / n);
    return ts;
}
}  // namespace

TEST_CASE("integrator reproduces linear decay closed form") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 1);
    double nu = 1.4;
    GalerkinProblem p = GalerkinProblem::assemble(basis, nu, NO_FORCE);
    GalerkinFlow flow(p, /*lifted=*/false);
    SpectralField u0 = single_mode(SPEC, 0.9);
    std::vector<double> y = basis.project(u0);
    std::vector<double> y0 = y;

    StepperConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-13;
    IntegrateResult r = integrate(flow, y, 0.0, linspace_times(1.0, 4), cfg);
    REQUIRE(r.status == IntegrateStatus::Ok);
    double decay = std::exp(-nu * 1.0);  // lambda = 1 for |k| = 1
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(std::abs(y[i] - decay * y0[i]) <= 10.0 * cfg.rtol * std::max(1.0, std::abs(y0[i])));
}

TEST_CASE("zero data stays zero") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 1);
    GalerkinProblem p = GalerkinProblem::assemble(basis, 1.0, NO_FORCE);
    GalerkinFlow flow(p, false);
    std::vector<double> y(p.n(), 0.0);
    StepperConfig cfg;
    integrate(flow, y, 0.0, linspace_times(2.0, 8), cfg);
    for (double v : y) CHECK(v == 0.0);
}

TEST_CASE("taylor-green direct run matches e^{-2 nu t} decay") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 4);
    double nu = 0.1;
    GalerkinProblem p = GalerkinProblem::assemble(basis, nu, NO_FORCE);
    GalerkinFlow flow(p, false);
    SpectralField u0 = taylor_green(SPEC);
    std::vector<double> y = basis.project(u0);

    StepperConfig cfg;
    cfg.rtol = 1e-8;
    cfg.atol = 1e-12;
    IntegrateResult r = integrate(flow, y, 0.0, linspace_times(1.0, 5), cfg);
    REQUIRE(r.status == IntegrateStatus::Ok);
    SpectralField got = p.reconstruct_v(y);
    SpectralField expect = std::exp(-2.0 * nu) * u0;
    CHECK(l2_norm(got - expect) <= 1e-6 * l2_norm(u0));
}

TEST_CASE("fixed-step mode is bitwise deterministic") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 2);
    SpectralField u0 = random_field(SPEC, 2, 8, 91, true, 0.8);
    GalerkinProblem p = GalerkinProblem::assemble(basis, 0.3, NO_FORCE);
    GalerkinFlow flow(p, false);
    StepperConfig cfg;
    cfg.mode = StepperMode::FixedRK4;
    cfg.h = 0.01;
    std::vector<double> y1 = basis.project(u0), y2 = basis.project(u0);
    integrate(flow, y1, 0.0, linspace_times(0.5, 3), cfg);
    integrate(flow, y2, 0.0, linspace_times(0.5, 3), cfg);
    for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y1[i] == y2[i]);
}

TEST_CASE("extension rule arithmetic") {
    HorizonExtension e = extend_horizon(0.0, 0.0, 0.25, 10.0);
    CHECK(e.t_plus == Catch::Approx(1.0));
    CHECK(e.guaranteed_bound == Catch::Approx(std::sqrt(2.0)));

    // huge enstrophy bound: no progress
    HorizonExtension big = extend_horizon(3.0, 1e12, 0.25, 10.0);
    CHECK(big.t_plus == Catch::Approx(3.0).margin(1e-12));

    // clamping at the global horizon
    HorizonExtension clamp = extend_horizon(9.99, 0.0, 1e-6, 10.0);
    CHECK(clamp.t_plus == 10.0);

    // nonpositive c3: the dichotomy hands back the whole horizon
    CHECK(extend_horizon(1.0, 5.0, 0.0, 7.0).t_plus == 7.0);
}

TEST_CASE("c3 estimate: zero and decaying trajectories give zero") {
    std::vector<TrajectorySample> samples;
    for (int i = 0; i < 12; ++i) {
        TrajectorySample s;
        s.t = 0.1 * i;
        samples.push_back(s);
    }
    CHECK(estimate_c3(samples, 1.0) == 0.0);

    // linear decay: dE/dt = -2 nu lambda E, D = lambda E -> negative numerator
    samples.clear();
    double nu = 0.7, lambda = 2.0, e0 = 3.0;
    for (int i = 0; i < 12; ++i) {
        double t = 0.05 * i;
        TrajectorySample s;
        s.t = t;
        s.enstrophy = e0 * std::exp(-2.0 * nu * lambda * t);
        s.dissipation = lambda * s.enstrophy;
        s.enstrophy_rate = -2.0 * nu * lambda * s.enstrophy;
        samples.push_back(s);
    }
    CHECK(estimate_c3(samples, nu) == 0.0);

    CHECK_THROWS(estimate_c3(std::vector<TrajectorySample>(4), 1.0));
}

TEST_CASE("ladder: zero data takes one rung to the horizon") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 1);
    GalerkinProblem p = GalerkinProblem::assemble(basis, 1.0, NO_FORCE);
    GalerkinFlow flow(p, false);
    std::vector<double> y(p.n(), 0.0);
    StepperConfig cfg;
    ContinuationLog log = run_ladder(flow, 1.0, y, 5.0, cfg);
    CHECK(log.status == LadderStatus::ReachedHorizon);
    CHECK(log.rungs.size() == 1);
    CHECK(log.t_final == 5.0);
}

TEST_CASE("ladder: small data reaches the horizon with sound rungs") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 2);
    SpectralField u0 = random_field(SPEC, 2, 8, 13, true, 1.0);
    double scale = std::sqrt(1e-2 / enstrophy(u0));
    u0 *= scale;
    double nu = 0.4;
    GalerkinProblem p = GalerkinProblem::assemble(basis, nu, NO_FORCE);
    GalerkinFlow flow(p, false);
    std::vector<double> y = basis.project(u0);
    StepperConfig cfg;
    ContinuationLog log = run_ladder(flow, nu, y, 5.0, cfg);
    CHECK(log.status == LadderStatus::ReachedHorizon);
    CHECK(log.t_final == 5.0);
    double prev = -1.0;
    for (const auto& r : log.rungs) {
        CHECK(r.t_end > r.t_start);
        CHECK(r.t_start >= prev);
        prev = r.t_start;
        CHECK(std::isfinite(r.sup_enstrophy));
        if (r.conditional_applicable) CHECK(r.conditional_respected);
    }
}

TEST_CASE("ladder: under-resolved large-amplitude run ends in blow-up status") {
    // large-amplitude data on the lowest shell of a small Galerkin ball with
    // near-zero viscosity: the truncation cascade drives the enstrophy
    // through the threshold
    BasisSpec basis = BasisSpec::build_ball(SPEC, 4);
    SpectralField u0 = random_field(SPEC, 1, 3, 3, true, 1.0);
    u0 *= std::sqrt(8e5 / enstrophy(u0));
    GalerkinProblem p = GalerkinProblem::assemble(basis, 1e-5, NO_FORCE);
    GalerkinFlow flow(p, false);
    std::vector<double> y(p.n(), 0.0);
    std::vector<double> small = BasisSpec::build_ball(SPEC, 1).project(u0);
    std::copy(small.begin(), small.end(), y.begin());
    StepperConfig cfg;
    cfg.rtol = 1e-6;
    cfg.atol = 1e-8;
    ContinuationLog log = run_ladder(flow, 1e-5, y, 2.0, cfg, /*threshold=*/1e6);
    CHECK((log.status == LadderStatus::Blowup || log.status == LadderStatus::StepUnderflow));
    if (log.status == LadderStatus::Blowup) {
        REQUIRE(log.blowup.has_value());
        CHECK(log.blowup->threshold == 1e6);
        CHECK(!log.blowup->enstrophy_tail.empty());
    }
}

TEST_CASE("twin runs: zero perturbation stays identical, linear decay contracts") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 1);
    double nu = 1.0;
    GalerkinProblem p = GalerkinProblem::assemble(basis, nu, NO_FORCE);
    GalerkinFlow flow(p, false);
    std::vector<double> y0 = basis.project(single_mode(SPEC, 0.5));
    StepperConfig cfg;

    TwinRunReport zero = twin_run_divergence(flow, y0, 0, 0.0, 1.0, cfg);
    CHECK(zero.sup_w == 0.0);
    CHECK(zero.bound_holds);

    TwinRunReport rep = twin_run_divergence(flow, y0, 0, 1e-6, 1.0, cfg);
    CHECK(rep.bound_holds);
    CHECK(rep.c_hat <= 0.0);  // pure decay contracts
    CHECK(rep.sup_w <= 1e-6 * (1.0 + 1e-9));
}

TEST_CASE("twin runs: linear response scales with delta") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 4);
    double nu = 0.1;
    GalerkinProblem p = GalerkinProblem::assemble(basis, nu, NO_FORCE);
    GalerkinFlow flow(p, false);
    std::vector<double> y0 = basis.project(taylor_green(SPEC));
    StepperConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-14;
    TwinRunReport a = twin_run_divergence(flow, y0, 0, 1e-6, 1.0, cfg, 16);
    TwinRunReport b = twin_run_divergence(flow, y0, 0, 5e-7, 1.0, cfg, 16);
    CHECK(a.bound_holds);
    CHECK(a.sup_w <= 1e-6 * std::exp(std::max(a.c_hat, 0.0)) * (1.0 + 1e-9));
    // halving delta halves the divergence to 5% relative
    CHECK(std::abs(b.sup_w - 0.5 * a.sup_w) <= 0.05 * 0.5 * a.sup_w);
}

TEST_CASE("energy certificate fits and re-verifies") {
    BasisSpec basis = BasisSpec::build_ball(SPEC, 2);
    SpectralField u0 = random_field(SPEC, 2, 8, 29, true, 0.4);
    double nu = 0.3;
    LiftData lift = build_lift(u0, NO_FORCE, 2, nu);
    GalerkinProblem p = GalerkinProblem::assemble(basis, nu, NO_FORCE, lift);
    GalerkinFlow flow(p, true);
    std::vector<double> y(p.n(), 0.0);
    std::vector<TrajectorySample> samples;
    auto sink = [&](double t, const std::vector<double>& ys, const std::vector<double>& yd) {
        TrajectorySample s;
        s.t = t;
        s.energy = flow.energy(ys);
        s.enstrophy = flow.enstrophy_y(ys);
        s.dissipation = flow.dissipation(ys);
        s.energy_rate = flow.energy_rate(ys, yd);
        s.enstrophy_rate = flow.enstrophy_rate(ys, yd);
        samples.push_back(s);
        return true;
    };
    StepperConfig cfg;
    std::vector<double> times = linspace_times(1.0, 40);
    REQUIRE(integrate(flow, y, 0.0, times, cfg, sink).status == IntegrateStatus::Ok);
    GronwallCertificate cert = fit_energy_certificate(samples, nu);
    CHECK(cert.holds_on_held_out);
    // the lifted unknown accumulates finite energy and dissipation
    double sup_e = 0.0, int_ens = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        sup_e = std::max(sup_e, samples[i].energy);
        int_ens += samples[i].enstrophy * (samples[i].t - samples[i - 1].t);
    }
    CHECK(std::isfinite(sup_e + int_ens));
}

TEST_CASE("lifted and direct formulations agree through the substitution") {
    // the basis ball must contain the lift band for the substitution u = v +
    // beta to map one Galerkin truncation onto the other exactly
    BasisSpec basis = BasisSpec::build_ball(SPEC, 3);
    SpectralField u0 = random_field(SPEC, 1, 3, 41, true, 0.5);
    double nu = 0.25;
    LiftData lift = build_lift(u0, NO_FORCE, 2, nu);
    REQUIRE(beta_eval(lift, 1.0).band_ball2() <= 9);
    GalerkinProblem p = GalerkinProblem::assemble(basis, nu, NO_FORCE, lift);

    StepperConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-14;
    std::vector<double> times = linspace_times(1.0, 5);

    GalerkinFlow lifted(p, true);
    std::vector<double> yv(p.n(), 0.0);
    REQUIRE(integrate(lifted, yv, 0.0, times, cfg).status == IntegrateStatus::Ok);
    SpectralField u_from_lifted = p.reconstruct_u({yv, 1.0});

    GalerkinFlow direct(p, false);
    std::vector<double> yu = basis.project(u0);
    REQUIRE(integrate(direct, yu, 0.0, times, cfg).status == IntegrateStatus::Ok);
    SpectralField u_direct = p.reconstruct_v(yu);

    double err = l2_norm(u_from_lifted - u_direct);
    CHECK(err <= 10.0 * (cfg.rtol * l2_norm(u0) + cfg.atol));
}
