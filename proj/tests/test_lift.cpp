#include <catch2/catch_amalgamated.hpp>

#include "nsgal/grid_oracle.hpp"
#include "nsgal/lift.hpp"
#include "test_helpers.hpp"

using namespace nsgal;
using nsgal::testutil::random_field;
using nsgal::testutil::single_mode;
using nsgal::testutil::taylor_green;

namespace {
const TorusSpec SPEC{2.0 * M_PI, 32};
const ForcingSpec NO_FORCE{SPEC, {}};
}

TEST_CASE("lift of zero data is zero") {
    LiftData lift = build_lift(SpectralField(SPEC), NO_FORCE, 3, 0.7);
    for (int j = 0; j <= 3; ++j) CHECK(l2_norm(lift.derivs[j]) == 0.0);
    CHECK(l2_norm(beta_eval(lift, 0.4)) == 0.0);
    CHECK(l2_norm(theta_eval(lift, NO_FORCE, 0.4)) == 0.0);
    auto rep = check_theta_orthogonal(lift, NO_FORCE, 2);
    for (double r : rep.ratios) CHECK(r == 0.0);
}

TEST_CASE("single-mode heat decay recurrence") {
    double nu = 0.8;
    SpectralField u0 = single_mode(SPEC, 1.3);
    LiftData lift = build_lift(u0, NO_FORCE, 4, nu);
    double p = 1.0;
    for (int j = 0; j <= 4; ++j) {
        CHECK(l2_norm(lift.derivs[j] - p * u0) <= 1e-13 * std::abs(p) * l2_norm(u0));
        p *= -nu;
    }
}

TEST_CASE("taylor-green first derivative: projected advection vanishes") {
    double nu = 0.35;
    SpectralField u0 = taylor_green(SPEC);
    // independent confirmation through the grid oracle
    SpectralField adv = nonlinear_grid_oracle(u0, u0);
    CHECK(l2_norm(leray_project(adv)) <= 1e-10 * l2_norm(adv));

    LiftData lift = build_lift(u0, NO_FORCE, 2, nu);
    CHECK(l2_norm(lift.derivs[1] - (-2.0 * nu) * u0) <= 1e-12 * l2_norm(u0));
    CHECK(l2_norm(lift.derivs[2] - (4.0 * nu * nu) * u0) <= 1e-12 * l2_norm(u0));
}

TEST_CASE("beta evaluation: polynomial in t with exact factorials") {
    double nu = 1.0;
    SpectralField u0 = single_mode(SPEC);
    LiftData lift = build_lift(u0, NO_FORCE, 2, nu);

    CHECK(l2_norm(beta_eval(lift, 0.0) - u0) == 0.0);
    // J = 2, t = 0.1: (1 - 0.1 + 0.005) u0 coefficientwise
    SpectralField b = beta_eval(lift, 0.1);
    CHECK(l2_norm(b - 0.905 * u0) <= 1e-14 * l2_norm(u0));

    // beta(0) time derivatives reproduce the derivative stack
    LiftEval ev = beta_eval_full(lift, 0.0);
    CHECK(l2_norm(ev.dbeta - lift.derivs[1]) <= 1e-14 * l2_norm(lift.derivs[1]));
    CHECK(l2_norm(ev.laplace_beta - laplacian(u0)) <= 1e-14 * l2_norm(u0));

    // degree <= J: quadratic Lagrange interpolation through three nodes
    // reproduces beta at a fourth point
    double t0 = 0.0, t1 = 0.15, t2 = 0.3, tq = 0.42;
    auto lag = [&](double t) {
        double l0 = (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2));
        double l1 = (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2));
        double l2 = (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
        SpectralField s = l0 * beta_eval(lift, t0);
        s += l1 * beta_eval(lift, t1);
        s += l2 * beta_eval(lift, t2);
        return s;
    };
    CHECK(l2_norm(lag(tq) - beta_eval(lift, tq)) <= 1e-12 * l2_norm(u0));
}

TEST_CASE("theta closed form for single-mode data") {
    SpectralField u0 = single_mode(SPEC);
    for (int J : {1, 2, 3}) {
        double nu = 0.6;
        LiftData lift = build_lift(u0, NO_FORCE, J, nu);
        auto stack = theta_stack(lift, NO_FORCE);
        double t = 0.37;
        double fact = 1.0;
        for (int r = 2; r <= J; ++r) fact *= r;
        double expect = std::pow(-1.0, J + 1) * std::pow(nu, J + 1) * std::pow(t, J) / fact;
        SpectralField th = theta_eval_from_stack(stack, t);
        CHECK(l2_norm(th - expect * u0) <= 1e-12 * std::abs(expect) * l2_norm(u0));
        // theta(0) = 0 exactly for J >= 1
        CHECK(l2_norm(theta_eval_from_stack(stack, 0.0)) <= 1e-14 * l2_norm(u0));
        // theta^{(j)}(0) = 0 for j < J, so all ratios vanish
        auto rep = check_theta_orthogonal(lift, NO_FORCE, J - 1);
        for (double r : rep.ratios) CHECK(r <= 1e-13);
    }
}

TEST_CASE("theta initial orthogonality on random solenoidal data") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        SpectralField u0 = random_field(SPEC, 2, 6, 900 + seed, true, 0.4);
        ForcingSpec f{SPEC, {}};
        // a small solenoidal forcing mode with quadratic time profile
        SpectralField famp = random_field(SPEC, 2, 2, 77 + seed, true, 0.1);
        for (const auto& [k, c] : famp.modes()) f.modes.push_back({k, c, {0.3, -0.2, 0.05}});
        f.validate();
        LiftData lift = build_lift(u0, f, 3, 0.5);
        auto rep = check_theta_orthogonal(lift, f, 2);
        REQUIRE(rep.ratios.size() == 3);
        for (double r : rep.ratios) CHECK(r <= 1e-8);
        // theta itself is NOT solenoidal: ratios only vanish after projection
        auto stack = theta_stack(lift, f);
        SpectralField th0 = theta_time_deriv_at_zero(stack, 0);
        CHECK(l2_norm(th0) > 1e-10);
    }
}

TEST_CASE("derivative stack and beta stay solenoidal and Hermitian") {
    SpectralField u0 = random_field(SPEC, 2, 8, 5, true, 0.7);
    LiftData lift = build_lift(u0, NO_FORCE, 3, 0.4);
    for (int j = 0; j <= 3; ++j) {
        CHECK(lift.derivs[j].is_solenoidal(1e-12));
        CHECK(lift.derivs[j].is_hermitian());
    }
    SpectralField b = beta_eval(lift, 0.2);
    CHECK(b.is_solenoidal(1e-12));
    CHECK(b.is_hermitian());
}

TEST_CASE("grid-oracle convolution backend agrees with the spectral one") {
    SpectralField u0 = random_field(SPEC, 2, 5, 500, true, 0.5);
    LiftData a = build_lift(u0, NO_FORCE, 2, 0.3);
    AdvectFn oracle = [](const SpectralField& x, const SpectralField& y, long long cap) {
        SpectralField r = nonlinear_grid_oracle(x, y);
        return cap >= 0 ? truncate_ball(r, cap, false) : r;
    };
    LiftData b = build_lift(u0, NO_FORCE, 2, 0.3, -1, oracle);
    for (int j = 0; j <= 2; ++j)
        CHECK(l2_norm(a.derivs[j] - b.derivs[j]) <= 1e-9 * std::max(1.0, l2_norm(a.derivs[j])));
}

TEST_CASE("band cap triggers a resolution error") {
    SpectralField u0 = random_field(SPEC, 2, 8, 6, true, 1.0);
    CHECK_THROWS(build_lift(u0, NO_FORCE, 3, 0.4, /*ball2_cap=*/4));
}

TEST_CASE("lift input validation") {
    SpectralField bad(SPEC);
    bad.set_pair(WaveVector{1, 0, 0}, CVec3{1.0, 0.0, 0.0});  // not solenoidal
    CHECK_THROWS(build_lift(bad, NO_FORCE, 2, 1.0));
    SpectralField mean(SPEC);
    mean.set(WaveVector{0, 0, 0}, CVec3{1.0, 0.0, 0.0});
    CHECK_THROWS(build_lift(mean, NO_FORCE, 2, 1.0));
    CHECK_THROWS(build_lift(SpectralField(SPEC), NO_FORCE, 0, 1.0));
}
