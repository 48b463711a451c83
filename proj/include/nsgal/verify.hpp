#pragma once

#include "nsgal/gn.hpp"
#include "nsgal/grid_oracle.hpp"
#include "nsgal/runner.hpp"

namespace nsgal {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    bool degenerate = false;  // vacuous on this configuration (e.g. zero data)
    double defect = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;  // schema-stable ordering
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline json verify_to_json(const VerifyReport& rep, const RunConfig& cfg,
                           std::uint64_t basis_hash) {
    json j;
    j["format_version"] = kFormatVersion;
    j["config_hash"] = cfg.hash_hex();
    std::ostringstream bh;
    bh << std::hex << basis_hash;
    j["basis_hash"] = bh.str();
    j["all_pass"] = rep.all_pass();
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json cc;
        cc["name"] = c.name;
        cc["pass"] = c.pass;
        cc["degenerate"] = c.degenerate;
        cc["defect"] = dec17(c.defect);
        cc["tolerance"] = dec17(c.tolerance);
        if (!c.detail.empty()) cc["detail"] = c.detail;
        checks.push_back(cc);
    }
    j["checks"] = checks;
    return j;
}

/// Runs the cross-module invariant suites at the configuration's sizes.
/// A failing check is reported, never thrown.
inline VerifyReport run_verify(const Problem& problem, const BasisSpec& basis,
                               const TrilinearTensor& tensor_in) {
    const RunConfig& cfg = problem.cfg;
    VerifyReport rep;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss;
    bool zero_data = problem.u0.empty();

    TrilinearTensor tensor = tensor_in;
    if (cfg.test_corrupt_tensor >= 0 && !tensor.entries.empty()) {
        auto& e = tensor.entries[cfg.test_corrupt_tensor % tensor.entries.size()];
        e.v = -e.v + 1.0;  // deliberate corruption for fault-injection tests
    }

    {  // projector idempotence and contraction
        VerifyCheck c{.name = "projector-idempotence", .tolerance = 1e-13};
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 6; ++s) {
            SpectralField f =
                random_solenoidal_data(cfg.torus, std::min(cfg.basis_radius, 4), 16,
                                       cfg.seed * 1000 + s, 1.0);
            // re-randomize without the projection to probe the gradient part
            SpectralField g(cfg.torus);
            for (const auto& [k, cv] : f.modes())
                g.set(k, CVec3{cv[0] + 0.3, cv[1], cv[2] - 0.1});
            SpectralField pg = leray_project(g);
            double n = std::max(l2_norm(pg), 1e-300);
            worst = std::max(worst, l2_norm(leray_project(pg) - pg) / n);
            if (l2_norm(pg) > l2_norm(g) * (1.0 + 1e-14)) worst = std::max(worst, 1.0);
        }
        c.defect = worst;
        c.pass = worst <= c.tolerance;
        rep.checks.push_back(c);
    }
    {  // tensor skewness
        VerifyCheck c{.name = "tensor-skewness", .tolerance = 1e-13};
        double scale = std::max(1.0, tensor.max_abs());
        c.defect = tensor_skew_defect(tensor) / scale;
        c.pass = c.defect <= c.tolerance;
        rep.checks.push_back(c);
    }
    {  // trilinear cancellation
        VerifyCheck c{.name = "trilinear-cancellation", .tolerance = 1e-12};
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> g(basis.size());
            for (auto& v : g) v = gauss(rng);
            auto [total, scale] = tensor.contract_cubic_with_scale(g);
            worst = std::max(worst, std::abs(total) / std::max(scale, 1.0));
        }
        c.defect = worst;
        c.pass = worst <= c.tolerance;
        rep.checks.push_back(c);
    }
    {  // oracle vs exact convolution
        VerifyCheck c{.name = "oracle-vs-convolution", .tolerance = 1e-9};
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 8; ++s) {
            SpectralField u =
                random_solenoidal_data(cfg.torus, 3, 10, cfg.seed * 77 + s, 0.8);
            SpectralField v =
                random_solenoidal_data(cfg.torus, 3, 10, cfg.seed * 91 + s, 0.8);
            SpectralField conv = advect_spectral(u, v);
            SpectralField oracle = nonlinear_grid_oracle(u, v);
            for (const auto& [k, cv] : conv.modes())
                worst = std::max(worst, std::sqrt(abs2(cv - oracle.coeff(k))));
            for (const auto& [k, cv] : oracle.modes())
                worst = std::max(worst, std::sqrt(abs2(cv - conv.coeff(k))));
        }
        c.defect = worst;
        c.pass = worst <= c.tolerance;
        rep.checks.push_back(c);
    }
    {  // theta initial orthogonality
        VerifyCheck c{.name = "theta-orthogonality", .tolerance = 1e-8};
        if (zero_data || cfg.lift_order < 1) {
            c.pass = true;
            c.degenerate = true;
            c.detail = "zero data or no lift";
        } else {
            LiftData lift = build_lift(problem.u0, problem.forcing, cfg.lift_order, cfg.nu,
                                       cfg.band_cap_ball2());
            auto r = check_theta_orthogonal(lift, problem.forcing, cfg.lift_order - 1);
            c.defect = r.max_ratio();
            c.pass = c.defect <= c.tolerance;
        }
        rep.checks.push_back(c);
    }
    {  // flatness of the lifted unknown
        VerifyCheck c{.name = "flatness-slope", .tolerance = 0.0};
        if (zero_data || cfg.lift_order < 1) {
            c.pass = true;
            c.degenerate = true;
            c.detail = "zero data or no lift";
        } else {
            LiftData lift = build_lift(problem.u0, problem.forcing, cfg.lift_order, cfg.nu,
                                       cfg.band_cap_ball2());
            GalerkinProblem gp =
                GalerkinProblem::assemble(basis, cfg.nu, problem.forcing, lift);
            GalerkinFlow flow(gp, true);
            StepperConfig scfg;
            scfg.rtol = 1e-10;
            scfg.atol = 1e-16;
            std::vector<double> y(gp.n(), 0.0);
            std::vector<double> times;
            for (int i = 0; i <= 8; ++i)
                times.push_back(1e-3 * std::pow(10.0, i / 8.0));  // [1e-3, 1e-2]
            std::vector<std::pair<double, double>> pts;
            auto sink = [&](double t, const std::vector<double>& ys,
                            const std::vector<double>&) {
                if (t > 0.0) pts.emplace_back(std::log(t), std::log(std::max(
                                                               std::sqrt(flow.energy(ys)),
                                                               1e-300)));
                return true;
            };
            IntegrateResult ir = integrate(flow, y, 0.0, times, scfg, sink);
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (auto& [x, yy] : pts) {
                sx += x;
                sy += yy;
                sxx += x * x;
                sxy += x * yy;
            }
            double n = double(pts.size());
            double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            c.defect = slope;  // reported value; pass needs slope >= J + 0.5
            c.tolerance = cfg.lift_order + 0.5;
            c.pass = ir.status == IntegrateStatus::Ok && slope >= c.tolerance;
            c.detail = "log-log slope of ||v(t)|| on [1e-3,1e-2]";
        }
        rep.checks.push_back(c);
    }
    {  // energy identity along a direct run
        VerifyCheck c{.name = "energy-identity", .tolerance = 1e-8};
        if (zero_data && problem.forcing.empty()) {
            c.pass = true;
            c.degenerate = true;
            c.detail = "zero data";
        } else {
            GalerkinProblem gp = GalerkinProblem::assemble(basis, cfg.nu, problem.forcing);
            GalerkinFlow flow(gp, false);
            std::vector<double> y = basis.project(problem.u0);
            StepperConfig scfg;
            scfg.rtol = 1e-10;
            scfg.atol = 1e-14;
            std::vector<double> times;
            double T = std::min(cfg.horizon, 1.0);
            for (int i = 1; i <= 20; ++i) times.push_back(T * i / 20.0);
            double worst = 0.0, prev_norm = std::sqrt(flow.energy(y));
            bool monotone = true;
            auto sink = [&](double t, const std::vector<double>& ys,
                            const std::vector<double>& yd) {
                worst = std::max(worst, gp.energy_balance_defect({ys, t}, yd));
                double n = std::sqrt(flow.energy(ys));
                if (problem.forcing.empty() && n > prev_norm * (1.0 + 1e-12)) monotone = false;
                prev_norm = n;
                return true;
            };
            IntegrateResult ir = integrate(flow, y, 0.0, times, scfg, sink);
            c.defect = worst;
            c.pass = ir.status == IntegrateStatus::Ok && worst <= c.tolerance && monotone;
            if (!monotone) c.detail = "unforced L2 norm failed to decrease";
        }
        rep.checks.push_back(c);
    }
    {  // Gagliardo-Nirenberg probe
        VerifyCheck c{.name = "gn-probe", .tolerance = 0.0};
        bool ok = true;
        std::ostringstream detail;
        for (int q : {3, 4, 6}) {
            GnProbeResult r = gn_constant_probe(cfg.torus, 24, q, cfg.seed);
            ok = ok && std::isfinite(r.C1) && std::isfinite(r.C2) && r.worst_residual <= 1e-12;
            detail << "q=" << q << ": C1=" << r.C1 << " C2=" << r.C2 << "; ";
            c.defect = std::max(c.defect, r.worst_residual);
        }
        // constant field: the bound reduces to ||u||_q <= C2 ||u||_2 with
        // C2 = L^{3/q-3/2} exactly
        double L = cfg.torus.L;
        for (int q : {3, 4, 6}) {
            double lhs = std::pow(L, 3.0 / q);
            double rhs = std::pow(L, 3.0 / q - 1.5) * std::pow(L, 1.5);
            ok = ok && std::abs(lhs - rhs) <= 1e-12 * lhs;
        }
        c.pass = ok;
        c.detail = detail.str();
        rep.checks.push_back(c);
    }
    {  // cutoff sandwich
        VerifyCheck c{.name = "cutoff-sandwich", .tolerance = 0.0};
        bool ok = true;
        for (double r : {1.5, 3.0}) {
            CutoffSpec eta(r);
            for (int i = 0; i <= 160; ++i) {
                double s = 0.9 * i / 160.0;
                double v = eta.eval_radial(s);
                if (v < 0.0 || v > 1.0) ok = false;
                if (s <= 0.5 && v != 1.0) ok = false;
                if (s >= 0.75 && v != 0.0) ok = false;
            }
        }
        c.pass = ok;
        rep.checks.push_back(c);
    }
    return rep;
}

inline VerifyReport run_verify(const Problem& problem) {
    BasisSpec basis = BasisSpec::build_ball(problem.cfg.torus, problem.cfg.basis_radius);
    TrilinearTensor tensor = assemble_trilinear(basis);
    return run_verify(problem, basis, tensor);
}

}  // namespace nsgal
