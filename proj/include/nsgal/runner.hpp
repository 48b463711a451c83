#pragma once

#include <filesystem>

#include "nsgal/presets.hpp"

namespace nsgal {

struct SimulateResult {
    ContinuationLog ladder;
    std::vector<TrajectoryRow> rows;
    std::vector<double> final_g;
    double t_final = 0.0;
    std::uint64_t basis_hash = 0;
    int n_basis = 0;
    // the data-bound summary standing in for the constant b of the data class
    double u0_l2 = 0.0;
    double u0_enstrophy = 0.0;
    double forcing_l2_integral = 0.0;
};

/// Runs one configuration through the continuation ladder, collecting the
/// monitor columns at every sample.
inline SimulateResult simulate(const Problem& problem, int q_every = 1) {
    const RunConfig& cfg = problem.cfg;
    BasisSpec basis = BasisSpec::build_ball(cfg.torus, cfg.basis_radius);

    std::optional<LiftData> lift;
    if (cfg.lift_order >= 1 && !problem.u0.empty())
        lift = build_lift(problem.u0, problem.forcing, cfg.lift_order, cfg.nu,
                          cfg.band_cap_ball2());

    GalerkinProblem gp = GalerkinProblem::assemble(
        basis, cfg.nu, problem.forcing, cfg.lifted ? lift : std::nullopt);
    GalerkinFlow flow(gp, cfg.lifted);

    SimulateResult res;
    res.basis_hash = basis.hash();
    res.n_basis = basis.size();
    res.u0_l2 = l2_norm(problem.u0);
    res.u0_enstrophy = enstrophy(problem.u0);
    res.forcing_l2_integral = problem.forcing.l2_time_integral(cfg.horizon);

    std::vector<double> y = cfg.lifted ? std::vector<double>(gp.n(), 0.0)
                                       : basis.project(problem.u0);
    long sample_count = 0;
    auto monitor = [&](double t, const std::vector<double>& ys, const std::vector<double>& yd) {
        TrajectoryRow row;
        row.t = t;
        double norm_y = std::sqrt(flow.energy(ys));
        double ens_y = flow.enstrophy_y(ys);
        GalerkinState state{ys, t};
        if (cfg.lifted) {
            row.v_l2 = norm_y;
            row.enstrophy_v = ens_y;
            SpectralField u = gp.reconstruct_u(state);
            row.u_l2 = l2_norm(u);
            row.enstrophy_u = enstrophy(u);
            if (q_every > 0 && sample_count % q_every == 0) {
                ResidualReport q = gp.q_residual(state, yd);
                row.q_norm = q.q_norm;
                row.orth_defect = q.orthogonality_defect;
            }
        } else {
            row.u_l2 = norm_y;
            row.enstrophy_u = ens_y;
            if (lift) {
                SpectralField v = gp.reconstruct_v(ys) - beta_eval(*lift, t);
                row.v_l2 = l2_norm(v);
                row.enstrophy_v = enstrophy(v);
            } else {
                row.v_l2 = norm_y;
                row.enstrophy_v = ens_y;
            }
        }
        row.energy_residual = gp.energy_balance_defect(state, yd);
        res.rows.push_back(row);
        ++sample_count;
        return true;
    };

    res.ladder = run_ladder(flow, cfg.nu, y, cfg.horizon, cfg.stepper, cfg.blowup_threshold,
                            {}, monitor);
    res.final_g = y;
    res.t_final = res.ladder.t_final;
    return res;
}

inline json run_summary_json(const Problem& problem, const SimulateResult& res) {
    json j;
    j["format_version"] = kFormatVersion;
    j["config_hash"] = problem.cfg.hash_hex();
    std::ostringstream bh;
    bh << std::hex << res.basis_hash;
    j["basis_hash"] = bh.str();
    j["status"] = to_string(res.ladder.status);
    j["t_final"] = dec17(res.t_final);
    j["n_basis"] = res.n_basis;
    j["data_bound"] = json{{"u0_l2", dec17(res.u0_l2)},
                           {"u0_enstrophy", dec17(res.u0_enstrophy)},
                           {"forcing_l2_integral", dec17(res.forcing_l2_integral)}};

    // for presets with an exact solution, record the closed-form error
    const RunConfig& cfg = problem.cfg;
    if (cfg.initial_data.kind == InitialDataSpec::Kind::Preset && !cfg.lifted &&
        res.ladder.status == LadderStatus::ReachedHorizon && problem.forcing.empty()) {
        SpectralField expect(cfg.torus);
        bool have = false;
        if (cfg.initial_data.preset == "taylor-green") {
            expect = std::exp(-2.0 * cfg.nu * res.t_final) * problem.u0;
            have = true;
        } else if (cfg.initial_data.preset == "single-mode") {
            expect = std::exp(-cfg.nu * res.t_final) * problem.u0;  // lambda = 1
            have = true;
        }
        if (have) {
            BasisSpec basis = BasisSpec::build_ball(cfg.torus, cfg.basis_radius);
            SpectralField got = basis.reconstruct(res.final_g);
            double rel = l2_norm(got - expect) / std::max(l2_norm(problem.u0), 1e-300);
            j["closed_form_rel_error"] = dec17(rel);
        }
    }
    return j;
}

inline void write_simulation_outputs(const Problem& problem, const SimulateResult& res,
                                     const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    write_text(outdir + "/trajectory.csv", trajectory_csv(res.rows));
    write_json(outdir + "/checkpoint.json",
               checkpoint_to_json(res.final_g, res.t_final, res.basis_hash,
                                  problem.cfg.hash()));
    json ladder = ladder_to_json(res.ladder);
    ladder["config_hash"] = problem.cfg.hash_hex();
    std::ostringstream bh;
    bh << std::hex << res.basis_hash;
    ladder["basis_hash"] = bh.str();
    write_json(outdir + "/continuation.json", ladder);
    write_json(outdir + "/run_summary.json", run_summary_json(problem, res));
    write_json(outdir + "/config.json", problem.cfg.to_json());
}

}  // namespace nsgal
