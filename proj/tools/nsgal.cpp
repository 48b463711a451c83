// nsgal: spectral Galerkin Navier-Stokes laboratory on the periodic torus.
//
// Subcommands: simulate, verify, lift-check, exhaust, oracle.
// Exit status: 0 all checks pass, 1 check failure, 2 usage/config error,
// 3 terminal blow-up or step-underflow.

#include <CLI11.hpp>
#include <iostream>

#include "nsgal/grid_oracle.hpp"
#include "nsgal/runner.hpp"
#include "nsgal/verify.hpp"

using namespace nsgal;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::int64_t seed = -1;
    std::string formulation;
    double fixed_step = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration JSON path");
    cmd->add_option("--preset", opts.preset,
                    "named preset (zero, single-mode, taylor-green, random-8, "
                    "clay-class-small, stress-large, exhaust-bump)");
    cmd->add_option("--out", opts.out_dir, "output directory")->envname("NSGAL_OUT");
    cmd->add_option("--seed", opts.seed, "random seed override")->envname("NSGAL_SEED");
    cmd->add_option("--formulation", opts.formulation, "lifted | direct")
        ->envname("NSGAL_FORMULATION");
    cmd->add_option("--fixed-step", opts.fixed_step,
                    "fixed RK4 step (switches the stepper to fixed mode)")
        ->envname("NSGAL_FIXED_STEP");
}

RunConfig load_config(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty())
        cfg = RunConfig::from_json(json::parse(read_text(opts.config_path)));
    else if (!opts.preset.empty())
        cfg = make_preset_config(opts.preset, opts.seed >= 0 ? std::uint64_t(opts.seed) : 1);
    else
        throw ConfigError("either --config or --preset is required");
    if (opts.seed >= 0) cfg.seed = std::uint64_t(opts.seed);
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    if (!opts.formulation.empty()) {
        if (opts.formulation == "lifted")
            cfg.lifted = true;
        else if (opts.formulation == "direct")
            cfg.lifted = false;
        else
            throw ConfigError("--formulation must be lifted or direct");
    }
    if (opts.fixed_step > 0.0) {
        cfg.stepper.mode = StepperMode::FixedRK4;
        cfg.stepper.h = opts.fixed_step;
        if (cfg.exhaustion) cfg.exhaustion->stepper = cfg.stepper;
    }
    cfg.validate();
    return cfg;
}

int cmd_simulate(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    Problem problem = materialize(cfg);
    SimulateResult res = simulate(problem);
    write_simulation_outputs(problem, res, cfg.output_dir);
    std::cout << "status: " << to_string(res.ladder.status) << "  t_final: " << res.t_final
              << "  rungs: " << res.ladder.rungs.size() << "\n";
    return res.ladder.status == LadderStatus::ReachedHorizon ? 0 : 3;
}

int cmd_verify(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    Problem problem = materialize(cfg);
    BasisSpec basis = BasisSpec::build_ball(cfg.torus, cfg.basis_radius);
    TrilinearTensor tensor = assemble_trilinear(basis);
    VerifyReport rep = run_verify(problem, basis, tensor);
    std::filesystem::create_directories(cfg.output_dir);
    write_json(cfg.output_dir + "/verify.json", verify_to_json(rep, cfg, basis.hash()));
    write_text(cfg.output_dir + "/tensor.csv", tensor_csv(tensor));
    for (const auto& c : rep.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (c.degenerate) std::cout << " (degenerate)";
        std::cout << "  defect=" << c.defect;
        if (!c.detail.empty()) std::cout << "  " << c.detail;
        std::cout << "\n";
    }
    return rep.all_pass() ? 0 : 1;
}

int cmd_lift_check(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    Problem problem = materialize(cfg);
    json out;
    out["format_version"] = kFormatVersion;
    out["config_hash"] = cfg.hash_hex();
    if (problem.u0.empty() || cfg.lift_order < 1) {
        out["degenerate"] = true;
        std::filesystem::create_directories(cfg.output_dir);
        write_json(cfg.output_dir + "/lift_check.json", out);
        std::cout << "[PASS] lift-check (degenerate: zero data or no lift)\n";
        return 0;
    }
    LiftData lift =
        build_lift(problem.u0, problem.forcing, cfg.lift_order, cfg.nu, cfg.band_cap_ball2());
    auto theta_rep = check_theta_orthogonal(lift, problem.forcing, cfg.lift_order - 1);
    json ratios = json::array();
    for (double r : theta_rep.ratios) ratios.push_back(dec17(r));
    out["theta_orthogonality_ratios"] = ratios;
    bool theta_ok = theta_rep.max_ratio() <= 1e-8;

    BasisSpec basis = BasisSpec::build_ball(cfg.torus, cfg.basis_radius);
    GalerkinProblem gp = GalerkinProblem::assemble(basis, cfg.nu, problem.forcing, lift);
    GalerkinState rest{std::vector<double>(gp.n(), 0.0), 0.0};
    std::vector<double> rhs0;
    gp.rhs(rest, rhs0);
    double rhs0_norm = 0.0;
    for (double v : rhs0) rhs0_norm = std::max(rhs0_norm, std::abs(v));
    double scale = l2_norm(theta_eval_from_stack(gp.theta, cfg.horizon)) + l2_norm(problem.u0);
    out["rhs_at_rest_relative"] = dec17(rhs0_norm / std::max(scale, 1e-300));
    bool flat_ok = rhs0_norm <= 1e-10 * std::max(scale, 1e-300);

    out["theta_pass"] = theta_ok;
    out["flatness_pass"] = flat_ok;
    std::filesystem::create_directories(cfg.output_dir);
    write_json(cfg.output_dir + "/lift_check.json", out);
    std::cout << (theta_ok ? "[PASS] " : "[FAIL] ") << "theta-orthogonality  max_ratio="
              << theta_rep.max_ratio() << "\n";
    std::cout << (flat_ok ? "[PASS] " : "[FAIL] ") << "rhs-at-rest  relative="
              << rhs0_norm / std::max(scale, 1e-300) << "\n";
    return theta_ok && flat_ok ? 0 : 1;
}

int cmd_exhaust(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    if (!cfg.exhaustion)
        throw ConfigError("exhaust requires an \"exhaustion\" section (or --preset exhaust-bump)");
    ExhaustionReport rep = run_exhaustion(*cfg.exhaustion);
    std::filesystem::create_directories(cfg.output_dir);
    json j = exhaustion_to_json(rep);
    j["config_hash"] = cfg.hash_hex();
    write_json(cfg.output_dir + "/exhaustion.json", j);
    for (std::size_t r = 0; r < rep.rungs.size(); ++r)
        write_text(cfg.output_dir + "/rung_" + std::to_string(r) + ".csv",
                   trajectory_csv(rep.rungs[r].rows));
    std::cout << "rungs: " << rep.rungs.size() << "  d:";
    for (double d : rep.d) std::cout << ' ' << d;
    std::cout << (rep.partial ? "  [partial]" : "") << "\n";
    return rep.partial ? 3 : 0;
}

int cmd_oracle(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts);
    Problem problem = materialize(cfg);
    double worst = 0.0;
    int fields = 0;
    auto check_pair = [&](const SpectralField& u, const SpectralField& v) {
        SpectralField conv = advect_spectral(u, v);
        SpectralField oracle = nonlinear_grid_oracle(u, v);
        for (const auto& [k, c] : conv.modes())
            worst = std::max(worst, std::sqrt(abs2(c - oracle.coeff(k))));
        for (const auto& [k, c] : oracle.modes())
            worst = std::max(worst, std::sqrt(abs2(c - conv.coeff(k))));
        ++fields;
    };
    if (!problem.u0.empty() && problem.u0.band_linf() < cfg.torus.G / 3)
        check_pair(problem.u0, problem.u0);
    for (std::uint64_t s = 0; s < 12; ++s) {
        SpectralField u = random_solenoidal_data(cfg.torus, 3, 12, cfg.seed * 131 + s, 0.7);
        SpectralField v = random_solenoidal_data(cfg.torus, 3, 12, cfg.seed * 137 + s, 0.7);
        check_pair(u, v);
    }
    json out;
    out["format_version"] = kFormatVersion;
    out["config_hash"] = cfg.hash_hex();
    out["fields_checked"] = fields;
    out["max_mode_defect"] = dec17(worst);
    std::filesystem::create_directories(cfg.output_dir);
    write_json(cfg.output_dir + "/oracle.json", out);
    bool ok = worst <= 1e-9;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "oracle-vs-convolution  max defect=" << worst
              << " over " << fields << " fields\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "nsgal: spectral Galerkin Navier-Stokes solver with Leray projection, "
        "Taylor lift, energy-based horizon extension, and domain exhaustion"};
    app.require_subcommand(1);

    CommonOpts o_sim, o_ver, o_lift, o_exh, o_ora;
    CLI::App* sim = app.add_subcommand("simulate", "run a configuration to its horizon");
    add_common(sim, o_sim);
    CLI::App* ver = app.add_subcommand("verify", "run the cross-module invariant suites");
    add_common(ver, o_ver);
    CLI::App* lif = app.add_subcommand("lift-check", "theta orthogonality and flatness report");
    add_common(lif, o_lift);
    CLI::App* exh = app.add_subcommand("exhaust", "run a domain-exhaustion plan");
    add_common(exh, o_exh);
    CLI::App* ora = app.add_subcommand("oracle", "convolution vs fine-grid oracle defect");
    add_common(ora, o_ora);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(o_sim);
        if (ver->parsed()) return cmd_verify(o_ver);
        if (lif->parsed()) return cmd_lift_check(o_lift);
        if (exh->parsed()) return cmd_exhaust(o_exh);
        if (ora->parsed()) return cmd_oracle(o_ora);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
