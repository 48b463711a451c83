#pragma once

#include "nsgal/config.hpp"
#include "nsgal/data.hpp"

namespace nsgal {

/// Shipped named configurations. Every preset is fully pinned (data, sizes,
/// tolerances); the seed only matters for the random presets.
inline std::vector<std::string> preset_names() {
    return {"zero",       "single-mode",      "taylor-green",
            "random-8",   "clay-class-small", "stress-large",
            "exhaust-bump"};
}

inline RunConfig make_preset_config(const std::string& name, std::uint64_t seed = 1) {
    RunConfig c;
    c.seed = seed;
    c.initial_data.kind = InitialDataSpec::Kind::Preset;
    c.initial_data.preset = name;
    if (name == "zero") {
        c.basis_radius = 2;
        c.nu = 1.0;
        c.lift_order = 2;
        c.horizon = 1.0;
    } else if (name == "single-mode") {
        c.basis_radius = 1;
        c.nu = 1.0;
        c.lift_order = 2;
        c.lifted = true;
        c.horizon = 1.0;
        c.stepper.rtol = 1e-10;
        c.stepper.atol = 1e-16;
    } else if (name == "taylor-green") {
        c.basis_radius = 4;
        c.nu = 0.1;
        c.lift_order = 2;
        c.horizon = 1.0;
        c.stepper.rtol = 1e-8;
        c.stepper.atol = 1e-12;
    } else if (name == "random-8") {
        c.basis_radius = 2;
        c.nu = 0.2;
        c.lift_order = 2;
        c.lifted = true;
        c.horizon = 1.0;
        c.stepper.rtol = 1e-10;
        c.stepper.atol = 1e-14;
    } else if (name == "clay-class-small") {
        c.torus = TorusSpec{8.0, 32};
        c.basis_radius = 6;
        c.nu = 0.25;
        c.lift_order = 2;
        c.horizon = 5.0;
        c.stepper.rtol = 1e-8;
        c.stepper.atol = 1e-12;
        c.initial_data.kind = InitialDataSpec::Kind::Profile;
        c.initial_data.profile = {ProfileSpec::Kind::ClayCurl, 0.0, 0, {0.3, -0.4, 1.0}, 1.0};
        c.initial_data.cutoff_radius = 2.0;
        c.initial_data.target_enstrophy = 1e-2;
    } else if (name == "stress-large") {
        c.basis_radius = 4;
        c.nu = 1e-5;
        c.lift_order = 0;
        c.horizon = 2.0;
        c.stepper.rtol = 1e-6;
        c.stepper.atol = 1e-8;
        c.blowup_threshold = 1e6;
    } else if (name == "exhaust-bump") {
        ExhaustionPlan p;
        p.radii = {2.2, 4.05, 5.2};
        p.grids = {32, 64, 64};
        p.kappa_cut = 6.4;
        p.u0_profile = {ProfileSpec::Kind::BumpCurl, 2.0, 4, {0.3, -0.4, 1.0}, 1.5e-5};
        p.sample_points = {{0.3, 0.2, 0.1}, {-0.5, 0.4, -0.3}, {0.8, -0.6, 0.4}, {0.0, 0.0, 0.9}};
        p.sample_times = {0.0, 0.125, 0.25};
        p.horizon = 0.25;
        p.nu = 0.25;
        p.lift_order = 2;
        p.stepper.mode = StepperMode::FixedRK4;
        p.stepper.h = 0.005;
        c.stepper = p.stepper;
        c.exhaustion = std::move(p);
        c.initial_data.preset = "zero";
    } else {
        throw ConfigError("unknown preset \"" + name + "\"");
    }
    return c;
}

/// A materialized problem: torus, initial data, forcing, plus the resolved
/// configuration it came from.
struct Problem {
    RunConfig cfg;
    SpectralField u0;
    ForcingSpec forcing;
};

inline SpectralField materialize_initial_data(const RunConfig& cfg) {
    const InitialDataSpec& id = cfg.initial_data;
    switch (id.kind) {
        case InitialDataSpec::Kind::File: {
            SpectralField f = field_from_json(json::parse(read_text(id.file)));
            if (f.spec() != cfg.torus)
                throw ConfigError("initial_data file torus does not match the config torus");
            if (f.has_mean_mode(1e-300))
                throw ConfigError("initial data must be mean-free");
            if (!f.is_solenoidal(1e-10))
                throw ConfigError("initial data must be solenoidal");
            return f;
        }
        case InitialDataSpec::Kind::Profile: {
            long long ball2 = (long long)cfg.basis_radius * cfg.basis_radius;
            SpectralField f = sample_profile_field(cfg.torus, id.profile, id.cutoff_radius, ball2);
            if (id.target_enstrophy > 0.0 && enstrophy(f) > 0.0)
                f *= std::sqrt(id.target_enstrophy / enstrophy(f));
            return f;
        }
        case InitialDataSpec::Kind::Preset: {
            const std::string& p = id.preset;
            if (p == "zero" || p == "exhaust-bump") return SpectralField(cfg.torus);
            if (p == "single-mode") return single_mode_data(cfg.torus);
            if (p == "taylor-green") return taylor_green_data(cfg.torus);
            if (p == "random-8") {
                SpectralField f = random_solenoidal_data(cfg.torus, 2, 8, cfg.seed);
                double n = l2_norm(f);
                if (n > 0.0) f *= 0.4 / n;
                return f;
            }
            if (p == "clay-class-small")
                return materialize_initial_data(make_preset_config(p, cfg.seed));
            if (p == "stress-large") {
                SpectralField f = random_solenoidal_data(cfg.torus, 1, 3, cfg.seed);
                if (enstrophy(f) > 0.0) f *= std::sqrt(8e5 / enstrophy(f));
                return f;
            }
            throw ConfigError("unknown preset \"" + p + "\"");
        }
    }
    throw ConfigError("unreachable initial data kind");
}

inline Problem materialize(const RunConfig& cfg) {
    cfg.validate();
    Problem p;
    p.cfg = cfg;
    p.u0 = materialize_initial_data(cfg);
    p.forcing = cfg.forcing;
    p.forcing.spec = cfg.torus;
    if (!p.forcing.empty()) p.forcing.validate();
    if (p.u0.has_mean_mode(1e-300)) throw ConfigError("initial data must be mean-free");
    return p;
}

}  // namespace nsgal
