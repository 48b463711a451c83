#pragma once

#include <optional>
#include <set>

#include "nsgal/exhaust.hpp"
#include "nsgal/serialize.hpp"

namespace nsgal {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, val] : j.items())
        if (!allowed.count(key))
            throw ConfigError("config: unknown key \"" + key + "\" in " + where);
}

inline double num(const json& j, const std::string& key, double fallback,
                  const std::string& where) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_string()) return parse_dec(v.get<std::string>());
    if (!v.is_number()) throw ConfigError("config: " + where + "." + key + " must be a number");
    return v.get<double>();
}

}  // namespace detail

/// Initial-data selector: a named preset, a spectral file, or a closed-form
/// profile sampled on the torus.
struct InitialDataSpec {
    enum class Kind { Preset, File, Profile };
    Kind kind = Kind::Preset;
    std::string preset = "zero";
    std::string file;
    ProfileSpec profile;
    double cutoff_radius = 0.0;      // 0: no cutoff applied
    double target_enstrophy = -1.0;  // <0: keep the profile amplitude
};

struct RunConfig {
    TorusSpec torus{2.0 * M_PI, 32};
    int basis_radius = 2;
    double nu = 1.0;
    int lift_order = 3;  // 0 disables the lift (direct runs only)
    double horizon = 1.0;
    bool lifted = false;
    StepperConfig stepper;
    InitialDataSpec initial_data;
    ForcingSpec forcing;  // empty spec means f = 0
    std::uint64_t seed = 1;
    double blowup_threshold = 1e6;
    int band_cap = 48;  // |k| cap for lift convolutions; <0 unlimited
    std::string output_dir = "out";
    int test_corrupt_tensor = -1;  // verification fault-injection hook
    std::optional<ExhaustionPlan> exhaustion;

    long long band_cap_ball2() const {
        return band_cap < 0 ? -1 : (long long)band_cap * band_cap;
    }

    void validate() const {
        torus.validate();
        if (basis_radius < 1) throw ConfigError("config: basis_radius must be >= 1");
        if (!(nu > 0.0)) throw ConfigError("config: viscosity nu must be positive");
        if (lift_order < 0 || lift_order > 8)
            throw ConfigError("config: lift_order must be in [0, 8]");
        if (lifted && lift_order < 1)
            throw ConfigError("config: the lifted formulation needs lift_order >= 1");
        if (!(horizon > 0.0)) throw ConfigError("config: horizon must be positive");
        if (!(blowup_threshold > 0.0))
            throw ConfigError("config: blowup_threshold must be positive");
        try {
            stepper.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: stepper: ") + e.what());
        }
        if (exhaustion) {
            try {
                exhaustion->validate();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("config: exhaustion: ") + e.what());
            }
        }
    }

    json to_json() const;
    static RunConfig from_json(const json& j);

    std::uint64_t hash() const {
        std::string s = to_json().dump();
        return fnv1a(fnv1a_init(), s.data(), s.size());
    }
    std::string hash_hex() const {
        std::ostringstream ss;
        ss << std::hex << hash();
        return ss.str();
    }
};

namespace detail {

inline json profile_to_json(const ProfileSpec& p) {
    json j;
    j["kind"] = p.kind == ProfileSpec::Kind::Zero      ? "zero"
                : p.kind == ProfileSpec::Kind::BumpCurl ? "bump-curl"
                                                         : "clay-curl";
    j["support_radius"] = dec17(p.support_radius);
    j["power"] = p.power;
    j["axis"] = json::array({dec17(p.axis[0]), dec17(p.axis[1]), dec17(p.axis[2])});
    j["amplitude"] = dec17(p.amplitude);
    return j;
}

inline ProfileSpec profile_from_json(const json& j) {
    reject_unknown_keys(j, {"kind", "support_radius", "power", "axis", "amplitude"}, "profile");
    ProfileSpec p;
    std::string kind = j.value("kind", "zero");
    if (kind == "zero")
        p.kind = ProfileSpec::Kind::Zero;
    else if (kind == "bump-curl")
        p.kind = ProfileSpec::Kind::BumpCurl;
    else if (kind == "clay-curl")
        p.kind = ProfileSpec::Kind::ClayCurl;
    else
        throw ConfigError("config: unknown profile kind \"" + kind + "\"");
    p.support_radius = num(j, "support_radius", p.support_radius, "profile");
    p.power = j.value("power", p.power);
    if (j.contains("axis")) {
        const auto& a = j.at("axis");
        for (int i = 0; i < 3; ++i)
            p.axis[i] = a.at(i).is_string() ? parse_dec(a.at(i).get<std::string>())
                                            : a.at(i).get<double>();
    }
    p.amplitude = num(j, "amplitude", p.amplitude, "profile");
    return p;
}

}  // namespace detail

inline json RunConfig::to_json() const {
    json j;
    j["format_version"] = kFormatVersion;
    j["torus"] = json{{"L", dec17(torus.L)}, {"grid", torus.G}};
    j["basis_radius"] = basis_radius;
    j["nu"] = dec17(nu);
    j["lift_order"] = lift_order;
    j["horizon"] = dec17(horizon);
    j["formulation"] = lifted ? "lifted" : "direct";
    j["stepper"] = json{{"mode", stepper.mode == StepperMode::FixedRK4 ? "fixed-rk4" : "adaptive"},
                        {"h", dec17(stepper.h)},
                        {"rtol", dec17(stepper.rtol)},
                        {"atol", dec17(stepper.atol)},
                        {"max_step", dec17(stepper.max_step)},
                        {"min_step", dec17(stepper.min_step)}};
    json id;
    switch (initial_data.kind) {
        case InitialDataSpec::Kind::Preset: id["preset"] = initial_data.preset; break;
        case InitialDataSpec::Kind::File: id["file"] = initial_data.file; break;
        case InitialDataSpec::Kind::Profile:
            id["profile"] = detail::profile_to_json(initial_data.profile);
            id["cutoff_radius"] = dec17(initial_data.cutoff_radius);
            id["target_enstrophy"] = dec17(initial_data.target_enstrophy);
            break;
    }
    j["initial_data"] = id;
    if (!forcing.empty()) {
        json modes = json::array();
        for (const auto& m : forcing.modes) {
            json mm;
            mm["k"] = json::array({m.k.k1, m.k.k2, m.k.k3});
            json amp = json::array();
            for (int i = 0; i < 3; ++i) {
                amp.push_back(dec17(m.amp[i].real()));
                amp.push_back(dec17(m.amp[i].imag()));
            }
            mm["amp"] = amp;
            json poly = json::array();
            for (double c : m.c) poly.push_back(dec17(c));
            mm["poly"] = poly;
            modes.push_back(mm);
        }
        j["forcing"] = json{{"modes", modes}};
    }
    j["seed"] = seed;
    j["blowup_threshold"] = dec17(blowup_threshold);
    j["band_cap"] = band_cap;
    // output_dir is runtime plumbing, not experiment identity: kept out of
    // the canonical form so reports regenerate identically anywhere
    if (test_corrupt_tensor >= 0) j["test_corrupt_tensor"] = test_corrupt_tensor;
    if (exhaustion) {
        const auto& p = *exhaustion;
        json e;
        json radii = json::array(), grids = json::array();
        for (double r : p.radii) radii.push_back(dec17(r));
        for (int g : p.grids) grids.push_back(g);
        e["radii"] = radii;
        e["grids"] = grids;
        e["kappa_cut"] = dec17(p.kappa_cut);
        e["u0_profile"] = detail::profile_to_json(p.u0_profile);
        e["f_profile"] = detail::profile_to_json(p.f_profile);
        json poly = json::array();
        for (double c : p.f_time_poly) poly.push_back(dec17(c));
        e["f_time_poly"] = poly;
        json pts = json::array();
        for (const auto& x : p.sample_points)
            pts.push_back(json::array({dec17(x[0]), dec17(x[1]), dec17(x[2])}));
        e["sample_points"] = pts;
        json ts = json::array();
        for (double t : p.sample_times) ts.push_back(dec17(t));
        e["sample_times"] = ts;
        e["horizon"] = dec17(p.horizon);
        e["nu"] = dec17(p.nu);
        e["lift_order"] = p.lift_order;
        e["band_tail_tol"] = dec17(p.band_tail_tol);
        j["exhaustion"] = e;
    }
    return j;
}

inline RunConfig RunConfig::from_json(const json& j) {
    detail::reject_unknown_keys(
        j,
        {"format_version", "torus", "basis_radius", "nu", "lift_order", "horizon", "formulation",
         "stepper", "initial_data", "forcing", "seed", "blowup_threshold", "band_cap",
         "output_dir", "test_corrupt_tensor", "exhaustion"},
        "top level");
    RunConfig c;
    if (j.contains("format_version") && j.at("format_version").get<int>() != kFormatVersion)
        throw ConfigError("config: unsupported format_version");
    if (j.contains("torus")) {
        const auto& t = j.at("torus");
        detail::reject_unknown_keys(t, {"L", "grid"}, "torus");
        c.torus.L = detail::num(t, "L", c.torus.L, "torus");
        c.torus.G = t.value("grid", c.torus.G);
    }
    c.basis_radius = j.value("basis_radius", c.basis_radius);
    c.nu = detail::num(j, "nu", c.nu, "top level");
    c.lift_order = j.value("lift_order", c.lift_order);
    c.horizon = detail::num(j, "horizon", c.horizon, "top level");
    if (j.contains("formulation")) {
        std::string f = j.at("formulation").get<std::string>();
        if (f == "lifted")
            c.lifted = true;
        else if (f == "direct")
            c.lifted = false;
        else
            throw ConfigError("config: formulation must be \"lifted\" or \"direct\"");
    }
    if (j.contains("stepper")) {
        const auto& s = j.at("stepper");
        detail::reject_unknown_keys(s, {"mode", "h", "rtol", "atol", "max_step", "min_step"},
                                    "stepper");
        if (s.contains("mode")) {
            std::string m = s.at("mode").get<std::string>();
            if (m == "fixed-rk4")
                c.stepper.mode = StepperMode::FixedRK4;
            else if (m == "adaptive")
                c.stepper.mode = StepperMode::AdaptiveRK45;
            else
                throw ConfigError("config: stepper.mode must be \"fixed-rk4\" or \"adaptive\"");
        }
        c.stepper.h = detail::num(s, "h", c.stepper.h, "stepper");
        c.stepper.rtol = detail::num(s, "rtol", c.stepper.rtol, "stepper");
        c.stepper.atol = detail::num(s, "atol", c.stepper.atol, "stepper");
        c.stepper.max_step = detail::num(s, "max_step", c.stepper.max_step, "stepper");
        c.stepper.min_step = detail::num(s, "min_step", c.stepper.min_step, "stepper");
    }
    if (j.contains("initial_data")) {
        const auto& id = j.at("initial_data");
        detail::reject_unknown_keys(id, {"preset", "file", "profile", "cutoff_radius",
                                         "target_enstrophy"},
                                    "initial_data");
        if (id.contains("preset")) {
            c.initial_data.kind = InitialDataSpec::Kind::Preset;
            c.initial_data.preset = id.at("preset").get<std::string>();
        } else if (id.contains("file")) {
            c.initial_data.kind = InitialDataSpec::Kind::File;
            c.initial_data.file = id.at("file").get<std::string>();
        } else if (id.contains("profile")) {
            c.initial_data.kind = InitialDataSpec::Kind::Profile;
            c.initial_data.profile = detail::profile_from_json(id.at("profile"));
            c.initial_data.cutoff_radius =
                detail::num(id, "cutoff_radius", 0.0, "initial_data");
            c.initial_data.target_enstrophy =
                detail::num(id, "target_enstrophy", -1.0, "initial_data");
        } else {
            throw ConfigError("config: initial_data needs preset, file, or profile");
        }
    }
    if (j.contains("forcing")) {
        const auto& f = j.at("forcing");
        detail::reject_unknown_keys(f, {"modes"}, "forcing");
        c.forcing.spec = c.torus;
        for (const auto& mm : f.at("modes")) {
            detail::reject_unknown_keys(mm, {"k", "amp", "poly"}, "forcing mode");
            ForcingSpec::Mode m;
            m.k = {mm.at("k").at(0).get<int>(), mm.at("k").at(1).get<int>(),
                   mm.at("k").at(2).get<int>()};
            const auto& amp = mm.at("amp");
            for (int i = 0; i < 3; ++i) {
                auto g = [&](int idx) {
                    return amp.at(idx).is_string() ? parse_dec(amp.at(idx).get<std::string>())
                                                   : amp.at(idx).get<double>();
                };
                m.amp[i] = std::complex<double>(g(2 * i), g(2 * i + 1));
            }
            for (const auto& cc : mm.at("poly"))
                m.c.push_back(cc.is_string() ? parse_dec(cc.get<std::string>())
                                             : cc.get<double>());
            c.forcing.modes.push_back(std::move(m));
        }
        c.forcing.validate();
    } else {
        c.forcing.spec = c.torus;
    }
    c.seed = j.value("seed", c.seed);
    c.blowup_threshold = detail::num(j, "blowup_threshold", c.blowup_threshold, "top level");
    c.band_cap = j.value("band_cap", c.band_cap);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.test_corrupt_tensor = j.value("test_corrupt_tensor", -1);
    if (j.contains("exhaustion")) {
        const auto& e = j.at("exhaustion");
        detail::reject_unknown_keys(e,
                                    {"radii", "grids", "kappa_cut", "u0_profile", "f_profile",
                                     "f_time_poly", "sample_points", "sample_times", "horizon",
                                     "nu", "lift_order", "band_tail_tol"},
                                    "exhaustion");
        ExhaustionPlan p;
        p.radii.clear();
        for (const auto& r : e.at("radii"))
            p.radii.push_back(r.is_string() ? parse_dec(r.get<std::string>()) : r.get<double>());
        p.grids.clear();
        for (const auto& g : e.at("grids")) p.grids.push_back(g.get<int>());
        p.kappa_cut = detail::num(e, "kappa_cut", p.kappa_cut, "exhaustion");
        if (e.contains("u0_profile")) p.u0_profile = detail::profile_from_json(e.at("u0_profile"));
        if (e.contains("f_profile")) p.f_profile = detail::profile_from_json(e.at("f_profile"));
        if (e.contains("f_time_poly"))
            for (const auto& cc : e.at("f_time_poly"))
                p.f_time_poly.push_back(cc.is_string() ? parse_dec(cc.get<std::string>())
                                                       : cc.get<double>());
        for (const auto& pt : e.at("sample_points"))
            p.sample_points.push_back(Vec3{
                pt.at(0).is_string() ? parse_dec(pt.at(0).get<std::string>()) : pt.at(0).get<double>(),
                pt.at(1).is_string() ? parse_dec(pt.at(1).get<std::string>()) : pt.at(1).get<double>(),
                pt.at(2).is_string() ? parse_dec(pt.at(2).get<std::string>()) : pt.at(2).get<double>()});
        for (const auto& t : e.at("sample_times"))
            p.sample_times.push_back(t.is_string() ? parse_dec(t.get<std::string>())
                                                   : t.get<double>());
        p.horizon = detail::num(e, "horizon", p.horizon, "exhaustion");
        p.nu = detail::num(e, "nu", p.nu, "exhaustion");
        p.lift_order = e.value("lift_order", p.lift_order);
        p.band_tail_tol = detail::num(e, "band_tail_tol", p.band_tail_tol, "exhaustion");
        p.stepper = c.stepper;
        p.blowup_threshold = c.blowup_threshold;
        c.exhaustion = std::move(p);
    }
    c.validate();
    return c;
}

}  // namespace nsgal
