#pragma once

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nsgal/continuation.hpp"
#include "nsgal/exhaust.hpp"
#include "nsgal/forcing.hpp"
#include "nsgal/lift.hpp"
#include "nsgal/trilinear.hpp"

namespace nsgal {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

/// Decimal with 17 significant digits: round-trips IEEE doubles exactly.
inline std::string dec17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
inline double parse_dec(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

/// SpectralField container: {"format_version", "L", "modes": {"k1,k2,k3":
/// [re1,im1,re2,im2,re3,im3]}} with coefficients as 17-digit decimal strings.
inline json field_to_json(const SpectralField& f) {
    json j;
    j["format_version"] = kFormatVersion;
    j["L"] = dec17(f.spec().L);
    j["grid"] = f.spec().G;
    json modes = json::object();
    for (const auto& [k, c] : f.modes()) {
        json arr = json::array();
        for (int i = 0; i < 3; ++i) {
            arr.push_back(dec17(c[i].real()));
            arr.push_back(dec17(c[i].imag()));
        }
        modes[k.key()] = arr;
    }
    j["modes"] = modes;
    return j;
}

inline SpectralField field_from_json(const json& j) {
    if (j.at("format_version").get<int>() != kFormatVersion)
        throw std::runtime_error("field_from_json: unsupported format version");
    TorusSpec spec{parse_dec(j.at("L").get<std::string>()), j.value("grid", 32)};
    SpectralField f(spec);
    for (const auto& [key, arr] : j.at("modes").items()) {
        WaveVector k;
        if (std::sscanf(key.c_str(), "%d,%d,%d", &k.k1, &k.k2, &k.k3) != 3)
            throw std::runtime_error("field_from_json: bad wavevector key " + key);
        CVec3 c;
        for (int i = 0; i < 3; ++i)
            c[i] = std::complex<double>(parse_dec(arr.at(2 * i).get<std::string>()),
                                        parse_dec(arr.at(2 * i + 1).get<std::string>()));
        f.set(k, c);
    }
    if (!f.is_hermitian(1e-10))
        throw std::runtime_error("field_from_json: mode list is not Hermitian symmetric");
    return f;
}

/// LiftData: the SpectralField container with one entry per derivative order.
inline json lift_to_json(const LiftData& lift) {
    json j;
    j["format_version"] = kFormatVersion;
    j["J"] = lift.J;
    j["nu"] = dec17(lift.nu);
    json ds = json::array();
    for (const auto& d : lift.derivs) ds.push_back(field_to_json(d));
    j["derivs"] = ds;
    return j;
}

inline LiftData lift_from_json(const json& j) {
    if (j.at("format_version").get<int>() != kFormatVersion)
        throw std::runtime_error("lift_from_json: unsupported format version");
    LiftData lift;
    lift.J = j.at("J").get<int>();
    lift.nu = parse_dec(j.at("nu").get<std::string>());
    for (const auto& d : j.at("derivs")) lift.derivs.push_back(field_from_json(d));
    if (int(lift.derivs.size()) != lift.J + 1)
        throw std::runtime_error("lift_from_json: derivative count does not match J");
    return lift;
}

inline json checkpoint_to_json(const std::vector<double>& g, double t,
                               std::uint64_t basis_hash, std::uint64_t config_hash) {
    json j;
    j["format_version"] = kFormatVersion;
    std::ostringstream bh, ch;
    bh << std::hex << basis_hash;
    ch << std::hex << config_hash;
    j["basis_hash"] = bh.str();
    j["config_hash"] = ch.str();
    j["t"] = dec17(t);
    json arr = json::array();
    for (double v : g) arr.push_back(dec17(v));
    j["g"] = arr;
    return j;
}

inline std::pair<std::vector<double>, double> checkpoint_from_json(const json& j) {
    std::vector<double> g;
    for (const auto& v : j.at("g")) g.push_back(parse_dec(v.get<std::string>()));
    return {g, parse_dec(j.at("t").get<std::string>())};
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_json(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

inline std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
    std::ostringstream out;
    out << "t,u_l2,v_l2,enstrophy_u,enstrophy_v,energy_identity_residual,q_norm,"
           "orthogonality_defect\n";
    for (const auto& r : rows)
        out << dec17(r.t) << ',' << dec17(r.u_l2) << ',' << dec17(r.v_l2) << ','
            << dec17(r.enstrophy_u) << ',' << dec17(r.enstrophy_v) << ','
            << dec17(r.energy_residual) << ',' << dec17(r.q_norm) << ','
            << dec17(r.orth_defect) << '\n';
    return out.str();
}

/// Tensor audit dump: CSV with columns i,m,k,value.
inline std::string tensor_csv(const TrilinearTensor& tensor) {
    std::ostringstream out;
    out << "i,m,k,value\n";
    for (const auto& e : tensor.entries)
        out << e.i << ',' << e.m << ',' << e.k << ',' << dec17(e.v) << '\n';
    return out.str();
}

inline json ladder_to_json(const ContinuationLog& log) {
    json j;
    j["format_version"] = kFormatVersion;
    j["status"] = to_string(log.status);
    j["t_final"] = dec17(log.t_final);
    j["blowup_threshold"] = dec17(log.blowup_threshold);
    json rungs = json::array();
    for (const auto& r : log.rungs) {
        json rr;
        rr["t_start"] = dec17(r.t_start);
        rr["t_end"] = dec17(r.t_end);
        rr["m_breve"] = dec17(r.m_breve);
        rr["c3_scheduled"] = dec17(r.c3_scheduled);
        rr["c3_realized"] = dec17(r.c3_realized);
        rr["guaranteed_bound"] = dec17(r.guaranteed_bound);
        rr["sup_enstrophy"] = dec17(r.sup_enstrophy);
        rr["conditional_applicable"] = r.conditional_applicable;
        rr["conditional_respected"] = r.conditional_respected;
        rungs.push_back(rr);
    }
    j["rungs"] = rungs;
    if (log.blowup) {
        json b;
        b["threshold"] = dec17(log.blowup->threshold);
        b["last_finite_time"] = dec17(log.blowup->last_finite_time);
        json tail = json::array();
        for (const auto& [t, e] : log.blowup->enstrophy_tail)
            tail.push_back(json::array({dec17(t), dec17(e)}));
        b["enstrophy_tail"] = tail;
        j["blowup"] = b;
    }
    return j;
}

inline json exhaustion_to_json(const ExhaustionReport& rep) {
    json j;
    j["format_version"] = kFormatVersion;
    j["partial"] = rep.partial;
    json ds = json::array();
    for (double d : rep.d) ds.push_back(dec17(d));
    j["d"] = ds;
    json rungs = json::array();
    for (const auto& r : rep.rungs) {
        json rr;
        rr["r"] = dec17(r.r);
        rr["L"] = dec17(r.L);
        rr["G"] = r.G;
        rr["kmax"] = r.kmax;
        rr["n_modes"] = r.n_modes;
        {
            std::ostringstream mh;
            mh << std::hex << r.mode_set_hash;
            rr["mode_set_hash"] = mh.str();
        }
        rr["u_on_l2"] = dec17(r.u_on_l2);
        rr["u_on_enstrophy"] = dec17(r.u_on_enstrophy);
        rr["div_defect_before"] = dec17(r.div_defect_before);
        rr["gradient_part_norm"] = dec17(r.gradient_part_norm);
        rr["tail_l2"] = dec17(r.tail_l2);
        rr["band_tail_fraction"] = dec17(r.band_tail_fraction);
        rr["ladder_status"] = to_string(r.ladder.status);
        rr["apriori_bound"] = dec17(r.apriori_bound);
        rr["apriori_ok"] = r.apriori_ok;
        json ul = json::array();
        for (double v : r.u_l2_at_times) ul.push_back(dec17(v));
        rr["u_l2_at_times"] = ul;
        json samples = json::array();
        for (const auto& row : r.samples) {
            json jrow = json::array();
            for (const auto& v : row)
                jrow.push_back(json::array({dec17(v[0]), dec17(v[1]), dec17(v[2])}));
            samples.push_back(jrow);
        }
        rr["samples"] = samples;
        rungs.push_back(rr);
    }
    j["rungs"] = rungs;
    return j;
}

}  // namespace nsgal
