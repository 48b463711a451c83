#pragma once

#include "nsgal/continuation.hpp"
#include "nsgal/cutoff.hpp"
#include "nsgal/profiles.hpp"
#include "nsgal/pseudospectral.hpp"

namespace nsgal {

/// Ladder of growing tori standing in for the whole space: rung n solves on
/// the torus of period L_n = 4 r_n with data cut off by eta_{r_n} and
/// spectrally truncated at the common physical wavenumber kappa_cut.
struct ExhaustionPlan {
    std::vector<double> radii;   // r_1 < r_2 < ..., r_1 > 1, gaps > 1
    std::vector<int> grids;      // G_n per rung
    double kappa_cut = 6.4;      // shared physical cutoff
    ProfileSpec u0_profile;
    ProfileSpec f_profile;                    // spatial part of the forcing
    std::vector<double> f_time_poly;          // shared time polynomial (empty: f = 0)
    std::vector<Vec3> sample_points;
    std::vector<double> sample_times;         // within [0, horizon]
    double horizon = 0.25;
    double nu = 0.25;
    int lift_order = 0;                       // 0: direct formulation, else J
    StepperConfig stepper;
    double blowup_threshold = 1e6;
    double band_tail_tol = 0.25;  // max spectral energy fraction beyond the kept ball

    void validate() const {
        if (radii.size() < 2) throw std::invalid_argument("ExhaustionPlan: need >= 2 rungs");
        if (!(radii.front() > 1.0))
            throw std::invalid_argument("ExhaustionPlan: first radius must exceed 1");
        for (std::size_t i = 1; i < radii.size(); ++i)
            if (!(radii[i] > radii[i - 1] + 1.0))
                throw std::invalid_argument("ExhaustionPlan: radii must grow by more than 1");
        if (grids.size() != radii.size())
            throw std::invalid_argument("ExhaustionPlan: one grid size per rung");
        if (!(kappa_cut > 0.0) || !(horizon > 0.0) || !(nu > 0.0))
            throw std::invalid_argument("ExhaustionPlan: kappa_cut, horizon, nu must be positive");
        if (sample_points.empty() || sample_times.empty())
            throw std::invalid_argument("ExhaustionPlan: sample set must be nonempty");
    }

    double period(std::size_t rung) const { return 4.0 * radii[rung]; }
    /// kept modes: |kappa| <= kappa_cut, i.e. |k|^2 <= ball2(rung)
    long long ball2(std::size_t rung) const {
        double km = kappa_cut * period(rung) / (2.0 * M_PI);
        return (long long)std::floor(km * km + 1e-9);
    }
    int kmax(std::size_t rung) const {
        return int(std::floor(std::sqrt(double(ball2(rung))) + 1e-9));
    }
};

struct TruncatedData {
    SpectralField u_on;
    ForcingSpec f_n;
    double div_defect_before = 0.0;   // L2 norm of the divergence before projection
    double gradient_part_norm = 0.0;  // discarded gradient part
    double tail_l2 = 0.0;             // || (1 - eta) profile ||_2 on the rung box
    double band_tail_fraction = 0.0;  // energy beyond the kept ball / total
};

/// Samples eta_{r_n} * profile on the rung grid, transforms, keeps the common
/// physical ball, removes the mean and Leray-projects.
inline TruncatedData truncate_data(const ExhaustionPlan& plan, std::size_t rung) {
    double r = plan.radii[rung];
    TorusSpec spec{plan.period(rung), plan.grids[rung]};
    spec.validate();
    int kmax = plan.kmax(rung);
    if (3 * kmax >= spec.G)
        throw std::runtime_error("truncate_data: profile band exceeds the rung grid");
    CutoffSpec eta(r);
    GridTransform tf(spec);

    auto sample = [&](const ProfileSpec& prof) {
        RealGridField g(spec);
        int G = spec.G;
        double h = spec.L / G;
        std::size_t idx = 0;
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j)
                for (int kk = 0; kk < G; ++kk, ++idx) {
                    auto wrap = [&](int v) { return v >= G / 2 ? (v - G) * h : v * h; };
                    Vec3 x{wrap(i), wrap(j), wrap(kk)};
                    Vec3 val = eta(x) * prof.eval(x);
                    for (int c = 0; c < 3; ++c) g.at(c, idx) = val[c];
                }
        return g;
    };

    TruncatedData out;
    RealGridField g = sample(plan.u0_profile);

    // tail diagnostic: what the cutoff discarded, on this box
    {
        int G = spec.G;
        double h = spec.L / G;
        double acc = 0.0;
        std::size_t idx = 0;
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j)
                for (int kk = 0; kk < G; ++kk, ++idx) {
                    auto wrap = [&](int v) { return v >= G / 2 ? (v - G) * h : v * h; };
                    Vec3 x{wrap(i), wrap(j), wrap(kk)};
                    Vec3 val = (1.0 - eta(x)) * plan.u0_profile.eval(x);
                    acc += dot(val, val);
                }
        out.tail_l2 = std::sqrt(acc * h * h * h);
    }

    SpectralField full = tf.from_grid(g, spec.G / 2 - 1);
    double total2 = l2_norm2(full);
    long long ball2 = plan.ball2(rung);
    SpectralField kept = truncate_ball(full, ball2, /*mean_free=*/true);
    out.band_tail_fraction =
        total2 > 0.0 ? std::sqrt(std::max(0.0, total2 - l2_norm2(kept)) / total2) : 0.0;
    if (out.band_tail_fraction > plan.band_tail_tol)
        throw std::runtime_error("truncate_data: profile band exceeds the rung resolution");

    // divergence before projection
    double dd = 0.0;
    for (const auto& [k, c] : kept.modes()) {
        Vec3 kap = k.kappa(spec.L);
        dd += std::norm(dot(c, kap));
    }
    out.div_defect_before = std::sqrt(dd * spec.L * spec.L * spec.L);
    SpectralField projected = leray_project(kept);
    out.gradient_part_norm = l2_norm(kept - projected);
    projected.prune(1e-16);
    out.u_on = projected;

    if (plan.f_profile.kind != ProfileSpec::Kind::Zero && !plan.f_time_poly.empty()) {
        RealGridField gf = sample(plan.f_profile);
        SpectralField ff = truncate_ball(tf.from_grid(gf, spec.G / 2 - 1), ball2, true);
        ff.prune(1e-14);
        out.f_n.spec = spec;
        for (const auto& [k, c] : ff.modes()) out.f_n.modes.push_back({k, c, plan.f_time_poly});
    } else {
        out.f_n.spec = spec;
    }
    return out;
}

struct RungReport {
    double r = 0.0;
    double L = 0.0;
    int G = 0;
    int kmax = 0;
    std::size_t n_modes = 0;
    std::uint64_t mode_set_hash = 0;
    double u_on_l2 = 0.0;
    double u_on_enstrophy = 0.0;
    double div_defect_before = 0.0;
    double gradient_part_norm = 0.0;
    double tail_l2 = 0.0;
    double band_tail_fraction = 0.0;
    ContinuationLog ladder;
    std::vector<TrajectoryRow> rows;
    // samples[time_index][point_index]
    std::vector<std::vector<Vec3>> samples;
    std::vector<double> u_l2_at_times;
    double apriori_bound = 0.0;  // ||u_on||_2 + int ||f_n||_2
    bool apriori_ok = true;
};

struct ExhaustionReport {
    std::vector<RungReport> rungs;
    std::vector<double> d;  // d_n = max over samples |u_{n+1} - u_n|
    bool partial = false;
};

inline ExhaustionReport run_exhaustion(const ExhaustionPlan& plan) {
    plan.validate();
    ExhaustionReport report;
    for (std::size_t rung = 0; rung < plan.radii.size(); ++rung) {
        TorusSpec spec{plan.period(rung), plan.grids[rung]};
        TruncatedData data = truncate_data(plan, rung);
        int kmax = plan.kmax(rung);
        long long ball2 = plan.ball2(rung);

        std::vector<WaveVector> half;
        for (int a = -kmax; a <= kmax; ++a)
            for (int b = -kmax; b <= kmax; ++b)
                for (int c = -kmax; c <= kmax; ++c) {
                    WaveVector k{a, b, c};
                    if (!k.is_zero() && k.norm2() <= ball2 && k.is_positive())
                        half.push_back(k);
                }
        std::sort(half.begin(), half.end());

        GridTransform tf(spec);
        AdvectFn grid_conv = [&tf, &spec](const SpectralField& a, const SpectralField& b,
                                          long long cap) {
            std::size_t n = tf.cells();
            std::vector<double> ag(3 * n), dbg(n), acc(3 * n, 0.0);
            for (int j = 0; j < 3; ++j) tf.component_to_grid(a, j, -1, ag.data() + j * n);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    tf.component_to_grid(b, i, j, dbg.data());
                    const double* as = ag.data() + j * n;
                    double* ac = acc.data() + i * n;
                    for (std::size_t idx = 0; idx < n; ++idx) ac[idx] += as[idx] * dbg[idx];
                }
            RealGridField w(spec);
            w.data = std::move(acc);
            int band = cap >= 0 ? int(std::sqrt(double(cap)) + 1e-9) : spec.G / 3 - 1;
            SpectralField out = tf.from_grid(w, std::min(band, spec.G / 2 - 1));
            if (cap >= 0) out = truncate_ball(out, cap, false);
            out.prune(1e-16);
            return out;
        };

        std::optional<LiftData> lift;
        if (plan.lift_order > 0)
            lift = build_lift(data.u_on, data.f_n, plan.lift_order, plan.nu, -1, grid_conv,
                              ball2);
        PseudoSpectralFlow flow(spec, half, plan.nu, data.f_n, lift ? &*lift : nullptr,
                                grid_conv);

        RungReport rr;
        rr.r = plan.radii[rung];
        rr.L = spec.L;
        rr.G = spec.G;
        rr.kmax = kmax;
        rr.n_modes = half.size();
        {
            std::uint64_t h = fnv1a_init();
            h = fnv1a(h, &spec.L, sizeof(spec.L));
            for (const auto& k : half) {
                int v[3] = {k.k1, k.k2, k.k3};
                h = fnv1a(h, v, sizeof(v));
            }
            rr.mode_set_hash = h;
        }
        rr.u_on_l2 = l2_norm(data.u_on);
        rr.u_on_enstrophy = enstrophy(data.u_on);
        rr.div_defect_before = data.div_defect_before;
        rr.gradient_part_norm = data.gradient_part_norm;
        rr.tail_l2 = data.tail_l2;
        rr.band_tail_fraction = data.band_tail_fraction;
        rr.apriori_bound =
            rr.u_on_l2 + data.f_n.l2_time_integral(plan.horizon);

        std::vector<double> y = lift ? std::vector<double>(flow.dim(), 0.0)
                                     : flow.pack(data.u_on);
        std::vector<std::vector<double>> snapshots(plan.sample_times.size());
        LadderConfig lcfg;
        lcfg.extra_samples = plan.sample_times;
        auto monitor = [&](double t, const std::vector<double>& ys,
                           const std::vector<double>&) {
            for (std::size_t i = 0; i < plan.sample_times.size(); ++i)
                if (std::abs(t - plan.sample_times[i]) <= 1e-12 * std::max(1.0, plan.horizon))
                    snapshots[i] = ys;
            TrajectoryRow row;
            row.t = t;
            if (flow.lifted()) {
                row.v_l2 = std::sqrt(flow.energy(ys));
                row.enstrophy_v = flow.enstrophy_y(ys);
                std::vector<double> up = ys;
                std::vector<double> bp = flow.pack(flow.beta_at(t));
                for (std::size_t i = 0; i < up.size(); ++i) up[i] += bp[i];
                row.u_l2 = std::sqrt(flow.energy(up));
                row.enstrophy_u = flow.enstrophy_y(up);
            } else {
                row.u_l2 = std::sqrt(flow.energy(ys));
                row.enstrophy_u = flow.enstrophy_y(ys);
                row.v_l2 = row.u_l2;
                row.enstrophy_v = row.enstrophy_u;
            }
            rr.rows.push_back(row);
            return true;
        };
        rr.ladder = run_ladder(flow, plan.nu, y, plan.horizon, plan.stepper,
                               plan.blowup_threshold, lcfg, monitor);
        if (rr.ladder.status != LadderStatus::ReachedHorizon) report.partial = true;

        for (std::size_t i = 0; i < plan.sample_times.size(); ++i) {
            std::vector<Vec3> row(plan.sample_points.size(), Vec3{0, 0, 0});
            if (!snapshots[i].empty()) {
                SpectralField u = flow.unpack(snapshots[i]);
                if (lift) u += flow.beta_at(plan.sample_times[i]);
                for (std::size_t pt = 0; pt < plan.sample_points.size(); ++pt)
                    row[pt] = u.eval(plan.sample_points[pt]);
                double un = l2_norm(u);
                rr.u_l2_at_times.push_back(un);
                if (un > rr.apriori_bound * (1.0 + 1e-9)) rr.apriori_ok = false;
            } else {
                rr.u_l2_at_times.push_back(std::numeric_limits<double>::quiet_NaN());
            }
            rr.samples.push_back(std::move(row));
        }
        report.rungs.push_back(std::move(rr));
    }

    for (std::size_t n = 0; n + 1 < report.rungs.size(); ++n) {
        double d = 0.0;
        const auto& a = report.rungs[n].samples;
        const auto& b = report.rungs[n + 1].samples;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a[i].size(); ++j) {
                Vec3 diff = a[i][j] - b[i][j];
                d = std::max(d, norm(diff));
            }
        report.d.push_back(d);
    }
    return report;
}

}  // namespace nsgal
