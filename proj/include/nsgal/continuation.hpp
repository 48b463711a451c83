#pragma once

#include <algorithm>
#include <memory>

#include "nsgal/galerkin.hpp"
#include "nsgal/stepper.hpp"

namespace nsgal {

/// Galerkin coefficient dynamics as a FlowSystem. The basis is orthonormal,
/// so the monitored functionals are plain weighted sums of the coefficients.
class GalerkinFlow : public FlowSystem {
  public:
    GalerkinFlow(const GalerkinProblem& p, bool lifted) : p_(p), lifted_(lifted) {
        if (lifted && !p.lift_data)
            throw std::invalid_argument("GalerkinFlow: lifted flow requires lift data");
    }

    int dim() const override { return p_.n(); }
    void rhs(double t, const std::vector<double>& y, std::vector<double>& dydt) const override {
        state_.g = y;
        state_.t = t;
        if (lifted_)
            p_.rhs(state_, dydt);
        else
            p_.rhs_direct(state_, dydt);
    }
    double energy(const std::vector<double>& y) const override {
        double a = 0.0;
        for (double v : y) a += v * v;
        return a;
    }
    double enstrophy_y(const std::vector<double>& y) const override {
        double a = 0.0;
        for (int i = 0; i < p_.n(); ++i) a += p_.lambda[i] * y[i] * y[i];
        return a;
    }
    double dissipation(const std::vector<double>& y) const override {
        double a = 0.0;
        for (int i = 0; i < p_.n(); ++i) a += p_.lambda[i] * p_.lambda[i] * y[i] * y[i];
        return a;
    }
    double enstrophy_rate(const std::vector<double>& y,
                          const std::vector<double>& ydot) const override {
        double a = 0.0;
        for (int i = 0; i < p_.n(); ++i) a += 2.0 * p_.lambda[i] * y[i] * ydot[i];
        return a;
    }
    double energy_rate(const std::vector<double>& y,
                       const std::vector<double>& ydot) const override {
        double a = 0.0;
        for (int i = 0; i < p_.n(); ++i) a += 2.0 * y[i] * ydot[i];
        return a;
    }

    const GalerkinProblem& problem() const { return p_; }
    bool lifted() const { return lifted_; }

  private:
    const GalerkinProblem& p_;
    bool lifted_;
    mutable GalerkinState state_;
};

/// Monitor columns written to trajectory CSVs; the q columns stay NaN for
/// runs without a Galerkin residual (direct formulation, mode-space engine).
struct TrajectoryRow {
    double t = 0.0;
    double u_l2 = 0.0, v_l2 = 0.0;
    double enstrophy_u = 0.0, enstrophy_v = 0.0;
    double energy_residual = std::numeric_limits<double>::quiet_NaN();
    double q_norm = std::numeric_limits<double>::quiet_NaN();
    double orth_defect = std::numeric_limits<double>::quiet_NaN();
};

struct TrajectorySample {
    double t = 0.0;
    double energy = 0.0;      // ||.||_2^2
    double enstrophy = 0.0;   // ||grad .||_2^2
    double dissipation = 0.0; // ||Delta .||_2^2
    double energy_rate = 0.0;
    double enstrophy_rate = 0.0;
};

/// Largest observed value of max(0, dE/dt + nu*D) / (E^3 + 1) over the
/// samples, the empirical stand-in for the constant in
/// d/dt ||grad v||^2 + nu ||P Delta v||^2 <= c3 (||grad v||^6 + 1).
/// dE/dt comes from the analytic right-hand side, not finite differences.
inline double estimate_c3(const std::vector<TrajectorySample>& samples, double nu) {
    int finite_count = 0;
    for (const auto& s : samples)
        if (std::isfinite(s.enstrophy)) ++finite_count;
    if (finite_count < 10)
        throw std::invalid_argument("estimate_c3: need at least 10 finite samples");
    double c3 = 0.0;
    for (const auto& s : samples) {
        if (!std::isfinite(s.enstrophy)) continue;
        double num = std::max(0.0, s.enstrophy_rate + nu * s.dissipation);
        double den = s.enstrophy * s.enstrophy * s.enstrophy + 1.0;
        c3 = std::max(c3, num / den);
    }
    return c3;
}

struct HorizonExtension {
    double t_plus = 0.0;
    double guaranteed_bound = 0.0;  // sqrt(2) (M+1), valid while realized c3 <= scheduled
};

/// T+ = min(T. + (4 c3)^{-1} (M.+1)^{-2}, T); for c3 <= 0 the dichotomy gives
/// the whole horizon.
inline HorizonExtension extend_horizon(double t_breve, double m_breve, double c3, double T) {
    HorizonExtension ext;
    ext.guaranteed_bound = std::sqrt(2.0) * (m_breve + 1.0);
    if (!(c3 > 0.0)) {
        ext.t_plus = T;
        return ext;
    }
    double c4 = 1.0 / (4.0 * c3);
    ext.t_plus = std::min(t_breve + c4 / ((m_breve + 1.0) * (m_breve + 1.0)), T);
    return ext;
}

enum class LadderStatus { ReachedHorizon, Blowup, StepUnderflow, Stalled };

inline std::string to_string(LadderStatus s) {
    switch (s) {
        case LadderStatus::ReachedHorizon: return "reached-horizon";
        case LadderStatus::Blowup: return "blow-up";
        case LadderStatus::StepUnderflow: return "step-underflow";
        case LadderStatus::Stalled: return "stalled";
    }
    return "?";
}

struct LadderRung {
    double t_start = 0.0;
    double t_end = 0.0;
    double m_breve = 0.0;        // enstrophy bound observed at t_start
    double c3_scheduled = 0.0;   // value used by the extension rule (0 on the pilot)
    double c3_realized = 0.0;    // measured over the rung
    double guaranteed_bound = 0.0;
    double sup_enstrophy = 0.0;  // observed over the rung
    bool conditional_applicable = false;  // realized <= scheduled
    bool conditional_respected = true;    // sup <= sqrt(2)(M+1) when applicable
};

struct BlowupReport {
    double threshold = 0.0;
    double last_finite_time = 0.0;
    std::vector<std::pair<double, double>> enstrophy_tail;  // (t, E) history tail
};

struct ContinuationLog {
    std::vector<LadderRung> rungs;
    LadderStatus status = LadderStatus::ReachedHorizon;
    double t_final = 0.0;
    double blowup_threshold = 0.0;
    std::optional<BlowupReport> blowup;
};

struct LadderConfig {
    double pilot_fraction = 0.02;  // first rung length as a fraction of T
    double safety_factor = 2.0;    // scheduled c3 = safety * max realized
    int samples_per_rung = 24;
    int max_rungs = 100000;
    std::vector<double> extra_samples;  // times merged into the rung sampling
};

/// The continuation ladder: integrate -> measure M. -> estimate c3 ->
/// extend_horizon, repeated until the horizon, a blow-up threshold crossing,
/// or integrator failure. Identically zero problems take one rung to T.
inline ContinuationLog run_ladder(const FlowSystem& sys, double nu, std::vector<double>& y,
                                  double T, const StepperConfig& stepper,
                                  double blowup_threshold = 1e6, const LadderConfig& lcfg = {},
                                  const SampleSink& monitor = nullptr,
                                  double t0 = 0.0) {
    ContinuationLog log;
    log.blowup_threshold = blowup_threshold;
    double t = t0;
    double c3_known = 0.0;
    std::vector<std::pair<double, double>> tail;

    // identically zero data: the right-hand side vanishes for all time
    {
        bool zero_state = sys.energy(y) == 0.0;
        std::vector<double> dy(sys.dim());
        bool zero_rhs = true;
        if (zero_state) {
            for (double tp : {t0, t0 + 0.5 * (T - t0), T}) {
                sys.rhs(tp, y, dy);
                double m = 0.0;
                for (double v : dy) m = std::max(m, std::abs(v));
                if (m != 0.0) {
                    zero_rhs = false;
                    break;
                }
            }
        }
        if (zero_state && zero_rhs) {
            LadderRung rung;
            rung.t_start = t0;
            rung.t_end = T;
            rung.guaranteed_bound = std::sqrt(2.0);
            rung.conditional_applicable = true;
            log.rungs.push_back(rung);
            log.status = LadderStatus::ReachedHorizon;
            log.t_final = T;
            if (monitor) {
                sys.rhs(t0, y, dy);
                monitor(t0, y, dy);
                for (double ts : lcfg.extra_samples)
                    if (ts > t0 && ts < T) monitor(ts, y, dy);
                monitor(T, y, dy);
            }
            return log;
        }
    }

    int rung_index = 0;
    double last_monitor_t = -std::numeric_limits<double>::infinity();
    while (t < T && rung_index < lcfg.max_rungs) {
        LadderRung rung;
        rung.t_start = t;
        rung.m_breve = sys.enstrophy_y(y);
        if (rung_index == 0) {
            rung.c3_scheduled = 0.0;  // pilot rung: no estimate yet
            rung.t_end = std::min(T, t + std::max(lcfg.pilot_fraction * (T - t), 1e-12));
            rung.guaranteed_bound = std::sqrt(2.0) * (rung.m_breve + 1.0);
        } else {
            rung.c3_scheduled = lcfg.safety_factor * c3_known;
            HorizonExtension ext = extend_horizon(t, rung.m_breve, rung.c3_scheduled, T);
            rung.t_end = ext.t_plus;
            rung.guaranteed_bound = ext.guaranteed_bound;
            if (!(rung.t_end > t)) {
                log.status = LadderStatus::Stalled;
                log.t_final = t;
                log.rungs.push_back(rung);
                return log;
            }
        }

        std::vector<double> times;
        for (int i = 1; i <= lcfg.samples_per_rung; ++i)
            times.push_back(rung.t_start +
                            (rung.t_end - rung.t_start) * double(i) / lcfg.samples_per_rung);
        for (double ts : lcfg.extra_samples)
            if (ts > rung.t_start && ts <= rung.t_end) times.push_back(ts);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        std::vector<TrajectorySample> samples;
        bool threshold_hit = false;
        auto sink = [&](double ts, const std::vector<double>& ys,
                        const std::vector<double>& yd) {
            TrajectorySample s;
            s.t = ts;
            s.energy = sys.energy(ys);
            s.enstrophy = sys.enstrophy_y(ys);
            s.dissipation = sys.dissipation(ys);
            s.energy_rate = sys.energy_rate(ys, yd);
            s.enstrophy_rate = sys.enstrophy_rate(ys, yd);
            samples.push_back(s);
            tail.emplace_back(ts, s.enstrophy);
            if (tail.size() > 64) tail.erase(tail.begin());
            // rung boundaries are emitted by both adjoining rungs; report once
            if (monitor && ts != last_monitor_t) {
                last_monitor_t = ts;
                if (!monitor(ts, ys, yd)) return false;
            }
            if (s.enstrophy >= blowup_threshold) {
                threshold_hit = true;
                return false;
            }
            return true;
        };

        IntegrateResult ires = integrate(sys, y, t, times, stepper, sink);
        t = ires.t;

        rung.sup_enstrophy = rung.m_breve;
        double realized = 0.0;
        for (const auto& s : samples) {
            if (std::isfinite(s.enstrophy))
                rung.sup_enstrophy = std::max(rung.sup_enstrophy, s.enstrophy);
            double num = std::max(0.0, s.enstrophy_rate + nu * s.dissipation);
            double den = s.enstrophy * s.enstrophy * s.enstrophy + 1.0;
            if (std::isfinite(num) && std::isfinite(den)) realized = std::max(realized, num / den);
        }
        rung.c3_realized = realized;
        c3_known = std::max(c3_known, realized);
        rung.conditional_applicable =
            rung_index > 0 && rung.c3_scheduled > 0.0 && realized <= rung.c3_scheduled;
        if (rung.conditional_applicable)
            rung.conditional_respected = rung.sup_enstrophy <= rung.guaranteed_bound * (1.0 + 1e-12);
        log.rungs.push_back(rung);

        if (threshold_hit || ires.status == IntegrateStatus::NonFinite) {
            log.status = LadderStatus::Blowup;
            log.t_final = t;
            BlowupReport br;
            br.threshold = blowup_threshold;
            br.enstrophy_tail = tail;
            br.last_finite_time = t;
            for (auto it = tail.rbegin(); it != tail.rend(); ++it)
                if (std::isfinite(it->second)) {
                    br.last_finite_time = it->first;
                    break;
                }
            log.blowup = br;
            return log;
        }
        if (ires.status == IntegrateStatus::StepUnderflow) {
            log.status = LadderStatus::StepUnderflow;
            log.t_final = t;
            return log;
        }
        ++rung_index;
    }
    log.status = t >= T ? LadderStatus::ReachedHorizon : LadderStatus::Stalled;
    log.t_final = t;
    return log;
}

struct TwinRunReport {
    double delta = 0.0;
    double c_hat = 0.0;     // smallest rate with ||w(t)|| <= ||w(0)|| e^{c t} at all samples
    double sup_w = 0.0;     // sup_t ||w(t)||_2
    double w0 = 0.0;        // ||w(0)||_2
    bool bound_holds = true;
    std::vector<std::pair<double, double>> history;  // (t, ||w||_2)
};

/// Runs the system twice, the second from a delta-perturbed initial state,
/// and fits the sup growth rate of ||y1 - y2||_2 (the Gronwall certificate of
/// the uniqueness argument). `l2_scale` converts the coefficient-vector
/// euclidean norm to the L^2 norm (1 for an orthonormal basis).
inline TwinRunReport twin_run_divergence(const FlowSystem& sys, const std::vector<double>& y0,
                                         int perturb_index, double delta, double T,
                                         const StepperConfig& stepper, int nsamples = 32,
                                         double l2_scale = 1.0) {
    std::vector<double> ya = y0, yb = y0;
    if (perturb_index < 0 || perturb_index >= int(yb.size()))
        throw std::invalid_argument("twin_run_divergence: perturbation index out of range");
    yb[perturb_index] += delta;

    std::vector<double> times;
    for (int i = 1; i <= nsamples; ++i) times.push_back(T * double(i) / nsamples);
    std::vector<std::vector<double>> traj_a, traj_b;
    std::vector<double> ts;
    auto sink_a = [&](double t, const std::vector<double>& y, const std::vector<double>&) {
        traj_a.push_back(y);
        ts.push_back(t);
        return true;
    };
    auto sink_b = [&](double, const std::vector<double>& y, const std::vector<double>&) {
        traj_b.push_back(y);
        return true;
    };
    IntegrateResult ra = integrate(sys, ya, 0.0, times, stepper, sink_a);
    IntegrateResult rb = integrate(sys, yb, 0.0, times, stepper, sink_b);
    if (ra.status != IntegrateStatus::Ok || rb.status != IntegrateStatus::Ok)
        throw std::runtime_error("twin_run_divergence: integration failed");

    TwinRunReport rep;
    rep.delta = delta;
    rep.w0 = std::abs(delta) * l2_scale;
    double c_hat = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj_a.size(); ++i) {
        double w2 = 0.0;
        for (std::size_t j = 0; j < traj_a[i].size(); ++j) {
            double d = traj_a[i][j] - traj_b[i][j];
            w2 += d * d;
        }
        double w = std::sqrt(w2) * l2_scale;
        rep.history.emplace_back(ts[i], w);
        rep.sup_w = std::max(rep.sup_w, w);
        if (ts[i] > 0.0 && rep.w0 > 0.0 && w > 0.0)
            c_hat = std::max(c_hat, std::log(w / rep.w0) / ts[i]);
    }
    if (!std::isfinite(c_hat)) c_hat = 0.0;
    rep.c_hat = c_hat;
    if (rep.w0 > 0.0) {
        for (const auto& [t, w] : rep.history)
            if (w > rep.w0 * std::exp(rep.c_hat * t) * (1.0 + 1e-9)) rep.bound_holds = false;
    } else {
        for (const auto& [t, w] : rep.history)
            if (w != 0.0) rep.bound_holds = false;
    }
    return rep;
}

/// Gronwall certificate for the energy inequality: fits c4 on the fitting
/// half of the samples (with a safety factor) such that
/// d/dt ||v||^2 + nu ||grad v||^2 <= c4 ||v||^2 + c4, then re-verifies on the
/// held-out half.
struct GronwallCertificate {
    double c4 = 0.0;
    bool holds_on_held_out = true;
    double worst_margin = 0.0;  // max over held-out of lhs - (c4 E + c4)
};

inline GronwallCertificate fit_energy_certificate(const std::vector<TrajectorySample>& samples,
                                                  double nu, double safety = 1.2) {
    GronwallCertificate cert;
    double need = 0.0;
    for (std::size_t i = 0; i < samples.size(); i += 2) {
        const auto& s = samples[i];
        double lhs = s.energy_rate + nu * s.enstrophy;
        need = std::max(need, lhs / (s.energy + 1.0));
    }
    cert.c4 = safety * std::max(need, 0.0);
    for (std::size_t i = 1; i < samples.size(); i += 2) {
        const auto& s = samples[i];
        double lhs = s.energy_rate + nu * s.enstrophy;
        double rhs = cert.c4 * s.energy + cert.c4;
        cert.worst_margin = std::max(cert.worst_margin, lhs - rhs);
        if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) cert.holds_on_held_out = false;
    }
    return cert;
}

}  // namespace nsgal
