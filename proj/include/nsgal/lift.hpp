#pragma once

#include <functional>
#include <vector>

#include "nsgal/convolve.hpp"
#include "nsgal/forcing.hpp"

namespace nsgal {

/// Pluggable convolution backend for the advection products appearing in the
/// lift recurrence; defaults to the exact spectral convolution, the grid
/// oracle may be substituted (the two must agree).
using AdvectFn =
    std::function<SpectralField(const SpectralField&, const SpectralField&, long long)>;

/// Stack of initial time derivatives derivs[j] = d_t^j u0 generated by the
/// recurrence d_t^j u0 = P(nu Delta d_t^{j-1} u0
///   - sum_r binom(j-1,r) d_t^r u0 . grad d_t^{j-1-r} u0 + d_t^{j-1} f(.,0)),
/// together with the pre-projection fields u0^{[#j]}.
struct LiftData {
    int J = 0;
    double nu = 0.0;
    std::vector<SpectralField> derivs;          // 0..J
    std::vector<SpectralField> pre_projection;  // 1..J at index j
    long long ball2_cap = -1;

    const SpectralField& u0() const { return derivs.at(0); }
};

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// `galerkin_ball2`, when set, restricts every derivative to the given mode
/// ball after projection: the Galerkin-projected recurrence used by the
/// large-n engine. Leave unset for the full-space lift.
inline LiftData build_lift(const SpectralField& u0, const ForcingSpec& f, int J, double nu,
                           long long ball2_cap = -1, const AdvectFn& advect = nullptr,
                           long long galerkin_ball2 = -1) {
    if (J < 1 || J > 8) throw std::invalid_argument("build_lift: order J must be in [1,8]");
    if (!u0.is_solenoidal(1e-10))
        throw std::invalid_argument("build_lift: initial data must be solenoidal");
    if (u0.has_mean_mode(1e-300))
        throw std::invalid_argument("build_lift: initial data must be mean-free");
    AdvectFn conv = advect ? advect : [](const SpectralField& a, const SpectralField& b,
                                         long long cap) { return advect_spectral(a, b, cap); };

    LiftData lift;
    lift.J = J;
    lift.nu = nu;
    lift.ball2_cap = ball2_cap;
    lift.derivs.resize(J + 1, SpectralField(u0.spec()));
    lift.pre_projection.resize(J + 1, SpectralField(u0.spec()));
    lift.derivs[0] = u0;
    for (int j = 1; j <= J; ++j) {
        SpectralField acc = nu * laplacian(lift.derivs[j - 1]);
        for (int r = 0; r <= j - 1; ++r) {
            if (ball2_cap >= 0) {
                double mink = std::sqrt(double(lift.derivs[r].band_ball2())) +
                              std::sqrt(double(lift.derivs[j - 1 - r].band_ball2()));
                if (mink * mink > double(ball2_cap) * (1.0 + 1e-12))
                    throw std::runtime_error(
                        "build_lift: convolution band exceeds the configured cap");
            }
            SpectralField prod = conv(lift.derivs[r], lift.derivs[j - 1 - r], ball2_cap);
            acc -= binomial(j - 1, r) * prod;
        }
        acc += f.deriv_at_zero(j - 1);
        acc.drop_mean();
        lift.pre_projection[j] = acc;
        lift.derivs[j] = leray_project(acc);
        if (galerkin_ball2 >= 0) lift.derivs[j] = truncate_ball(lift.derivs[j], galerkin_ball2);
    }
    return lift;
}

/// Snapshot of the Taylor lift at time t.
struct LiftEval {
    double t = 0.0;
    SpectralField beta;
    SpectralField dbeta;
    SpectralField laplace_beta;
};

/// beta(t) = sum_{j<=J} d_t^j u0 t^j / j!   (a degree-J polynomial in t).
inline SpectralField beta_eval(const LiftData& lift, double t) {
    SpectralField beta(lift.u0().spec());
    double w = 1.0;
    for (int j = 0; j <= lift.J; ++j) {
        if (j > 0) w *= t / j;
        beta += w * lift.derivs[j];
    }
    return beta;
}

inline LiftEval beta_eval_full(const LiftData& lift, double t) {
    LiftEval ev;
    ev.t = t;
    ev.beta = beta_eval(lift, t);
    SpectralField db(lift.u0().spec());
    double w = 1.0;
    for (int j = 1; j <= lift.J; ++j) {
        if (j > 1) w *= t / (j - 1);
        db += w * lift.derivs[j];
    }
    ev.dbeta = db;
    ev.laplace_beta = laplacian(ev.beta);
    return ev;
}

/// Coefficient fields Theta_p of theta(t) = sum_p Theta_p t^p where
/// theta = -d_t beta + nu Delta beta - beta.grad beta + f. theta is NOT
/// Leray-projected; its gradient part carries the orthogonality content.
inline std::vector<SpectralField> theta_stack(const LiftData& lift, const ForcingSpec& f,
                                              const AdvectFn& advect = nullptr) {
    AdvectFn conv = advect ? advect : [](const SpectralField& a, const SpectralField& b,
                                         long long cap) { return advect_spectral(a, b, cap); };
    const int J = lift.J;
    int deg = std::max(2 * J, f.empty() ? 0 : f.degree());
    std::vector<SpectralField> theta(deg + 1, SpectralField(lift.u0().spec()));

    std::vector<double> inv_fact(J + 1, 1.0);
    for (int j = 1; j <= J; ++j) inv_fact[j] = inv_fact[j - 1] / j;

    for (int p = 0; p + 1 <= J; ++p) theta[p] -= inv_fact[p] * lift.derivs[p + 1];
    for (int p = 0; p <= J; ++p) theta[p] += (lift.nu * inv_fact[p]) * laplacian(lift.derivs[p]);
    for (int r = 0; r <= J; ++r)
        for (int s = 0; s <= J; ++s) {
            SpectralField prod = conv(lift.derivs[r], lift.derivs[s], lift.ball2_cap);
            theta[r + s] -= (inv_fact[r] * inv_fact[s]) * prod;
        }
    if (!f.empty())
        for (int p = 0; p <= f.degree(); ++p) theta[p] += f.poly_coefficient(p);
    for (auto& th : theta) th.drop_mean();
    return theta;
}

inline SpectralField theta_eval_from_stack(const std::vector<SpectralField>& stack, double t) {
    if (stack.empty()) throw std::invalid_argument("theta_eval: empty stack");
    SpectralField out = stack.back();
    for (std::size_t p = stack.size() - 1; p-- > 0;) {
        out *= t;
        out += stack[p];
    }
    return out;
}

inline SpectralField theta_eval(const LiftData& lift, const ForcingSpec& f, double t,
                                const AdvectFn& advect = nullptr) {
    return theta_eval_from_stack(theta_stack(lift, f, advect), t);
}

/// d_t^j theta(.,0) = j! Theta_j.
inline SpectralField theta_time_deriv_at_zero(const std::vector<SpectralField>& stack, int j) {
    if (j >= int(stack.size())) return SpectralField(stack.front().spec());
    double fact = 1.0;
    for (int r = 2; r <= j; ++r) fact *= r;
    return fact * stack[j];
}

struct ThetaOrthogonalityReport {
    std::vector<double> ratios;  // ||P theta^(j)(0)|| / max(||theta^(j)(0)||, floor)
    double floor = 0.0;
    double max_ratio() const {
        double m = 0.0;
        for (double r : ratios) m = std::max(m, r);
        return m;
    }
};

/// Checks d_t^j theta(.,0) is orthogonal to the solenoidal space for
/// j = 0..jmax (jmax <= J-1). A ratio above tolerance is reported, never thrown.
inline ThetaOrthogonalityReport check_theta_orthogonal(const LiftData& lift, const ForcingSpec& f,
                                                       int jmax, double floor = 1e-30,
                                                       const AdvectFn& advect = nullptr) {
    if (jmax > lift.J - 1)
        throw std::invalid_argument("check_theta_orthogonal: jmax must be <= J-1");
    auto stack = theta_stack(lift, f, advect);
    ThetaOrthogonalityReport rep;
    rep.floor = floor;
    for (int j = 0; j <= jmax; ++j) {
        SpectralField th = theta_time_deriv_at_zero(stack, j);
        double den = std::max(l2_norm(th), floor);
        rep.ratios.push_back(l2_norm(leray_project(th)) / den);
    }
    return rep;
}

}  // namespace nsgal
