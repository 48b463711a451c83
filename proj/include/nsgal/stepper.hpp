#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nsgal/torus.hpp"

namespace nsgal {

struct OdeSystem {
    virtual ~OdeSystem() = default;
    virtual int dim() const = 0;
    virtual void rhs(double t, const std::vector<double>& y, std::vector<double>& dydt) const = 0;
};

/// A flow system additionally exposes the quadratic functionals the
/// continuation controller monitors.
struct FlowSystem : OdeSystem {
    virtual double energy(const std::vector<double>& y) const = 0;       // ||.||_2^2
    virtual double enstrophy_y(const std::vector<double>& y) const = 0;  // ||grad .||_2^2
    virtual double dissipation(const std::vector<double>& y) const = 0;  // ||Delta .||_2^2
    /// d/dt ||grad .||_2^2 evaluated analytically from (y, ydot).
    virtual double enstrophy_rate(const std::vector<double>& y,
                                  const std::vector<double>& ydot) const = 0;
    /// d/dt ||.||_2^2 evaluated analytically from (y, ydot).
    virtual double energy_rate(const std::vector<double>& y,
                               const std::vector<double>& ydot) const = 0;
};

enum class StepperMode { FixedRK4, AdaptiveRK45 };

struct StepperConfig {
    StepperMode mode = StepperMode::AdaptiveRK45;
    double h = 1e-2;          // fixed-step size
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 1.0;
    double min_step = 1e-12;

    void validate() const {
        if (!(rtol > 0.0) || !(atol > 0.0))
            throw std::invalid_argument("StepperConfig: tolerances must be positive");
        if (!(min_step < max_step))
            throw std::invalid_argument("StepperConfig: min step must be below max step");
        if (mode == StepperMode::FixedRK4 && !(h > 0.0))
            throw std::invalid_argument("StepperConfig: fixed step must be positive");
    }
};

enum class IntegrateStatus { Ok, StepUnderflow, NonFinite };

inline std::string to_string(IntegrateStatus s) {
    switch (s) {
        case IntegrateStatus::Ok: return "ok";
        case IntegrateStatus::StepUnderflow: return "step-underflow";
        case IntegrateStatus::NonFinite: return "non-finite";
    }
    return "?";
}

struct IntegrateResult {
    IntegrateStatus status = IntegrateStatus::Ok;
    double t = 0.0;
    long steps = 0;
    long rejected = 0;
};

/// Called at every accepted sample time with the state and its analytic
/// derivative. Returning false stops the integration early (status stays Ok;
/// the caller inspects its own stop reason).
using SampleSink = std::function<bool(double t, const std::vector<double>& y,
                                      const std::vector<double>& ydot)>;

namespace detail {

inline bool finite(const std::vector<double>& y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

// Dormand-Prince 5(4) coefficients.
struct DP45 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

}  // namespace detail

/// Advances y from t0, sampling (in order) at every time in `samples`; the
/// final sample must equal t_end. Fixed mode lands exactly on sample times and
/// is bitwise deterministic across runs; adaptive mode keeps the embedded
/// local error estimate below tolerance for every accepted step.
inline IntegrateResult integrate(const OdeSystem& sys, std::vector<double>& y, double t0,
                                 const std::vector<double>& samples, const StepperConfig& cfg,
                                 const SampleSink& sink = nullptr) {
    cfg.validate();
    const int n = sys.dim();
    if (int(y.size()) != n) throw std::invalid_argument("integrate: state dimension mismatch");
    IntegrateResult res;
    res.t = t0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    auto emit = [&](double t) {
        if (!sink) return true;
        sys.rhs(t, y, k1);
        return sink(t, y, k1);
    };
    if (!emit(t0)) return res;

    double h_adapt = std::min(cfg.max_step, cfg.h > 0 ? cfg.h : cfg.max_step);
    using D = detail::DP45;

    for (double target : samples) {
        if (target < res.t - 1e-15)
            throw std::invalid_argument("integrate: sample times must be nondecreasing");
        while (res.t < target) {
            double span = target - res.t;
            if (cfg.mode == StepperMode::FixedRK4) {
                double h = std::min(cfg.h, span);
                double t = res.t;
                sys.rhs(t, y, k1);
                for (int i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
                sys.rhs(t + 0.5 * h, ytmp, k2);
                for (int i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
                sys.rhs(t + 0.5 * h, ytmp, k3);
                for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
                sys.rhs(t + h, ytmp, k4);
                for (int i = 0; i < n; ++i)
                    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                res.t = t + h;
                ++res.steps;
                if (!detail::finite(y)) {
                    res.status = IntegrateStatus::NonFinite;
                    return res;
                }
            } else {
                double h = std::min({h_adapt, span, cfg.max_step});
                bool accepted = false;
                while (!accepted) {
                    double t = res.t;
                    sys.rhs(t, y, k1);
                    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * D::a21 * k1[i];
                    sys.rhs(t + D::c2 * h, ytmp, k2);
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
                    sys.rhs(t + D::c3 * h, ytmp, k3);
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
                    sys.rhs(t + D::c4 * h, ytmp, k4);
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (D::a51 * k1[i] + D::a52 * k2[i] + D::a53 * k3[i] +
                                              D::a54 * k4[i]);
                    sys.rhs(t + D::c5 * h, ytmp, k5);
                    for (int i = 0; i < n; ++i)
                        ytmp[i] = y[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] + D::a63 * k3[i] +
                                              D::a64 * k4[i] + D::a65 * k5[i]);
                    sys.rhs(t + h, ytmp, k6);
                    for (int i = 0; i < n; ++i)
                        ynew[i] = y[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] +
                                              D::b5 * k5[i] + D::b6 * k6[i]);
                    sys.rhs(t + h, ynew, k7);

                    double err = 0.0;
                    bool ok_finite = detail::finite(ynew);
                    if (ok_finite) {
                        for (int i = 0; i < n; ++i) {
                            double e = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] +
                                            D::e5 * k5[i] + D::e6 * k6[i] + D::e7 * k7[i]);
                            double sc = cfg.atol +
                                        cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                            err += (e / sc) * (e / sc);
                        }
                        err = std::sqrt(err / n);
                    }
                    if (ok_finite && err <= 1.0) {
                        accepted = true;
                        y.swap(ynew);
                        res.t = t + h;
                        ++res.steps;
                        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                        h_adapt = std::min(cfg.max_step, h * std::min(5.0, std::max(0.2, fac)));
                    } else {
                        ++res.rejected;
                        double fac = ok_finite ? std::min(1.0, std::max(0.1, 0.9 * std::pow(err, -0.2)))
                                               : 0.1;
                        h = h * fac;
                        if (h < cfg.min_step) {
                            res.status = ok_finite ? IntegrateStatus::StepUnderflow
                                                   : IntegrateStatus::NonFinite;
                            return res;
                        }
                    }
                }
            }
        }
        res.t = target;
        if (!emit(target)) return res;
    }
    return res;
}

}  // namespace nsgal
