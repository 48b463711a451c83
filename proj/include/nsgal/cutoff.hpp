#pragma once

#include <vector>

#include "nsgal/torus.hpp"

namespace nsgal {

/// Radial cutoff eta_r(x) = eta(|x|/r) where eta is the mollification, with
/// width 1/24, of the radial step that is 1 on [0, 7/12] and 0 from 2/3 on
/// (linear in between). The profile is exactly 1 for |x| <= 13r/24 and
/// exactly 0 for |x| >= 17r/24, so the plateau covers r/2 and the support
/// stays inside 3r/4. Values in the transition come from a precomputed table
/// with cubic-spline interpolation.
class CutoffSpec {
  public:
    static constexpr double kEps = 1.0 / 24.0;
    static constexpr double kPlateau = 13.0 / 24.0;
    static constexpr double kSupport = 17.0 / 24.0;

    explicit CutoffSpec(double r = 1.0, int table_size = 1024) : r_(r) {
        if (!(r > 0.0)) throw std::invalid_argument("CutoffSpec: radius must be positive");
        build_table(table_size);
    }

    double radius() const { return r_; }

    double eval_radial(double s) const {
        if (s <= kPlateau) return 1.0;
        if (s >= kSupport) return 0.0;
        return spline_eval(s);
    }

    double operator()(const Vec3& x) const {
        return eval_radial(std::sqrt(dot(x, x)) / r_);
    }

    /// The exact mollifier convolution at radius s (independent quadrature;
    /// the table is built from this).
    static double profile_quadrature(double s, int n_rho = 96, int n_phi = 192) {
        if (s <= kPlateau) return 1.0;
        if (s >= kSupport) return 0.0;
        // normalized bump j(u) ~ exp(-1/(1-u^2)) on the unit ball
        auto bump = [](double u) { return u < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; };
        static const double norm_1d = [&] {
            // int_0^1 u^2 exp(-1/(1-u^2)) du by composite Simpson
            int n = 4096;
            double h = 1.0 / n, acc = 0.0;
            for (int i = 0; i <= n; ++i) {
                double u = i * h;
                double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                double b = u < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
                acc += w * u * u * b;
            }
            return acc * h / 3.0;
        }();
        auto step = [](double t) {
            if (t <= 7.0 / 12.0) return 1.0;
            if (t >= 2.0 / 3.0) return 0.0;
            return (2.0 / 3.0 - t) / (1.0 / 12.0);
        };
        // eta(s) = int j_eps(z) g(|s e1 - z|) dz in spherical coordinates
        double acc = 0.0;
        double hr = 1.0 / n_rho, hp = M_PI / n_phi;
        for (int i = 0; i <= n_rho; ++i) {
            double u = i * hr;  // rho = eps u
            double wr = (i == 0 || i == n_rho) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            double inner = 0.0;
            for (int jj = 0; jj <= n_phi; ++jj) {
                double phi = jj * hp;
                double wp = (jj == 0 || jj == n_phi) ? 1.0 : (jj % 2 ? 4.0 : 2.0);
                double rho = kEps * u;
                double dist = std::sqrt(std::max(0.0, s * s + rho * rho -
                                                          2.0 * s * rho * std::cos(phi)));
                inner += wp * step(dist) * std::sin(phi);
            }
            inner *= hp / 3.0;
            acc += wr * u * u * bump(u) * inner;
        }
        acc *= hr / 3.0;
        return acc / (2.0 * norm_1d);
    }

  private:
    double r_;
    std::vector<double> xs_, ys_, m_;  // spline nodes, values, second derivatives

    void build_table(int n) {
        xs_.resize(n + 1);
        ys_.resize(n + 1);
        double a = kPlateau, b = kSupport;
        for (int i = 0; i <= n; ++i) {
            xs_[i] = a + (b - a) * double(i) / n;
            ys_[i] = profile_quadrature(xs_[i]);
        }
        ys_[0] = 1.0;
        ys_[n] = 0.0;
        // natural cubic spline second derivatives: for uniform spacing h,
        // h M_{i-1} + 4h M_i + h M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h
        m_.assign(n + 1, 0.0);
        double h = (b - a) / n;
        std::vector<double> cp(n + 1, 0.0), dp(n + 1, 0.0);
        for (int i = 1; i < n; ++i) {
            double rhs = 6.0 * (ys_[i + 1] - 2.0 * ys_[i] + ys_[i - 1]) / h;
            double mdiag = 4.0 * h - (i > 1 ? h * cp[i - 1] : 0.0);
            cp[i] = h / mdiag;
            dp[i] = (rhs - (i > 1 ? h * dp[i - 1] : 0.0)) / mdiag;
        }
        for (int i = n - 1; i >= 1; --i) m_[i] = dp[i] - cp[i] * m_[i + 1];
    }

    double spline_eval(double s) const {
        int n = int(xs_.size()) - 1;
        double a = xs_.front(), b = xs_.back();
        double h = (b - a) / n;
        int i = std::min(n - 1, std::max(0, int((s - a) / h)));
        double t = (s - xs_[i]) / h;
        double y = (1.0 - t) * ys_[i] + t * ys_[i + 1] +
                   h * h / 6.0 *
                       ((std::pow(1.0 - t, 3) - (1.0 - t)) * m_[i] + (t * t * t - t) * m_[i + 1]);
        return std::min(1.0, std::max(0.0, y));
    }
};

}  // namespace nsgal
