#pragma once

#include <map>
#include <vector>

#include "nsgal/torus.hpp"

namespace nsgal {

/// Finite set of complex Fourier coefficients of a real 3-vector field on the
/// torus. Real-valuedness is encoded by Hermitian symmetry
/// u_hat(-k) = conj(u_hat(k)); every mutating helper below preserves it.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(TorusSpec spec) : spec_(spec) { spec_.validate(); }

    const TorusSpec& spec() const { return spec_; }
    const std::map<WaveVector, CVec3>& modes() const { return modes_; }
    std::size_t size() const { return modes_.size(); }
    bool empty() const { return modes_.empty(); }

    CVec3 coeff(const WaveVector& k) const {
        auto it = modes_.find(k);
        return it == modes_.end() ? CVec3{} : it->second;
    }

    void set(const WaveVector& k, const CVec3& c) { modes_[k] = c; }

    /// Sets both members of a conjugate pair.
    void set_pair(const WaveVector& k, const CVec3& c) {
        modes_[k] = c;
        modes_[-k] = conj(c);
    }

    void add(const WaveVector& k, const CVec3& c) {
        auto& v = modes_[k];
        v = v + c;
    }

    void erase(const WaveVector& k) { modes_.erase(k); }

    void drop_mean() { modes_.erase(WaveVector{0, 0, 0}); }

    /// Removes coefficients with negligible magnitude relative to the largest.
    void prune(double rel_tol = 1e-300) {
        double m = 0.0;
        for (const auto& [k, c] : modes_) m = std::max(m, abs2(c));
        m = std::sqrt(m);
        double cut = rel_tol * m;
        for (auto it = modes_.begin(); it != modes_.end();) {
            if (std::sqrt(abs2(it->second)) <= cut)
                it = modes_.erase(it);
            else
                ++it;
        }
    }

    int band_linf() const {
        int b = 0;
        for (const auto& [k, c] : modes_) b = std::max(b, k.linf());
        return b;
    }
    long long band_ball2() const {
        long long b = 0;
        for (const auto& [k, c] : modes_) b = std::max(b, k.norm2());
        return b;
    }

    bool has_mean_mode(double tol = 0.0) const {
        auto it = modes_.find(WaveVector{0, 0, 0});
        return it != modes_.end() && std::sqrt(abs2(it->second)) > tol;
    }

    double hermitian_defect() const {
        double d = 0.0;
        for (const auto& [k, c] : modes_) {
            CVec3 other = coeff(-k);
            d = std::max(d, std::sqrt(abs2(c - conj(other))));
        }
        return d;
    }

    bool is_hermitian(double rel_tol = 1e-12) const {
        double m = 0.0;
        for (const auto& [k, c] : modes_) m = std::max(m, std::sqrt(abs2(c)));
        return hermitian_defect() <= rel_tol * std::max(m, 1e-300);
    }

    /// Relative divergence defect max_k |kappa.u_hat(k)| / max_k |kappa||u_hat(k)|.
    double solenoidal_defect() const {
        double num = 0.0, den = 0.0;
        for (const auto& [k, c] : modes_) {
            if (k.is_zero()) continue;
            Vec3 kap = k.kappa(spec_.L);
            num = std::max(num, std::abs(dot(c, kap)));
            den = std::max(den, norm(kap) * std::sqrt(abs2(c)));
        }
        return den == 0.0 ? 0.0 : num / den;
    }
    bool is_solenoidal(double rel_tol = 1e-12) const { return solenoidal_defect() <= rel_tol; }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_spec(o);
        for (const auto& [k, c] : o.modes_) add(k, c);
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_spec(o);
        for (const auto& [k, c] : o.modes_) add(k, std::complex<double>(-1.0) * c);
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& [k, c] : modes_) c = std::complex<double>(s) * c;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    /// Point evaluation by Fourier summation (exact for the represented field).
    Vec3 eval(const Vec3& x) const {
        CVec3 acc{};
        for (const auto& [k, c] : modes_) {
            Vec3 kap = k.kappa(spec_.L);
            std::complex<double> ph = std::exp(std::complex<double>(0.0, dot(kap, x)));
            acc = acc + ph * c;
        }
        return {acc[0].real(), acc[1].real(), acc[2].real()};
    }

    void require_same_spec(const SpectralField& o) const {
        if (spec_ != o.spec_) throw std::invalid_argument("SpectralField: mismatched torus specs");
    }

  private:
    TorusSpec spec_;
    std::map<WaveVector, CVec3> modes_;
};

/// G^3 array of real 3-vectors sampled at x_j = j*L/G (component-major).
struct RealGridField {
    TorusSpec spec;
    std::vector<double> data;  // size 3*G^3, data[c*G^3 + idx]

    explicit RealGridField(TorusSpec s) : spec(s), data(3 * std::size_t(s.G) * s.G * s.G, 0.0) {}

    std::size_t cells() const { return std::size_t(spec.G) * spec.G * spec.G; }
    double& at(int c, std::size_t idx) { return data[c * cells() + idx]; }
    double at(int c, std::size_t idx) const { return data[c * cells() + idx]; }
};

}  // namespace nsgal
