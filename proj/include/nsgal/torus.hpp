#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsgal {

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<std::complex<double>, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline std::complex<double> dot(const CVec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline std::complex<double> dot(const CVec3& a, const CVec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline CVec3 operator+(const CVec3& a, const CVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline CVec3 operator-(const CVec3& a, const CVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline CVec3 operator*(std::complex<double> s, const CVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline CVec3 conj(const CVec3& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }
inline double abs2(const CVec3& a) { return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]); }

/// Periodic box [0,L)^3 with a companion grid resolution G used by the
/// real-space quadrature routines. G must be an even power of two.
struct TorusSpec {
    double L = 2.0 * M_PI;
    int G = 32;

    void validate() const {
        if (!(L > 0.0)) throw std::invalid_argument("TorusSpec: period L must be positive");
        if (G < 4) throw std::invalid_argument("TorusSpec: grid resolution G must be >= 4");
        if ((G & (G - 1)) != 0) throw std::invalid_argument("TorusSpec: G must be a power of two");
    }
    bool operator==(const TorusSpec& o) const { return L == o.L && G == o.G; }
    bool operator!=(const TorusSpec& o) const { return !(*this == o); }
};

/// Integer lattice wavevector k; the physical wavenumber is kappa = 2*pi*k/L.
struct WaveVector {
    int k1 = 0, k2 = 0, k3 = 0;

    friend bool operator==(const WaveVector& a, const WaveVector& b) {
        return a.k1 == b.k1 && a.k2 == b.k2 && a.k3 == b.k3;
    }
    friend bool operator!=(const WaveVector& a, const WaveVector& b) { return !(a == b); }
    friend bool operator<(const WaveVector& a, const WaveVector& b) {
        if (a.k1 != b.k1) return a.k1 < b.k1;
        if (a.k2 != b.k2) return a.k2 < b.k2;
        return a.k3 < b.k3;
    }
    friend WaveVector operator+(const WaveVector& a, const WaveVector& b) {
        return {a.k1 + b.k1, a.k2 + b.k2, a.k3 + b.k3};
    }
    friend WaveVector operator-(const WaveVector& a) { return {-a.k1, -a.k2, -a.k3}; }

    long long norm2() const {
        return (long long)k1 * k1 + (long long)k2 * k2 + (long long)k3 * k3;
    }
    int linf() const { return std::max({std::abs(k1), std::abs(k2), std::abs(k3)}); }
    bool is_zero() const { return k1 == 0 && k2 == 0 && k3 == 0; }

    /// Representative of the pair {k,-k}: first nonzero component positive.
    bool is_positive() const {
        if (k1 != 0) return k1 > 0;
        if (k2 != 0) return k2 > 0;
        return k3 > 0;
    }
    WaveVector representative() const { return is_positive() || is_zero() ? *this : -*this; }

    Vec3 as_vec() const { return {double(k1), double(k2), double(k3)}; }
    Vec3 kappa(double L) const {
        double s = 2.0 * M_PI / L;
        return {s * k1, s * k2, s * k3};
    }
    double kappa2(double L) const {
        double s = 2.0 * M_PI / L;
        return s * s * double(norm2());
    }
    std::string key() const {
        return std::to_string(k1) + "," + std::to_string(k2) + "," + std::to_string(k3);
    }
};

/// Deterministic polarization frame orthogonal to k. eps1 = normalize(k x a)
/// with a = e3, falling back to a = e2 when k is parallel to e3;
/// eps2 = normalize(k x eps1). Orthogonality k.eps holds exactly before
/// normalization because the cross products are integer-valued.
inline std::array<Vec3, 2> polarizations(const WaveVector& k) {
    if (k.is_zero()) throw std::invalid_argument("polarizations: zero wavevector excluded");
    Vec3 kv = k.as_vec();
    Vec3 axis = (k.k1 == 0 && k.k2 == 0) ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0};
    Vec3 e1 = cross(kv, axis);
    e1 = (1.0 / norm(e1)) * e1;
    Vec3 e2 = cross(kv, e1);
    e2 = (1.0 / norm(e2)) * e2;
    return {e1, e2};
}

inline std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}
inline std::uint64_t fnv1a_init() { return 14695981039346656037ULL; }

}  // namespace nsgal
