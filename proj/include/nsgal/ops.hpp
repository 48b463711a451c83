#pragma once

#include <utility>

#include "nsgal/field.hpp"

namespace nsgal {

/// Leray projection: per mode u_hat - kappa (kappa.u_hat)/|kappa|^2.
/// The zero mode passes through unchanged.
inline SpectralField leray_project(const SpectralField& v) {
    SpectralField out(v.spec());
    for (const auto& [k, c] : v.modes()) {
        if (k.is_zero()) {
            out.set(k, c);
            continue;
        }
        Vec3 kap = k.kappa(v.spec().L);
        std::complex<double> s = dot(c, kap) / dot(kap, kap);
        CVec3 p{c[0] - s * kap[0], c[1] - s * kap[1], c[2] - s * kap[2]};
        out.set(k, p);
    }
    return out;
}

/// Helmholtz-Weyl split v = Pv + grad g; the gradient part is returned as a
/// field so that the two parts recompose exactly per mode.
inline std::pair<SpectralField, SpectralField> gradient_decompose(const SpectralField& v) {
    SpectralField sol = leray_project(v);
    SpectralField grad(v.spec());
    for (const auto& [k, c] : v.modes()) {
        if (k.is_zero()) continue;
        CVec3 g = c - sol.coeff(k);
        grad.set(k, g);
    }
    return {std::move(sol), std::move(grad)};
}

/// Stokes solve -Delta v + grad p = f, div v = 0: per mode v_hat = (Pf)_hat/|kappa|^2.
inline SpectralField stokes_solve(const SpectralField& f) {
    if (f.has_mean_mode(0.0))
        throw std::invalid_argument("stokes_solve: field must not carry a mean mode");
    SpectralField pf = leray_project(f);
    SpectralField v(f.spec());
    for (const auto& [k, c] : pf.modes()) {
        double k2 = k.kappa2(f.spec().L);
        v.set(k, std::complex<double>(1.0 / k2) * c);
    }
    return v;
}

/// L^2 pairing L^3 sum_k a_hat(k).conj(b_hat(k)); real for Hermitian fields.
inline double inner_product(const SpectralField& a, const SpectralField& b) {
    a.require_same_spec(b);
    double vol = a.spec().L * a.spec().L * a.spec().L;
    std::complex<double> acc = 0.0;
    for (const auto& [k, c] : a.modes()) {
        CVec3 bc = b.coeff(k);
        acc += dot(c, conj(bc));
    }
    return vol * acc.real();
}

inline double l2_norm2(const SpectralField& v) {
    double vol = v.spec().L * v.spec().L * v.spec().L;
    double acc = 0.0;
    for (const auto& [k, c] : v.modes()) acc += abs2(c);
    return vol * acc;
}
inline double l2_norm(const SpectralField& v) { return std::sqrt(l2_norm2(v)); }

/// ||grad v||_2^2 = L^3 sum_k |kappa|^2 |v_hat(k)|^2.
inline double enstrophy(const SpectralField& v) {
    double vol = v.spec().L * v.spec().L * v.spec().L;
    double acc = 0.0;
    for (const auto& [k, c] : v.modes()) acc += k.kappa2(v.spec().L) * abs2(c);
    return vol * acc;
}

/// ||Delta v||_2^2, the palinstrophy-type weight used by the c3 estimate.
inline double laplacian_norm2(const SpectralField& v) {
    double vol = v.spec().L * v.spec().L * v.spec().L;
    double acc = 0.0;
    for (const auto& [k, c] : v.modes()) {
        double k2 = k.kappa2(v.spec().L);
        acc += k2 * k2 * abs2(c);
    }
    return vol * acc;
}

inline SpectralField laplacian(const SpectralField& v) {
    SpectralField out(v.spec());
    for (const auto& [k, c] : v.modes())
        out.set(k, std::complex<double>(-k.kappa2(v.spec().L)) * c);
    return out;
}

/// Restricts to modes with |k|^2 <= kball2 (and drops the mean when mean_free).
inline SpectralField truncate_ball(const SpectralField& v, long long kball2, bool mean_free = true) {
    SpectralField out(v.spec());
    for (const auto& [k, c] : v.modes()) {
        if (k.is_zero() && mean_free) continue;
        if (k.norm2() <= kball2) out.set(k, c);
    }
    return out;
}

}  // namespace nsgal
