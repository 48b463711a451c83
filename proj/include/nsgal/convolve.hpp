#pragma once

#include <limits>

#include "nsgal/ops.hpp"

namespace nsgal {

/// Exact spectral convolution of the advection term (u.grad)v:
///   out_hat(k) = sum_{p+q=k} i (u_hat(p).kappa_q) v_hat(q).
/// Cost O(|u| * |v|). `ball2_cap` bounds the output mode ball |k|^2; a
/// negative cap keeps every product mode.
inline SpectralField advect_spectral(const SpectralField& u, const SpectralField& v,
                                     long long ball2_cap = -1) {
    u.require_same_spec(v);
    SpectralField out(u.spec());
    double scale = 2.0 * M_PI / u.spec().L;
    for (const auto& [p, cu] : u.modes()) {
        for (const auto& [q, cv] : v.modes()) {
            WaveVector k = p + q;
            if (ball2_cap >= 0 && k.norm2() > ball2_cap) continue;
            Vec3 kap_q{scale * q.k1, scale * q.k2, scale * q.k3};
            std::complex<double> f = std::complex<double>(0.0, 1.0) * dot(cu, kap_q);
            out.add(k, f * cv);
        }
    }
    return out;
}

/// Largest |k|^2 such that the whole ball fits below the |k|_inf bound b:
/// used to express linf band caps as ball caps.
inline long long ball2_of_linf(int b) { return (long long)b * b; }

}  // namespace nsgal
