#pragma once

#include "nsgal/fft.hpp"
#include "nsgal/ops.hpp"

namespace nsgal {

/// Brute-force evaluation of (u.grad)v on the fine grid: transform both
/// fields to real space (derivatives taken spectrally), multiply pointwise,
/// transform back. Exact up to roundoff on the alias-free target band
/// |k|_inf < G/3 when both inputs are band-limited below G/3.
inline SpectralField nonlinear_grid_oracle(const SpectralField& u, const SpectralField& v) {
    u.require_same_spec(v);
    const TorusSpec& spec = u.spec();
    int limit = spec.G / 3;
    if (u.band_linf() >= limit || v.band_linf() >= limit)
        throw std::runtime_error(
            "nonlinear_grid_oracle: input band exceeds G/3, grid resolution insufficient");

    GridTransform tf(spec);
    std::size_t n = tf.cells();
    std::vector<double> uj(3 * n), dvij(n), acc(3 * n, 0.0);
    for (int j = 0; j < 3; ++j) tf.component_to_grid(u, j, -1, uj.data() + j * n);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            tf.component_to_grid(v, i, j, dvij.data());
            const double* us = uj.data() + j * n;
            double* a = acc.data() + i * n;
            for (std::size_t idx = 0; idx < n; ++idx) a[idx] += us[idx] * dvij[idx];
        }
    RealGridField w(spec);
    w.data = std::move(acc);
    SpectralField out = tf.from_grid(w, limit - 1);
    long long cap = u.band_ball2();
    long long cv = v.band_ball2();
    // products live inside the Minkowski sum of the input balls
    double r = std::sqrt(double(cap)) + std::sqrt(double(cv));
    return truncate_ball(out, (long long)(r * r + 1e-9), /*mean_free=*/false);
}

}  // namespace nsgal
