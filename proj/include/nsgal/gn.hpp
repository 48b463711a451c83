#pragma once

#include <random>

#include "nsgal/fft.hpp"
#include "nsgal/ops.hpp"

namespace nsgal {

/// L^q norm of the pointwise Euclidean magnitude, by grid quadrature.
inline double lq_norm(const SpectralField& f, double q, GridTransform& tf) {
    RealGridField g = tf.to_grid(f);
    std::size_t n = tf.cells();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m2 = 0.0;
        for (int c = 0; c < 3; ++c) m2 += g.at(c, i) * g.at(c, i);
        acc += std::pow(m2, 0.5 * q);
    }
    double cell = std::pow(f.spec().L / f.spec().G, 3);
    return std::pow(acc * cell, 1.0 / q);
}

struct GnProbeResult {
    double C1 = 0.0;
    double C2 = 0.0;
    double worst_residual = 0.0;  // max over samples of ||u||_q - (C1 x1 + C2 x2), <= 0
    int samples = 0;
    int q = 0;
};

/// Empirical interpolation constants for
///   ||u||_q <= C1 ||u||_2^{1+3/q-3/2} ||grad u||_2^{3/2-3/q} + C2 ||u||_2
/// over random band-limited fields: nonnegative least squares on the two-term
/// bound, then the smallest uniform scale-up making every sample satisfy it.
inline GnProbeResult gn_constant_probe(TorusSpec spec, int samples, int q,
                                       std::uint64_t seed = 1, int kmax = 3) {
    if (samples < 10) throw std::invalid_argument("gn_constant_probe: need at least 10 samples");
    if (q != 3 && q != 4 && q != 6) throw std::invalid_argument("gn_constant_probe: q in {3,4,6}");
    spec.validate();
    GridTransform tf(spec);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    double a2 = 1.0 + 3.0 / q - 1.5;  // exponent of ||u||_2
    double a1 = 1.5 - 3.0 / q;        // exponent of ||grad u||_2

    std::vector<double> ys, x1s, x2s;
    for (int s = 0; s < samples; ++s) {
        SpectralField f(spec);
        int band = 1 + int(rng() % kmax);  // vary the band to decorrelate the regressors
        bool coherent = (rng() % 2) == 0;  // aligned phases concentrate the field
        double amp = std::pow(10.0, -2.0 + 4.0 * double(rng() % 1000) / 1000.0);
        for (int a = -band; a <= band; ++a)
            for (int b = -band; b <= band; ++b)
                for (int d = -band; d <= band; ++d) {
                    WaveVector k{a, b, d};
                    if (k.is_zero() || !k.is_positive()) continue;
                    if (!coherent && (rng() % 4) != 0) continue;
                    CVec3 c;
                    for (int i = 0; i < 3; ++i)
                        c[i] = coherent ? std::complex<double>(amp * std::abs(gauss(rng)), 0.0)
                                        : amp * std::complex<double>(gauss(rng), gauss(rng));
                    f.add(k, c);
                    f.add(-k, conj(c));
                }
        if (f.empty()) continue;
        double n2 = l2_norm(f);
        double g2 = std::sqrt(enstrophy(f));
        if (n2 == 0.0) continue;
        ys.push_back(lq_norm(f, q, tf));
        x1s.push_back(std::pow(n2, a2) * std::pow(g2, a1));
        x2s.push_back(n2);
    }

    // nonnegative least squares for y ~= C1 x1 + C2 x2: try the unconstrained
    // stationary point, fall back to the better single-constant fit when it
    // leaves the quadrant
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        s11 += x1s[i] * x1s[i];
        s12 += x1s[i] * x2s[i];
        s22 += x2s[i] * x2s[i];
        b1 += x1s[i] * ys[i];
        b2 += x2s[i] * ys[i];
    }
    auto residual2 = [&](double c1v, double c2v) {
        double r = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            double e = ys[i] - c1v * x1s[i] - c2v * x2s[i];
            r += e * e;
        }
        return r;
    };
    double det = s11 * s22 - s12 * s12;
    double c1 = 0.0, c2 = 0.0;
    if (std::abs(det) > 1e-300) {
        c1 = (b1 * s22 - b2 * s12) / det;
        c2 = (s11 * b2 - s12 * b1) / det;
    }
    if (c1 < 0.0 || c2 < 0.0) {
        double c1_only = s11 > 0.0 ? std::max(0.0, b1 / s11) : 0.0;
        double c2_only = s22 > 0.0 ? std::max(0.0, b2 / s22) : 0.0;
        if (residual2(c1_only, 0.0) <= residual2(0.0, c2_only)) {
            c1 = c1_only;
            c2 = 0.0;
        } else {
            c1 = 0.0;
            c2 = c2_only;
        }
    }
    if (c1 == 0.0 && c2 == 0.0) c1 = 1.0;

    double scale = 1.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        double bound = c1 * x1s[i] + c2 * x2s[i];
        if (bound > 0.0) scale = std::max(scale, ys[i] / bound);
    }
    GnProbeResult res;
    res.C1 = c1 * scale;
    res.C2 = c2 * scale;
    res.samples = int(ys.size());
    res.q = q;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ys.size(); ++i)
        worst = std::max(worst, ys[i] - (res.C1 * x1s[i] + res.C2 * x2s[i]));
    res.worst_residual = worst;
    return res;
}

}  // namespace nsgal
