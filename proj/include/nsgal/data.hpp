#pragma once

#include <random>

#include "nsgal/cutoff.hpp"
#include "nsgal/fft.hpp"
#include "nsgal/ops.hpp"
#include "nsgal/profiles.hpp"

namespace nsgal {

/// Taylor-Green initial data (sin x cos y, -cos x sin y, 0) on L = 2pi:
/// the advection term is a pure gradient, so u(t) = e^{-2 nu t} u0 exactly.
inline SpectralField taylor_green_data(TorusSpec spec, double amplitude = 1.0) {
    SpectralField f(spec);
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            CVec3 c{std::complex<double>(0.0, -0.25 * s1) * amplitude,
                    std::complex<double>(0.0, 0.25 * s2) * amplitude, 0.0};
            f.set(WaveVector{s1, s2, 0}, c);
        }
    return f;
}

/// a * (0, sin x, 0): a single conjugate mode pair with |kappa| = 1 on L = 2pi.
inline SpectralField single_mode_data(TorusSpec spec, double amplitude = 1.0) {
    SpectralField f(spec);
    f.set_pair(WaveVector{1, 0, 0}, CVec3{0.0, std::complex<double>(0.0, -0.5 * amplitude), 0.0});
    return f;
}

/// Random Hermitian band-limited solenoidal field on `nmodes` representatives
/// drawn from the ball |k| <= kmax (deterministic in the seed).
inline SpectralField random_solenoidal_data(TorusSpec spec, int kmax, int nmodes,
                                            std::uint64_t seed, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<WaveVector> reps;
    for (int a = -kmax; a <= kmax; ++a)
        for (int b = -kmax; b <= kmax; ++b)
            for (int c = -kmax; c <= kmax; ++c) {
                WaveVector k{a, b, c};
                if (k.is_zero() || k.norm2() > (long long)kmax * kmax || !k.is_positive())
                    continue;
                reps.push_back(k);
            }
    std::shuffle(reps.begin(), reps.end(), rng);
    if (nmodes > 0 && nmodes < int(reps.size())) reps.resize(nmodes);
    SpectralField f(spec);
    for (const auto& k : reps) {
        CVec3 c;
        for (int i = 0; i < 3; ++i) c[i] = std::complex<double>(gauss(rng), gauss(rng));
        f.set_pair(k, std::complex<double>(amplitude) * c);
    }
    f = leray_project(f);
    f.prune(1e-14);
    return f;
}

/// Samples a closed-form profile (optionally cut off by eta_r) on the torus
/// grid, transforms, keeps |k|^2 <= ball2, removes the mean and projects.
inline SpectralField sample_profile_field(TorusSpec spec, const ProfileSpec& prof,
                                          double cutoff_radius, long long ball2) {
    spec.validate();
    GridTransform tf(spec);
    RealGridField g(spec);
    std::optional<CutoffSpec> eta;
    if (cutoff_radius > 0.0) eta.emplace(cutoff_radius);
    int G = spec.G;
    double h = spec.L / G;
    std::size_t idx = 0;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j)
            for (int kk = 0; kk < G; ++kk, ++idx) {
                auto wrap = [&](int v) { return v >= G / 2 ? (v - G) * h : v * h; };
                Vec3 x{wrap(i), wrap(j), wrap(kk)};
                Vec3 val = prof.eval(x);
                if (eta) val = (*eta)(x) * val;
                for (int c = 0; c < 3; ++c) g.at(c, idx) = val[c];
            }
    SpectralField f = tf.from_grid(g, G / 2 - 1);
    if (ball2 >= 0) f = truncate_ball(f, ball2, /*mean_free=*/true);
    f.drop_mean();
    f = leray_project(f);
    f.prune(1e-15);
    return f;
}

}  // namespace nsgal
