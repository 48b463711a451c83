#pragma once

#include <random>

#include "nsgal/data.hpp"

namespace nsgal::testutil {

/// Random Hermitian band-limited field; optionally left non-solenoidal.
inline SpectralField random_field(TorusSpec spec, int kmax, int nmodes, std::uint64_t seed,
                                  bool solenoidal = true, double amplitude = 1.0) {
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
    if (solenoidal) f = leray_project(f);
    f.prune(1e-14);
    return f;
}

inline SpectralField taylor_green(TorusSpec spec, double amplitude = 1.0) {
    return taylor_green_data(spec, amplitude);
}

inline SpectralField single_mode(TorusSpec spec, double amplitude = 1.0) {
    return single_mode_data(spec, amplitude);
}

}  // namespace nsgal::testutil
