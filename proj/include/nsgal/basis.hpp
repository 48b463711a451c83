#pragma once

#include <algorithm>
#include <vector>

#include "nsgal/ops.hpp"

namespace nsgal {

/// One real orthonormal Stokes eigenfunction on the torus:
///   phase 0:  sqrt(2)/L^{3/2} eps cos(kappa.x)
///   phase 1:  sqrt(2)/L^{3/2} eps sin(kappa.x)
/// with eps one of the two polarizations of the representative wavevector k.
/// Each function is divergence-free, satisfies Delta w = -|kappa|^2 w (the
/// eigenvalue problem with vanishing pressure), and its spectral support is
/// the conjugate pair {k,-k}.
struct BasisEntry {
    WaveVector k;  // representative (first nonzero component positive)
    Vec3 eps;
    int pol;    // 0 or 1
    int phase;  // 0 = cos, 1 = sin
    double lambda;
};

class BasisSpec {
  public:
    BasisSpec() = default;

    /// All representatives with 0 < |k|^2 <= radius^2, ordered by ascending
    /// |k|^2, then lexicographic k, then polarization, then phase.
    static BasisSpec build_ball(TorusSpec spec, int radius) {
        if (radius < 1) throw std::invalid_argument("BasisSpec: radius must be >= 1");
        std::vector<WaveVector> reps;
        long long r2 = (long long)radius * radius;
        for (int a = -radius; a <= radius; ++a)
            for (int b = -radius; b <= radius; ++b)
                for (int c = -radius; c <= radius; ++c) {
                    WaveVector k{a, b, c};
                    if (k.is_zero() || k.norm2() > r2 || !k.is_positive()) continue;
                    reps.push_back(k);
                }
        return build_from_reps(spec, std::move(reps));
    }

    static BasisSpec build_from_reps(TorusSpec spec, std::vector<WaveVector> reps) {
        spec.validate();
        std::sort(reps.begin(), reps.end(), [](const WaveVector& a, const WaveVector& b) {
            if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
            return a < b;
        });
        reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
        BasisSpec bs;
        bs.spec_ = spec;
        for (const auto& k : reps) {
            if (!k.is_positive())
                throw std::invalid_argument("BasisSpec: representatives must be sign-normalized");
            auto eps = polarizations(k);
            double lambda = k.kappa2(spec.L);
            for (int p = 0; p < 2; ++p)
                for (int ph = 0; ph < 2; ++ph)
                    bs.entries_.push_back(BasisEntry{k, eps[p], p, ph, lambda});
        }
        bs.reps_ = std::move(reps);
        return bs;
    }

    const TorusSpec& spec() const { return spec_; }
    int size() const { return int(entries_.size()); }
    const std::vector<BasisEntry>& entries() const { return entries_; }
    const BasisEntry& entry(int i) const { return entries_[i]; }
    const std::vector<WaveVector>& representatives() const { return reps_; }

    /// Index of the first of the four entries sharing representative k, or -1.
    int rep_base_index(const WaveVector& rep) const {
        auto it = std::lower_bound(reps_.begin(), reps_.end(), rep,
                                   [](const WaveVector& a, const WaveVector& b) {
                                       if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
                                       return a < b;
                                   });
        if (it == reps_.end() || !(*it == rep)) return -1;
        return int(4 * (it - reps_.begin()));
    }

    double coeff_scale() const { return 1.0 / (std::sqrt(2.0) * std::pow(spec_.L, 1.5)); }

    /// The two spectral modes of entry i: (k, c) and (-k, conj(c)).
    std::pair<WaveVector, CVec3> plus_mode(int i) const {
        const BasisEntry& e = entries_[i];
        double c0 = coeff_scale();
        std::complex<double> f = e.phase == 0 ? std::complex<double>(c0, 0.0)
                                              : std::complex<double>(0.0, -c0);
        return {e.k, CVec3{f * e.eps[0], f * e.eps[1], f * e.eps[2]}};
    }

    SpectralField field_of(int i, double amplitude = 1.0) const {
        auto [k, c] = plus_mode(i);
        SpectralField f(spec_);
        f.set_pair(k, std::complex<double>(amplitude) * c);
        return f;
    }

    /// Orthogonal projection coefficients g_i = <v, w_i>.
    std::vector<double> project(const SpectralField& v) const {
        if (v.spec() != spec_) throw std::invalid_argument("BasisSpec: field spec mismatch");
        std::vector<double> g(entries_.size());
        double s = std::sqrt(2.0) * std::pow(spec_.L, 1.5);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const BasisEntry& e = entries_[i];
            CVec3 c = v.coeff(e.k);
            double re = e.eps[0] * c[0].real() + e.eps[1] * c[1].real() + e.eps[2] * c[2].real();
            double im = e.eps[0] * c[0].imag() + e.eps[1] * c[1].imag() + e.eps[2] * c[2].imag();
            g[i] = e.phase == 0 ? s * re : -s * im;
        }
        return g;
    }

    SpectralField reconstruct(const std::vector<double>& g) const {
        if (g.size() != entries_.size())
            throw std::invalid_argument("BasisSpec: coefficient vector length mismatch");
        SpectralField f(spec_);
        double c0 = coeff_scale();
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (g[i] == 0.0) continue;
            const BasisEntry& e = entries_[i];
            std::complex<double> fac = e.phase == 0 ? std::complex<double>(c0 * g[i], 0.0)
                                                    : std::complex<double>(0.0, -c0 * g[i]);
            f.add(e.k, CVec3{fac * e.eps[0], fac * e.eps[1], fac * e.eps[2]});
            std::complex<double> fc = std::conj(fac);
            f.add(-e.k, CVec3{fc * e.eps[0], fc * e.eps[1], fc * e.eps[2]});
        }
        return f;
    }

    std::uint64_t hash() const {
        std::uint64_t h = fnv1a_init();
        h = fnv1a(h, &spec_.L, sizeof(spec_.L));
        for (const auto& e : entries_) {
            int v[5] = {e.k.k1, e.k.k2, e.k.k3, e.pol, e.phase};
            h = fnv1a(h, v, sizeof(v));
        }
        return h;
    }

  private:
    TorusSpec spec_;
    std::vector<BasisEntry> entries_;
    std::vector<WaveVector> reps_;
};

}  // namespace nsgal
