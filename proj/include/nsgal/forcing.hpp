#pragma once

#include <vector>

#include "nsgal/field.hpp"

namespace nsgal {

/// Body force given as a finite mode list with a polynomial time profile per
/// mode: f(x,t) = sum_modes amp_k e^{i kappa.x} sum_r c_r t^r. Keeping the
/// time dependence polynomial makes every initial time derivative exact.
struct ForcingSpec {
    struct Mode {
        WaveVector k;
        CVec3 amp;
        std::vector<double> c;  // c[0..d], d <= 8
    };
    TorusSpec spec;
    std::vector<Mode> modes;

    bool empty() const { return modes.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& m : modes) d = std::max(d, int(m.c.size()) - 1);
        return d;
    }

    void validate() const {
        spec.validate();
        SpectralField probe(spec);
        for (const auto& m : modes) {
            if (int(m.c.size()) > 9)
                throw std::invalid_argument("ForcingSpec: time polynomial degree must be <= 8");
            probe.add(m.k, m.amp);
        }
        if (!probe.is_hermitian(1e-12))
            throw std::invalid_argument("ForcingSpec: mode list must be Hermitian symmetric");
        if (probe.has_mean_mode(1e-300))
            throw std::invalid_argument("ForcingSpec: forcing must be mean-free");
    }

    SpectralField eval(double t) const {
        SpectralField f(spec);
        for (const auto& m : modes) {
            double p = 0.0;
            for (std::size_t r = m.c.size(); r-- > 0;) p = p * t + m.c[r];
            if (p != 0.0) f.add(m.k, std::complex<double>(p) * m.amp);
        }
        return f;
    }

    /// d^j/dt^j f at t = 0, which is j! c_j per mode.
    SpectralField deriv_at_zero(int j) const {
        SpectralField f(spec);
        double fact = 1.0;
        for (int r = 2; r <= j; ++r) fact *= r;
        for (const auto& m : modes) {
            if (j < int(m.c.size()) && m.c[j] != 0.0)
                f.add(m.k, std::complex<double>(fact * m.c[j]) * m.amp);
        }
        return f;
    }

    /// The coefficient field of t^p in f.
    SpectralField poly_coefficient(int p) const {
        SpectralField f(spec);
        for (const auto& m : modes) {
            if (p < int(m.c.size()) && m.c[p] != 0.0)
                f.add(m.k, std::complex<double>(m.c[p]) * m.amp);
        }
        return f;
    }

    /// ||f(t)||_2 integrated over [0,T] by composite Simpson quadrature.
    double l2_time_integral(double T, int panels = 512) const {
        if (modes.empty() || T <= 0.0) return 0.0;
        auto val = [this](double t) { return l2_norm_of(eval(t)); };
        double h = T / (2 * panels);
        double acc = val(0.0) + val(T);
        for (int i = 1; i < 2 * panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * val(i * h);
        return acc * h / 3.0;
    }

  private:
    static double l2_norm_of(const SpectralField& f) {
        double vol = f.spec().L * f.spec().L * f.spec().L;
        double acc = 0.0;
        for (const auto& [k, c] : f.modes()) acc += abs2(c);
        return std::sqrt(vol * acc);
    }
};

}  // namespace nsgal
