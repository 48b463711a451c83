#pragma once

#include <fftw3.h>

#include <complex>
#include <vector>

#include "nsgal/field.hpp"

namespace nsgal {

/// Thin RAII wrapper around single-threaded FFTW c2c transforms on a G^3 box.
/// Plans use FFTW_ESTIMATE so the algorithm choice (and hence rounding) is
/// reproducible run to run.
class GridTransform {
  public:
    explicit GridTransform(TorusSpec spec) : spec_(spec) {
        spec_.validate();
        std::size_t n = cells();
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        fwd_ = fftw_plan_dft_3d(spec_.G, spec_.G, spec_.G, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_3d(spec_.G, spec_.G, spec_.G, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~GridTransform() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    GridTransform(const GridTransform&) = delete;
    GridTransform& operator=(const GridTransform&) = delete;

    const TorusSpec& spec() const { return spec_; }
    std::size_t cells() const { return std::size_t(spec_.G) * spec_.G * spec_.G; }

    std::size_t index_of(const WaveVector& k) const {
        int G = spec_.G;
        auto wrap = [G](int v) { return ((v % G) + G) % G; };
        return (std::size_t(wrap(k.k1)) * G + wrap(k.k2)) * G + wrap(k.k3);
    }

    /// Inverse transform of one vector component onto the grid (real part).
    /// `deriv_axis` in {-1,0,1,2}: -1 plain, else multiply by i*kappa_axis.
    void component_to_grid(const SpectralField& f, int comp, int deriv_axis, double* out) const {
        std::size_t n = cells();
        for (std::size_t i = 0; i < n; ++i) {
            buf_[i][0] = 0.0;
            buf_[i][1] = 0.0;
        }
        double scale = 2.0 * M_PI / spec_.L;
        for (const auto& [k, c] : f.modes()) {
            std::complex<double> v = c[comp];
            if (deriv_axis >= 0) {
                double kap = scale * (deriv_axis == 0 ? k.k1 : deriv_axis == 1 ? k.k2 : k.k3);
                v *= std::complex<double>(0.0, kap);
            }
            std::size_t idx = index_of(k);
            buf_[idx][0] += v.real();
            buf_[idx][1] += v.imag();
        }
        fftw_execute(bwd_);
        for (std::size_t i = 0; i < n; ++i) out[i] = buf_[i][0];
    }

    RealGridField to_grid(const SpectralField& f) const {
        RealGridField g(spec_);
        for (int c = 0; c < 3; ++c) component_to_grid(f, c, -1, g.data.data() + c * cells());
        return g;
    }

    /// Raw inverse path: zero the buffer, add spectral coefficients, execute.
    void inverse_begin() const {
        std::size_t n = cells();
        for (std::size_t i = 0; i < n; ++i) {
            buf_[i][0] = 0.0;
            buf_[i][1] = 0.0;
        }
    }
    void inverse_add(const WaveVector& k, std::complex<double> v) const {
        std::size_t idx = index_of(k);
        buf_[idx][0] += v.real();
        buf_[idx][1] += v.imag();
    }
    void inverse_execute(double* out) const {
        fftw_execute(bwd_);
        std::size_t n = cells();
        for (std::size_t i = 0; i < n; ++i) out[i] = buf_[i][0];
    }

    /// Forward transform of one raw real component into the internal buffer;
    /// read individual coefficients with `fourier_at` afterwards.
    void forward_raw(const double* data) const {
        std::size_t n = cells();
        for (std::size_t i = 0; i < n; ++i) {
            buf_[i][0] = data[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
    }
    std::complex<double> fourier_at(const WaveVector& k) const {
        std::size_t idx = index_of(k);
        double inv = 1.0 / double(cells());
        return {buf_[idx][0] * inv, buf_[idx][1] * inv};
    }

    /// Forward transform; keeps modes with |k|_inf <= band (band<0: G/2-1).
    SpectralField from_grid(const RealGridField& g, int band = -1) const {
        if (g.spec != spec_) throw std::invalid_argument("GridTransform: grid spec mismatch");
        if (band < 0) band = spec_.G / 2 - 1;
        std::size_t n = cells();
        SpectralField f(spec_);
        std::vector<std::complex<double>> comp(n);
        for (int c = 0; c < 3; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                buf_[i][0] = g.data[c * n + i];
                buf_[i][1] = 0.0;
            }
            fftw_execute(fwd_);
            double inv = 1.0 / double(n);
            for (int a = -band; a <= band; ++a)
                for (int b = -band; b <= band; ++b)
                    for (int d = -band; d <= band; ++d) {
                        WaveVector k{a, b, d};
                        std::size_t idx = index_of(k);
                        std::complex<double> v(buf_[idx][0] * inv, buf_[idx][1] * inv);
                        if (v != 0.0) {
                            CVec3 cur = f.coeff(k);
                            cur[c] = v;
                            f.set(k, cur);
                        }
                    }
        }
        return f;
    }

  private:
    TorusSpec spec_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

}  // namespace nsgal
