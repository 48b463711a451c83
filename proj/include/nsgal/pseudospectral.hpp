#pragma once

#include <memory>

#include "nsgal/fft.hpp"
#include "nsgal/forcing.hpp"
#include "nsgal/lift.hpp"
#include "nsgal/stepper.hpp"

namespace nsgal {

/// Mode-space flow for Galerkin balls too large for the sparse tensor: the
/// state is the packed half-mode-set coefficient vector and the advection
/// term is evaluated pseudo-spectrally on the companion grid with 2/3-rule
/// headroom (G >= 3 kmax), where it is alias-free and agrees with the exact
/// convolution. Works for the direct unknown and, given a lift, for the
/// lifted one:
///   v' = nu Delta v - P((v+beta).grad(v+beta)) + P(beta.grad beta) + P theta.
class PseudoSpectralFlow : public FlowSystem {
  public:
    PseudoSpectralFlow(TorusSpec spec, std::vector<WaveVector> half_modes, double nu,
                       const ForcingSpec& forcing, const LiftData* lift = nullptr,
                       const AdvectFn& stack_advect = nullptr)
        : spec_(spec), half_(std::move(half_modes)), nu_(nu), tf_(spec) {
        int kmax = 0;
        for (const auto& k : half_) {
            if (!k.is_positive())
                throw std::invalid_argument("PseudoSpectralFlow: modes must be representatives");
            kmax = std::max(kmax, k.linf());
        }
        if (3 * kmax >= spec_.G)
            throw std::invalid_argument("PseudoSpectralFlow: grid too small for 2/3-rule");
        vol_ = spec_.L * spec_.L * spec_.L;
        double s = 2.0 * M_PI / spec_.L;
        kap_.resize(half_.size());
        lam_.resize(half_.size());
        for (std::size_t i = 0; i < half_.size(); ++i) {
            kap_[i] = {s * half_[i].k1, s * half_[i].k2, s * half_[i].k3};
            lam_[i] = dot(kap_[i], kap_[i]);
        }
        // polynomial stacks per mode
        if (lift) {
            lifted_ = true;
            beta_stack_ = pack_stack_fields(lift_fields(*lift));
            std::vector<SpectralField> theta = theta_stack(*lift, forcing, stack_advect);
            std::vector<SpectralField> bb = beta_beta_stack(*lift, stack_advect);
            for (auto& th : theta) th = leray_project(th);
            for (auto& f : bb) f = leray_project(f);
            theta_stack_ = pack_stack_fields(theta);
            bbl_stack_ = pack_stack_fields(bb);
        } else if (!forcing.empty()) {
            std::vector<SpectralField> fstack;
            for (int d = 0; d <= forcing.degree(); ++d)
                fstack.push_back(leray_project(forcing.poly_coefficient(d)));
            force_stack_ = pack_stack_fields(fstack);
        }
        comp_fwd_.resize(3 * half_.size());
    }

    int dim() const override { return int(6 * half_.size()); }
    const std::vector<WaveVector>& half_modes() const { return half_; }
    const TorusSpec& spec() const { return spec_; }
    bool lifted() const { return lifted_; }

    std::vector<double> pack(const SpectralField& f) const {
        std::vector<double> y(dim(), 0.0);
        for (std::size_t i = 0; i < half_.size(); ++i) {
            CVec3 c = f.coeff(half_[i]);
            for (int comp = 0; comp < 3; ++comp) {
                y[6 * i + 2 * comp] = c[comp].real();
                y[6 * i + 2 * comp + 1] = c[comp].imag();
            }
        }
        return y;
    }

    SpectralField unpack(const std::vector<double>& y) const {
        SpectralField f(spec_);
        for (std::size_t i = 0; i < half_.size(); ++i) {
            CVec3 c;
            for (int comp = 0; comp < 3; ++comp)
                c[comp] = std::complex<double>(y[6 * i + 2 * comp], y[6 * i + 2 * comp + 1]);
            f.set_pair(half_[i], c);
        }
        return f;
    }

    void rhs(double t, const std::vector<double>& y, std::vector<double>& dydt) const override {
        dydt.assign(y.size(), 0.0);
        // u = v + beta(t) in the lifted form, u = v directly otherwise
        std::vector<double> u = y;
        if (lifted_) add_stack(beta_stack_, t, u);
        advect_grid(u, dydt);  // dydt := -P(u.grad u) restricted to the modes
        for (std::size_t i = 0; i < half_.size(); ++i)
            for (int c = 0; c < 6; ++c) dydt[6 * i + c] -= nu_ * lam_[i] * y[6 * i + c];
        if (lifted_) {
            add_stack(bbl_stack_, t, dydt);
            add_stack(theta_stack_, t, dydt);
        } else if (!force_stack_.empty()) {
            add_stack(force_stack_, t, dydt);
        }
    }

    double energy(const std::vector<double>& y) const override {
        double acc = 0.0;
        for (double v : y) acc += v * v;
        return 2.0 * vol_ * acc;  // conjugate pair doubling
    }
    double enstrophy_y(const std::vector<double>& y) const override {
        return weighted(y, lam_, 1);
    }
    double dissipation(const std::vector<double>& y) const override {
        return weighted(y, lam_, 2);
    }
    double energy_rate(const std::vector<double>& y,
                       const std::vector<double>& ydot) const override {
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) acc += y[i] * ydot[i];
        return 4.0 * vol_ * acc;
    }
    double enstrophy_rate(const std::vector<double>& y,
                          const std::vector<double>& ydot) const override {
        double acc = 0.0;
        for (std::size_t i = 0; i < half_.size(); ++i) {
            double dotp = 0.0;
            for (int c = 0; c < 6; ++c) dotp += y[6 * i + c] * ydot[6 * i + c];
            acc += lam_[i] * dotp;
        }
        return 4.0 * vol_ * acc;
    }

    SpectralField beta_at(double t) const {
        std::vector<double> b(dim(), 0.0);
        add_stack(beta_stack_, t, b);
        return unpack(b);
    }

  private:
    TorusSpec spec_;
    std::vector<WaveVector> half_;
    double nu_;
    GridTransform tf_;
    double vol_ = 0.0;
    std::vector<Vec3> kap_;
    std::vector<double> lam_;
    bool lifted_ = false;
    std::vector<std::vector<double>> beta_stack_, theta_stack_, bbl_stack_, force_stack_;

    static std::vector<SpectralField> lift_fields(const LiftData& lift) {
        std::vector<SpectralField> fields;
        double inv_fact = 1.0;
        for (int j = 0; j <= lift.J; ++j) {
            if (j > 0) inv_fact /= j;
            fields.push_back(inv_fact * lift.derivs[j]);
        }
        return fields;
    }

    /// + P(beta.grad beta)(t) as a polynomial stack (enters the lifted rhs).
    static std::vector<SpectralField> beta_beta_stack(const LiftData& lift,
                                                      const AdvectFn& advect = nullptr) {
        AdvectFn conv = advect ? advect
                               : [](const SpectralField& a, const SpectralField& b,
                                    long long cap) { return advect_spectral(a, b, cap); };
        std::vector<SpectralField> out(2 * lift.J + 1, SpectralField(lift.u0().spec()));
        std::vector<double> inv_fact(lift.J + 1, 1.0);
        for (int j = 1; j <= lift.J; ++j) inv_fact[j] = inv_fact[j - 1] / j;
        for (int r = 0; r <= lift.J; ++r)
            for (int s = 0; s <= lift.J; ++s) {
                SpectralField prod = conv(lift.derivs[r], lift.derivs[s], lift.ball2_cap);
                out[r + s] += (inv_fact[r] * inv_fact[s]) * prod;
            }
        return out;
    }

    std::vector<std::vector<double>> pack_stack_fields(
        const std::vector<SpectralField>& stack) const {
        std::vector<std::vector<double>> out;
        for (const auto& f : stack) out.push_back(pack(f));
        return out;
    }

    void add_stack(const std::vector<std::vector<double>>& stack, double t,
                   std::vector<double>& y) const {
        if (stack.empty()) return;
        double p = 1.0;
        for (std::size_t d = 0; d < stack.size(); ++d) {
            if (d > 0) p *= t;
            if (p == 0.0) continue;
            const auto& s = stack[d];
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += p * s[i];
        }
    }

    double weighted(const std::vector<double>& y, const std::vector<double>& lam,
                    int pw) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < half_.size(); ++i) {
            double m2 = 0.0;
            for (int c = 0; c < 6; ++c) m2 += y[6 * i + c] * y[6 * i + c];
            acc += (pw == 1 ? lam[i] : lam[i] * lam[i]) * m2;
        }
        return 2.0 * vol_ * acc;
    }

    /// dydt -= P(u.grad u) evaluated pseudo-spectrally (dealiased by G>=3k).
    void advect_grid(const std::vector<double>& u, std::vector<double>& dydt) const {
        std::size_t n = tf_.cells();
        std::vector<double> ug(3 * n), dug(n), acc(3 * n, 0.0);
        auto to_grid = [&](int comp, int deriv_axis, double* out) {
            tf_.inverse_begin();
            for (std::size_t i = 0; i < half_.size(); ++i) {
                std::complex<double> c(u[6 * i + 2 * comp], u[6 * i + 2 * comp + 1]);
                if (deriv_axis >= 0) {
                    double kap = kap_[i][deriv_axis];
                    c *= std::complex<double>(0.0, kap);
                }
                tf_.inverse_add(half_[i], c);
                tf_.inverse_add(-half_[i], std::conj(c));
            }
            tf_.inverse_execute(out);
        };
        for (int j = 0; j < 3; ++j) to_grid(j, -1, ug.data() + j * n);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                to_grid(i, j, dug.data());
                const double* us = ug.data() + j * n;
                double* a = acc.data() + i * n;
                for (std::size_t idx = 0; idx < n; ++idx) a[idx] += us[idx] * dug[idx];
            }
        // forward transform, restrict to the mode set, Leray-project per mode
        for (int comp = 0; comp < 3; ++comp) {
            tf_.forward_raw(acc.data() + comp * n);
            for (std::size_t i = 0; i < half_.size(); ++i)
                comp_fwd_[comp * half_.size() + i] = tf_.fourier_at(half_[i]);
        }
        for (std::size_t i = 0; i < half_.size(); ++i) {
            CVec3 c{comp_fwd_[i], comp_fwd_[half_.size() + i], comp_fwd_[2 * half_.size() + i]};
            const Vec3& kap = kap_[i];
            std::complex<double> dp = dot(c, kap) / lam_[i];
            for (int comp = 0; comp < 3; ++comp) {
                std::complex<double> val = c[comp] - dp * kap[comp];
                dydt[6 * i + 2 * comp] -= val.real();
                dydt[6 * i + 2 * comp + 1] -= val.imag();
            }
        }
    }

    mutable std::vector<std::complex<double>> comp_fwd_;
};

}  // namespace nsgal
