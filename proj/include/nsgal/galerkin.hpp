#pragma once

#include <map>
#include <optional>

#include "nsgal/lift.hpp"
#include "nsgal/trilinear.hpp"

namespace nsgal {

/// Sparse matrix whose entries are polynomials in t (degree <= J), used for
/// the lift coupling terms b_{m,k}(t) = int (beta.grad w_m).w_k and
/// c_{m,k}(t) = int (w_m.grad beta).w_k.
struct PolyMatrix {
    struct Entry {
        int m, k;
        std::vector<double> coef;
    };
    std::vector<Entry> entries;

    double eval_quadratic(const std::vector<double>& g, double t) const {
        double acc = 0.0;
        for (const Entry& e : entries) {
            double p = 0.0;
            for (std::size_t r = e.coef.size(); r-- > 0;) p = p * t + e.coef[r];
            acc += p * g[e.m] * g[e.k];
        }
        return acc;
    }

    /// out_k += sign * sum_m M(t)[m,k] g_m
    void apply(const std::vector<double>& g, double t, std::vector<double>& out,
               double sign) const {
        for (const Entry& e : entries) {
            double p = 0.0;
            for (std::size_t r = e.coef.size(); r-- > 0;) p = p * t + e.coef[r];
            out[e.k] += sign * p * g[e.m];
        }
    }
};

struct BetaMatrices {
    int J = 0;
    PolyMatrix B;  // (beta . grad w_m, w_k), skew in (m,k)
    PolyMatrix C;  // (w_m . grad beta, w_k)
};

namespace detail {

/// Accumulates int (d.grad w_m).w_k (slot=0) or int (w_m.grad d).w_k (slot=1)
/// into per-(m,k) polynomial coefficients of degree `power`.
inline void accumulate_field_matrix(const BasisSpec& basis, const SpectralField& d, int power,
                                    int max_power, int slot,
                                    std::map<std::pair<int, int>, std::vector<double>>& acc) {
    const int n = basis.size();
    const double L = basis.spec().L;
    const double vol = L * L * L;
    const double kscale = 2.0 * M_PI / L;
    for (int m = 0; m < n; ++m) {
        auto [qk, qc] = basis.plus_mode(m);
        std::array<std::pair<WaveVector, CVec3>, 2> qmodes{{{qk, qc}, {-qk, conj(qc)}}};
        for (const auto& [p, cd] : d.modes()) {
            Vec3 kap_p{kscale * p.k1, kscale * p.k2, kscale * p.k3};
            for (const auto& [q, cq] : qmodes) {
                WaveVector s = p + q;
                if (s.is_zero()) continue;
                int base = basis.rep_base_index(s.representative());
                if (base < 0) continue;
                Vec3 kap_q{kscale * q.k1, kscale * q.k2, kscale * q.k3};
                std::complex<double> f1 = slot == 0
                                              ? std::complex<double>(0.0, 1.0) * dot(cd, kap_q)
                                              : std::complex<double>(0.0, 1.0) * dot(cq, kap_p);
                WaveVector r = -s;
                for (int e = base; e < base + 4; ++e) {
                    auto [ek, ec] = basis.plus_mode(e);
                    CVec3 cr = (ek == r) ? ec : conj(ec);
                    std::complex<double> term =
                        vol * f1 * (slot == 0 ? dot(cq, cr) : dot(cd, cr));
                    if (term == 0.0) continue;
                    auto& coef = acc[{m, e}];
                    if (coef.empty()) coef.assign(max_power + 1, 0.0);
                    coef[power] += term.real();
                }
            }
        }
    }
}

inline PolyMatrix flatten(std::map<std::pair<int, int>, std::vector<double>>& acc, double drop) {
    PolyMatrix out;
    for (auto& [mk, coef] : acc) {
        double maxc = 0.0;
        for (double c : coef) maxc = std::max(maxc, std::abs(c));
        if (maxc <= drop) continue;
        out.entries.push_back({mk.first, mk.second, coef});
    }
    return out;
}

}  // namespace detail

inline BetaMatrices assemble_beta_matrices(const BasisSpec& basis, const LiftData& lift) {
    BetaMatrices bm;
    bm.J = lift.J;
    std::map<std::pair<int, int>, std::vector<double>> accB, accC;
    double inv_fact = 1.0;
    for (int r = 0; r <= lift.J; ++r) {
        if (r > 0) inv_fact /= r;
        SpectralField d = inv_fact * lift.derivs[r];
        detail::accumulate_field_matrix(basis, d, r, lift.J, 0, accB);
        detail::accumulate_field_matrix(basis, d, r, lift.J, 1, accC);
    }
    bm.B = detail::flatten(accB, 0.0);
    bm.C = detail::flatten(accC, 0.0);
    return bm;
}

/// Projection of a polynomial-in-t field stack onto the basis:
/// proj[k][p] = <Theta_p, w_k>, so <theta(t), w_k> = sum_p proj[k][p] t^p.
struct ProjectedPoly {
    int n = 0;
    int degree = -1;
    std::vector<double> c;  // (degree+1) x n, c[p*n + k]

    double eval(int k, double t) const {
        double acc = 0.0;
        for (int p = degree; p >= 0; --p) acc = acc * t + c[std::size_t(p) * n + k];
        return acc;
    }
    void eval_all(double t, std::vector<double>& out, double sign) const {
        for (int k = 0; k < n; ++k) out[k] += sign * eval(k, t);
    }
    double max_abs_at(double t) const {
        double m = 0.0;
        for (int k = 0; k < n; ++k) m = std::max(m, std::abs(eval(k, t)));
        return m;
    }
};

inline ProjectedPoly project_stack(const BasisSpec& basis,
                                   const std::vector<SpectralField>& stack) {
    ProjectedPoly pp;
    pp.n = basis.size();
    pp.degree = int(stack.size()) - 1;
    pp.c.assign(std::size_t(pp.degree + 1) * pp.n, 0.0);
    for (int p = 0; p <= pp.degree; ++p) {
        std::vector<double> g = basis.project(stack[p]);
        std::copy(g.begin(), g.end(), pp.c.begin() + std::size_t(p) * pp.n);
    }
    return pp;
}

/// Coefficient vector g with its clock; the only mutable object a single
/// integrator owns at a time.
struct GalerkinState {
    std::vector<double> g;
    double t = 0.0;
};

struct ResidualReport {
    double t = 0.0;
    double q_norm = 0.0;
    double orthogonality_defect = 0.0;  // max_k |<q,w_k>| / ||q||_2
    double energy_balance_defect = 0.0;
};

/// Assembled finite-dimensional system: both the lifted form
///   dg_k/dt = -sum a g g - sum (b+c)(t) g - nu lambda_k g + <theta(t),w_k>
/// and the direct (unlifted) form
///   du_k/dt = -sum a u u - nu lambda_k u + <f(t),w_k>.
class GalerkinProblem {
  public:
    BasisSpec basis;
    TrilinearTensor tensor;
    std::vector<double> lambda;
    double nu = 0.0;

    // lifted ingredients (present when lift_data is set)
    std::optional<LiftData> lift_data;
    BetaMatrices bc;
    std::vector<SpectralField> theta;  // full theta stack
    ProjectedPoly theta_proj;

    // direct ingredients
    ForcingSpec forcing;
    ProjectedPoly forcing_proj;

    long long enlarged_ball2 = -1;  // mode-set cap for q_n

    int n() const { return basis.size(); }

    static GalerkinProblem assemble(BasisSpec basis, double nu, const ForcingSpec& forcing,
                                    std::optional<LiftData> lift = std::nullopt,
                                    long long enlarged_ball2 = -1) {
        GalerkinProblem p;
        p.basis = std::move(basis);
        p.nu = nu;
        p.tensor = assemble_trilinear(p.basis);
        p.lambda.resize(p.basis.size());
        for (int i = 0; i < p.basis.size(); ++i) p.lambda[i] = p.basis.entry(i).lambda;
        p.forcing = forcing;
        if (!forcing.empty()) {
            std::vector<SpectralField> fstack;
            for (int d = 0; d <= forcing.degree(); ++d)
                fstack.push_back(forcing.poly_coefficient(d));
            p.forcing_proj = project_stack(p.basis, fstack);
        } else {
            p.forcing_proj.n = p.basis.size();
        }
        if (lift) {
            p.lift_data = std::move(*lift);
            p.bc = assemble_beta_matrices(p.basis, *p.lift_data);
            p.theta = theta_stack(*p.lift_data, forcing);
            p.theta_proj = project_stack(p.basis, p.theta);
        }
        if (enlarged_ball2 < 0) {
            long long r2 = 0;
            for (const auto& rep : p.basis.representatives()) r2 = std::max(r2, rep.norm2());
            double r = 2.0 * std::sqrt(double(r2));
            enlarged_ball2 = (long long)(r * r + 1e-9);
        }
        p.enlarged_ball2 = enlarged_ball2;
        return p;
    }

    void rhs(const GalerkinState& s, std::vector<double>& out) const {
        if (!lift_data) throw std::logic_error("GalerkinProblem: lifted rhs needs lift data");
        check_dim(s.g);
        out.assign(s.g.size(), 0.0);
        tensor.apply_quadratic(s.g, out, -1.0);
        bc.B.apply(s.g, s.t, out, -1.0);
        bc.C.apply(s.g, s.t, out, -1.0);
        for (int k = 0; k < n(); ++k) out[k] -= nu * lambda[k] * s.g[k];
        theta_proj.eval_all(s.t, out, 1.0);
    }

    void rhs_direct(const GalerkinState& s, std::vector<double>& out) const {
        check_dim(s.g);
        out.assign(s.g.size(), 0.0);
        tensor.apply_quadratic(s.g, out, -1.0);
        for (int k = 0; k < n(); ++k) out[k] -= nu * lambda[k] * s.g[k];
        if (forcing_proj.degree >= 0) forcing_proj.eval_all(s.t, out, 1.0);
    }

    SpectralField reconstruct_v(const std::vector<double>& g) const {
        return basis.reconstruct(g);
    }
    SpectralField reconstruct_u(const GalerkinState& s) const {
        if (!lift_data) return basis.reconstruct(s.g);
        SpectralField u = basis.reconstruct(s.g);
        u += beta_eval(*lift_data, s.t);
        return u;
    }

    /// Galerkin residual q_n = d_t v_n - nu Delta v_n + v_n.grad v_n
    /// + beta.grad v_n + v_n.grad beta - theta, on the enlarged mode set.
    ResidualReport q_residual(const GalerkinState& s, const std::vector<double>& gdot) const {
        if (!lift_data) throw std::logic_error("GalerkinProblem: q_n needs lift data");
        check_dim(s.g);
        SpectralField v = basis.reconstruct(s.g);
        SpectralField dvdt = basis.reconstruct(gdot);
        SpectralField beta = beta_eval(*lift_data, s.t);
        SpectralField q = dvdt - nu * laplacian(v);
        q += advect_spectral(v, v, enlarged_ball2);
        q += advect_spectral(beta, v, enlarged_ball2);
        q += advect_spectral(v, beta, enlarged_ball2);
        q -= truncate_ball(theta_eval_from_stack(theta, s.t), enlarged_ball2);

        ResidualReport rep;
        rep.t = s.t;
        rep.q_norm = l2_norm(q);
        std::vector<double> proj = basis.project(q);
        double mx = 0.0;
        for (double p : proj) mx = std::max(mx, std::abs(p));
        rep.orthogonality_defect = rep.q_norm > 0.0 ? mx / rep.q_norm : 0.0;
        rep.energy_balance_defect = energy_balance_defect(s, gdot);
        return rep;
    }

    /// |d/dt (1/2)||v||^2 + nu ||grad v||^2 + sum c(t) g g - <theta, v>|,
    /// normalized by the scale of the participating terms.
    double energy_balance_defect(const GalerkinState& s, const std::vector<double>& gdot) const {
        double lhs = 0.0, ens = 0.0, th = 0.0;
        for (int k = 0; k < n(); ++k) {
            lhs += s.g[k] * gdot[k];
            ens += lambda[k] * s.g[k] * s.g[k];
        }
        double cterm = lift_data ? bc.C.eval_quadratic(s.g, s.t) : 0.0;
        const ProjectedPoly& pp = lift_data ? theta_proj : forcing_proj;
        if (pp.degree >= 0)
            for (int k = 0; k < n(); ++k) th += pp.eval(k, s.t) * s.g[k];
        double defect = std::abs(lhs + nu * ens + cterm - th);
        double scale = std::max({std::abs(lhs), nu * ens, std::abs(cterm), std::abs(th), 1e-300});
        return defect / scale;
    }

  private:
    void check_dim(const std::vector<double>& g) const {
        if (int(g.size()) != n())
            throw std::invalid_argument("GalerkinProblem: coefficient dimension mismatch");
    }
};

}  // namespace nsgal
