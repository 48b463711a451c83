#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "nsgal/basis.hpp"

namespace nsgal {

/// Sparse advection tensor a_{i,m,k} = int (w_i.grad w_m).w_k dx, evaluated in
/// closed form: the integral of a product of exponentials is L^3 exactly when
/// the wavevectors sum to zero and 0 otherwise. Entries are skew in (m,k) up
/// to roundoff; values analytically zero are dropped.
struct TrilinearTensor {
    struct Entry {
        int i, m, k;
        double v;
    };
    int n = 0;
    std::vector<Entry> entries;

    /// out_k += sign * sum_{i,m} a_{i,m,k} g_i g_m
    void apply_quadratic(const std::vector<double>& g, std::vector<double>& out,
                         double sign = -1.0) const {
        for (const Entry& e : entries) out[e.k] += sign * e.v * g[e.i] * g[e.m];
    }

    /// sum_{i,m,k} a_{i,m,k} g_i g_m g_k  (vanishes analytically).
    double contract_cubic(const std::vector<double>& g) const {
        double acc = 0.0;
        for (const Entry& e : entries) acc += e.v * g[e.i] * g[e.m] * g[e.k];
        return acc;
    }

    /// Same sum together with the absolute-term scale, in one pass.
    std::pair<double, double> contract_cubic_with_scale(const std::vector<double>& g) const {
        double acc = 0.0, scale = 0.0;
        for (const Entry& e : entries) {
            double t = e.v * g[e.i] * g[e.m] * g[e.k];
            acc += t;
            scale += std::abs(t);
        }
        return {acc, scale};
    }

    double max_abs() const {
        double m = 0.0;
        for (const Entry& e : entries) m = std::max(m, std::abs(e.v));
        return m;
    }
};

/// max |a_{i,m,k} + a_{i,k,m}| over all entries (skewness defect), by sorted
/// pairing of the entry list against its (m,k)-transpose.
inline double tensor_skew_defect(const TrilinearTensor& tensor) {
    const long long n = tensor.n;
    std::vector<std::pair<long long, double>> direct, transposed;
    direct.reserve(tensor.entries.size());
    transposed.reserve(tensor.entries.size());
    for (const auto& e : tensor.entries) {
        direct.emplace_back((e.i * n + e.m) * n + e.k, e.v);
        transposed.emplace_back((e.i * n + e.k) * n + e.m, e.v);
    }
    std::sort(direct.begin(), direct.end());
    std::sort(transposed.begin(), transposed.end());
    double worst = 0.0;
    std::size_t a = 0, b = 0;
    while (a < direct.size() || b < transposed.size()) {
        if (b >= transposed.size() || (a < direct.size() && direct[a].first < transposed[b].first)) {
            worst = std::max(worst, std::abs(direct[a].second));
            ++a;
        } else if (a >= direct.size() || transposed[b].first < direct[a].first) {
            worst = std::max(worst, std::abs(transposed[b].second));
            ++b;
        } else {
            worst = std::max(worst, std::abs(direct[a].second + transposed[b].second));
            ++a;
            ++b;
        }
    }
    return worst;
}

inline TrilinearTensor assemble_trilinear(const BasisSpec& basis) {
    const int n = basis.size();
    const double L = basis.spec().L;
    const double vol = L * L * L;
    const double kscale = 2.0 * M_PI / L;

    // two signed modes per entry
    struct Mode {
        WaveVector k;
        CVec3 c;
    };
    std::vector<std::array<Mode, 2>> modes(n);
    for (int i = 0; i < n; ++i) {
        auto [k, c] = basis.plus_mode(i);
        modes[i][0] = {k, c};
        modes[i][1] = {-k, conj(c)};
    }

    double max_kappa = 0.0;
    for (const auto& r : basis.representatives())
        max_kappa = std::max(max_kappa, kscale * std::sqrt(double(r.norm2())));
    const double c0 = basis.coeff_scale();
    const double scale = 4.0 * vol * max_kappa * c0 * c0 * c0;
    const double drop = 1e-15 * scale;

    // dense representative lookup over the bounding cube of the basis ball
    int radius = 0;
    for (const auto& r : basis.representatives()) radius = std::max(radius, r.linf());
    const int side = 2 * radius + 1;
    std::vector<int> rep_base(std::size_t(side) * side * side, -1);
    auto cube_index = [&](const WaveVector& k) -> long {
        if (k.linf() > radius) return -1;
        return (long(k.k1 + radius) * side + (k.k2 + radius)) * side + (k.k3 + radius);
    };
    for (const auto& r : basis.representatives()) {
        int base = basis.rep_base_index(r);
        rep_base[cube_index(r)] = base;
        rep_base[cube_index(-r)] = base;
    }

    TrilinearTensor tensor;
    tensor.n = n;
    std::complex<double> acc[16];
    int acc_k[16];
    for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
            int nacc = 0;
            for (const Mode& pm : modes[i])
                for (const Mode& qm : modes[m]) {
                    WaveVector s = pm.k + qm.k;
                    if (s.is_zero()) continue;
                    long ci = cube_index(s);
                    int base = ci < 0 ? -1 : rep_base[ci];
                    if (base < 0) continue;
                    Vec3 kap_q{kscale * qm.k.k1, kscale * qm.k.k2, kscale * qm.k.k3};
                    std::complex<double> f1 =
                        std::complex<double>(0.0, 1.0) * dot(pm.c, kap_q);
                    WaveVector r = -s;
                    for (int e = base; e < base + 4; ++e) {
                        const Mode& em = modes[e][0].k == r ? modes[e][0] : modes[e][1];
                        std::complex<double> term = vol * f1 * dot(qm.c, em.c);
                        int slot = -1;
                        for (int s2 = 0; s2 < nacc; ++s2)
                            if (acc_k[s2] == e) slot = s2;
                        if (slot < 0) {
                            slot = nacc++;
                            acc_k[slot] = e;
                            acc[slot] = 0.0;
                        }
                        acc[slot] += term;
                    }
                }
            for (int s2 = 0; s2 < nacc; ++s2) {
                double v = acc[s2].real();
                if (std::abs(v) > drop)
                    tensor.entries.push_back({i, m, acc_k[s2], v});
            }
        }
    }
    return tensor;
}

}  // namespace nsgal
