#include <catch2/catch_amalgamated.hpp>

#include "nsgal/convolve.hpp"
#include "nsgal/fft.hpp"
#include "nsgal/grid_oracle.hpp"
#include "nsgal/ops.hpp"
#include "test_helpers.hpp"

using namespace nsgal;
using nsgal::testutil::random_field;
using nsgal::testutil::taylor_green;

namespace {
const TorusSpec SPEC{2.0 * M_PI, 32};
}

TEST_CASE("torus spec validation") {
    CHECK_THROWS(TorusSpec{-1.0, 32}.validate());
    CHECK_THROWS(TorusSpec{1.0, 2}.validate());
    CHECK_THROWS(TorusSpec{1.0, 24}.validate());
    CHECK_NOTHROW(TorusSpec{1.0, 64}.validate());
}

TEST_CASE("polarizations orthogonal to k") {
    for (auto k : {WaveVector{1, 0, 0}, WaveVector{0, 0, 2}, WaveVector{3, -2, 1}}) {
        auto eps = polarizations(k);
        for (const auto& e : eps) {
            CHECK(std::abs(dot(e, k.as_vec())) < 1e-13 * norm(k.as_vec()));
            CHECK(norm(e) == Catch::Approx(1.0).epsilon(1e-14));
        }
        CHECK(std::abs(dot(eps[0], eps[1])) < 1e-14);
    }
    CHECK_THROWS(polarizations(WaveVector{0, 0, 0}));
}

TEST_CASE("leray projection examples and invariants") {
    SpectralField v(SPEC);
    // pure gradient mode annihilated
    v.set_pair(WaveVector{1, 0, 0}, CVec3{1.0, 0.0, 0.0});
    SpectralField p = leray_project(v);
    CHECK(std::sqrt(abs2(p.coeff(WaveVector{1, 0, 0}))) < 1e-15);

    // already divergence-free mode passes through
    SpectralField w(SPEC);
    w.set_pair(WaveVector{1, 0, 0}, CVec3{0.0, 1.0, 0.0});
    SpectralField pw = leray_project(w);
    CHECK(std::sqrt(abs2(pw.coeff(WaveVector{1, 0, 0}) - CVec3{0.0, 1.0, 0.0})) < 1e-15);

    // hand-evaluated projector on k=(1,1,0), u=(1,0,0) -> (1/2,-1/2,0)
    SpectralField z(SPEC);
    z.set_pair(WaveVector{1, 1, 0}, CVec3{1.0, 0.0, 0.0});
    CVec3 got = leray_project(z).coeff(WaveVector{1, 1, 0});
    CHECK(got[0].real() == Catch::Approx(0.5).margin(1e-14));
    CHECK(got[1].real() == Catch::Approx(-0.5).margin(1e-14));
    CHECK(std::abs(got[2]) < 1e-15);

    // idempotence, contraction, orthogonality on random fields
    for (std::uint64_t seed : {7u, 8u, 9u, 10u}) {
        SpectralField f = random_field(SPEC, 4, 20, seed, /*solenoidal=*/false);
        SpectralField pf = leray_project(f);
        SpectralField ppf = leray_project(pf);
        CHECK(l2_norm(ppf - pf) <= 1e-13 * l2_norm(pf));
        CHECK(l2_norm(pf) <= l2_norm(f) * (1.0 + 1e-14));
        CHECK(pf.is_solenoidal(1e-12));
        CHECK(pf.is_hermitian());
        SpectralField grad = f - pf;
        CHECK(std::abs(inner_product(pf, grad)) <= 1e-12 * l2_norm2(f));
    }
}

TEST_CASE("gradient decomposition recomposes with Pythagoras") {
    SpectralField f = random_field(SPEC, 4, 20, 42, /*solenoidal=*/false);
    auto [sol, grad] = gradient_decompose(f);
    SpectralField sum = sol + grad;
    CHECK(l2_norm(sum - f) <= 1e-13 * l2_norm(f));
    CHECK(std::abs(l2_norm2(sol) + l2_norm2(grad) - l2_norm2(f)) <= 1e-12 * l2_norm2(f));

    SpectralField pure_grad(SPEC);
    pure_grad.set_pair(WaveVector{0, 0, 2}, CVec3{0.0, 0.0, 3.0});
    auto [s2, g2] = gradient_decompose(pure_grad);
    CHECK(l2_norm(s2) < 1e-14);
    CHECK(l2_norm(g2 - pure_grad) < 1e-14);

    SpectralField sol_only = random_field(SPEC, 3, 10, 5, /*solenoidal=*/true);
    auto [s3, g3] = gradient_decompose(sol_only);
    CHECK(l2_norm(g3) <= 1e-12 * l2_norm(sol_only));
}

TEST_CASE("stokes solve per-mode division") {
    // unit eigenvalue: solution equals datum
    SpectralField f(SPEC);
    f.set_pair(WaveVector{1, 0, 0}, CVec3{0.0, 1.0, 0.0});
    SpectralField v = stokes_solve(f);
    CHECK(l2_norm(v - f) < 1e-14);

    // pure gradient datum gives zero velocity
    SpectralField g(SPEC);
    g.set_pair(WaveVector{0, 2, 0}, CVec3{0.0, 5.0, 0.0});
    CHECK(l2_norm(stokes_solve(g)) < 1e-14);

    // two-mode solenoidal: per-mode division by |kappa|^2,
    // and -Delta v + grad p = f with grad p = f - Pf
    SpectralField h = random_field(SPEC, 3, 2, 77, /*solenoidal=*/true);
    SpectralField vh = stokes_solve(h);
    for (const auto& [k, c] : h.modes()) {
        CVec3 expect = std::complex<double>(1.0 / k.kappa2(SPEC.L)) * c;
        CHECK(std::sqrt(abs2(vh.coeff(k) - expect)) < 1e-13 * std::sqrt(abs2(c)));
    }
    SpectralField recon = -1.0 * laplacian(vh) + (h - leray_project(h));
    CHECK(l2_norm(recon - h) <= 1e-13 * l2_norm(h));
    // on the torus the H^2 bound holds with constant 1
    CHECK(laplacian_norm2(vh) <= l2_norm2(h) * (1.0 + 1e-12));

    SpectralField with_mean(SPEC);
    with_mean.set(WaveVector{0, 0, 0}, CVec3{1.0, 0.0, 0.0});
    CHECK_THROWS(stokes_solve(with_mean));
}

TEST_CASE("inner product and enstrophy closed forms") {
    double vol = std::pow(SPEC.L, 3);
    SpectralField a(SPEC);
    a.set_pair(WaveVector{1, 0, 0}, CVec3{0.0, 1.0, 0.0});
    // conjugate pair with |coef|=1 on each of the two modes
    CHECK(inner_product(a, a) == Catch::Approx(2.0 * vol).epsilon(1e-13));
    CHECK(enstrophy(a) == Catch::Approx(2.0 * vol).epsilon(1e-13));

    SpectralField b(SPEC);
    b.set_pair(WaveVector{0, 1, 0}, CVec3{1.0, 0.0, 0.0});
    CHECK(std::abs(inner_product(a, b)) < 1e-14);
    CHECK(inner_product(SpectralField(SPEC), a) == 0.0);
    CHECK(enstrophy(SpectralField(SPEC)) == 0.0);

    SpectralField scaled = 3.0 * a;
    CHECK(enstrophy(scaled) == Catch::Approx(9.0 * enstrophy(a)).epsilon(1e-13));

    SpectralField mismatched(TorusSpec{1.0, 32});
    CHECK_THROWS(inner_product(a, mismatched));
}

TEST_CASE("laplacian of solenoidal field stays solenoidal (c = 1)") {
    SpectralField v = random_field(SPEC, 4, 20, 11, /*solenoidal=*/true);
    SpectralField lap = laplacian(v);
    SpectralField plap = leray_project(lap);
    CHECK(l2_norm(plap - lap) <= 1e-12 * l2_norm(lap));
    CHECK(std::abs(l2_norm2(plap) - l2_norm2(lap)) <= 1e-12 * l2_norm2(lap));
}

TEST_CASE("grid transform round trip") {
    GridTransform tf(SPEC);
    SpectralField f = random_field(SPEC, 5, 30, 3, /*solenoidal=*/false);
    RealGridField g = tf.to_grid(f);
    SpectralField back = tf.from_grid(g, 6);
    back.prune(1e-13);
    CHECK(l2_norm(back - f) <= 1e-12 * l2_norm(f));
}

TEST_CASE("nonlinear grid oracle: trivial and closed-form cases") {
    SpectralField zero(SPEC);
    SpectralField v = random_field(SPEC, 3, 10, 21);
    CHECK(l2_norm(nonlinear_grid_oracle(zero, v)) < 1e-14);

    // u = (0, sin x, 0): u.grad u = 0 (no y-dependence)
    SpectralField sm = nsgal::testutil::single_mode(SPEC);
    CHECK(l2_norm(nonlinear_grid_oracle(sm, sm)) < 1e-13);

    // Taylor-Green: the advection term is a pure gradient
    SpectralField tg = taylor_green(SPEC);
    SpectralField adv = nonlinear_grid_oracle(tg, tg);
    CHECK(l2_norm(adv) > 1e-3);  // the term itself is nonzero
    CHECK(l2_norm(leray_project(adv)) <= 1e-10 * l2_norm(adv));

    // resolution guard
    SpectralField wide(SPEC);
    wide.set_pair(WaveVector{SPEC.G / 3, 0, 0}, CVec3{0.0, 1.0, 0.0});
    CHECK_THROWS(nonlinear_grid_oracle(wide, wide));
}

TEST_CASE("oracle agrees with exact spectral convolution") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        SpectralField u = random_field(SPEC, 3, 12, 100 + seed);
        SpectralField v = random_field(SPEC, 3, 12, 200 + seed, /*solenoidal=*/false);
        SpectralField conv = advect_spectral(u, v);
        SpectralField oracle = nonlinear_grid_oracle(u, v);
        double worst = 0.0;
        for (const auto& [k, c] : conv.modes()) {
            double d = std::sqrt(abs2(c - oracle.coeff(k)));
            worst = std::max(worst, d);
        }
        for (const auto& [k, c] : oracle.modes()) {
            double d = std::sqrt(abs2(c - conv.coeff(k)));
            worst = std::max(worst, d);
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("every operation preserves Hermitian symmetry") {
    SpectralField f = random_field(SPEC, 4, 16, 55, /*solenoidal=*/false);
    CHECK(leray_project(f).is_hermitian());
    CHECK(laplacian(f).is_hermitian());
    CHECK(advect_spectral(leray_project(f), f).is_hermitian());
    SpectralField nomean = f;
    nomean.drop_mean();
    CHECK(stokes_solve(nomean).is_hermitian());
}
