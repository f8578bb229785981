#include "doctest.h"
#include "test_util.hpp"

using namespace sqgci;
using namespace testutil;

TEST_CASE("fractional Laplacian") {
    TorusGrid g(64);
    auto c1 = 0.5 * (ScalarField::mode(g, 1, 0, 1.0) + ScalarField::mode(g, -1, 0, 1.0));
    CHECK((fractional_laplacian(c1, 1.0) - c1).max_abs_coeff() < 1e-15);
    auto c34 = 0.5 * (ScalarField::mode(g, 3, 4, 1.0) + ScalarField::mode(g, -3, -4, 1.0));
    CHECK((fractional_laplacian(c34, 0.5) - std::sqrt(5.0) * c34).max_abs_coeff() < 1e-15);
    std::mt19937_64 rng(11);
    auto f = random_field(g, 20, rng);
    CHECK((fractional_laplacian(fractional_laplacian(f, 1.0), -1.0) - f).max_abs_coeff() <= 1e-13 * f.max_abs_coeff());
    CHECK((fractional_laplacian(fractional_laplacian(f, 0.3), 0.7) - fractional_laplacian(f, 1.0)).max_abs_coeff() <=
          1e-12 * fractional_laplacian(f, 1.0).max_abs_coeff());
    CHECK_THROWS_AS(fractional_laplacian(random_field(g, 5, rng, false), -1.0), PreconditionError);
}

TEST_CASE("Riesz perp") {
    TorusGrid g(32);
    auto c1 = 0.5 * (ScalarField::mode(g, 1, 0, 1.0) + ScalarField::mode(g, -1, 0, 1.0));
    auto u = riesz_perp(c1);
    auto u1 = u[0].to_physical(), u2 = u[1].to_physical();
    for (int a = 0; a < g.n; ++a) {
        CHECK(std::abs(u1[a * g.n + 2]) < 1e-15);
        CHECK(std::abs(u2[a * g.n + 2] + std::sin(g.x(a))) < 1e-14);
    }
    std::mt19937_64 rng(12);
    auto th = random_field(g, 10, rng);
    CHECK(divergence(riesz_perp(th)).max_abs_coeff() <= 1e-13 * th.max_abs_coeff());
    // for div-free v: u = Lambda v, theta = -perp_div v satisfies u = R^perp theta
    auto v = random_div_free(g, 10, rng);
    auto uu = fractional_laplacian(v, 1.0);
    auto rp = riesz_perp(-1.0 * perp_divergence(v));
    CHECK((uu - rp).max_abs_coeff() <= 1e-13 * uu.max_abs_coeff());
}

TEST_CASE("Leray projection") {
    TorusGrid g(32);
    std::mt19937_64 rng(13);
    auto phi = random_field(g, 10, rng);
    CHECK(leray_project(grad(phi)).max_abs_coeff() <= 1e-14 * grad(phi).max_abs_coeff());
    auto u = random_div_free(g, 10, rng);
    CHECK((leray_project(u) - u).max_abs_coeff() <= 1e-14 * u.max_abs_coeff());
    auto f = random_vector(g, 10, rng);
    auto p = leray_project(f);
    CHECK((leray_project(p) - p).max_abs_coeff() <= 1e-13 * p.max_abs_coeff());
    CHECK(p.divergence_defect() <= 1e-12);
}

TEST_CASE("inverse divergence") {
    TorusGrid g(64);
    Vec2 k{0.6, 0.8};
    double lam = 10;
    auto f = VectorField(ScalarField::mode(g, 6, 8, cplx(0, -0.8)), ScalarField::mode(g, 6, 8, cplx(0, 0.6)));
    auto B = inverse_divergence(f);
    Vec2 kp = k.perp();
    CHECK(std::abs(B.m11.coeff(6, 8) - (2 * k.x * kp.x) / lam) < 1e-15);
    CHECK(std::abs(B.m12.coeff(6, 8) - (k.y * kp.x + k.x * kp.y) / lam) < 1e-15);
    // (Bf)^{22} = -(Bf)^{11} matches the formula as well
    CHECK(std::abs(-B.m11.coeff(6, 8) - (2 * k.y * kp.y) / lam) < 1e-15);

    std::mt19937_64 rng(14);
    auto u = random_div_free(g, 20, rng);
    CHECK((divergence(inverse_divergence(u)) - u).max_abs_coeff() <= 1e-12 * u.max_abs_coeff());
    auto h = random_vector(g, 20, rng);
    h[0].coeff_ref(0, 0) = 2.0;
    auto expect = leray_project(h);
    expect[0].coeff_ref(0, 0) = 0.0;
    CHECK((divergence(inverse_divergence(h)) - expect).max_abs_coeff() <= 1e-12 * h.max_abs_coeff());
    auto phi = random_field(g, 20, rng);
    auto Bg = inverse_divergence(grad(phi));
    CHECK(std::max(Bg.m11.max_abs_coeff(), Bg.m12.max_abs_coeff()) <= 1e-14 * phi.max_abs_coeff());
}

TEST_CASE("frequency localizer") {
    TorusGrid g(64);
    Vec2 k{0.6, 0.8};
    double lam = 20;
    auto b = VectorField(ScalarField::mode(g, 12, 16, cplx(0, -0.8)), ScalarField::mode(g, 12, 16, cplx(0, 0.6)));
    CHECK((wave_localizer(k, lam, b) - b).max_abs_coeff() < 1e-15);
    auto far = ScalarField::mode(g, 12, 12, 1.0);  // distance 4 > lam/8
    CHECK(freq_localizer(k, lam, far).max_abs_coeff() == 0.0);
    // amplitude with support <= lam/16 passes unchanged
    ScalarField a(g, false);
    a.coeff_ref(12, 16) = 1.0;
    a.coeff_ref(13, 16) = 0.3;
    a.coeff_ref(12, 15) = 0.2;
    CHECK((freq_localizer(k, lam, a) - a).max_abs_coeff() < 1e-15);
    CHECK_THROWS_AS(freq_localizer(Vec2{1, 1}, lam, a), PreconditionError);
}

TEST_CASE("annular projector") {
    TorusGrid g(128);
    double lam = 16;
    auto m = ScalarField::mode(g, 16, 0, 1.0);
    CHECK((annular_projector(lam, m) - m).max_abs_coeff() == 0.0);
    auto low = ScalarField::mode(g, 0, 0, 1.0);
    CHECK(annular_projector(lam, low).max_abs_coeff() == 0.0);
    std::mt19937_64 rng(15);
    auto f = random_field(g, 3 * lam, rng, true, 3 * lam / 8);
    CHECK((annular_projector(lam, f) - f).max_abs_coeff() <= 1e-13 * f.max_abs_coeff());
}

TEST_CASE("Calderon commutator") {
    TorusGrid g(64);
    std::mt19937_64 rng(16);
    auto v = random_field(g, 10, rng);
    auto c = ScalarField::mode(g, 0, 0, 2.5, true);
    CHECK(calderon_commutator(c, v).max_abs_coeff() < 1e-13);
    auto phi = ScalarField::mode(g, 2, -1, 1.0), w = ScalarField::mode(g, 3, 4, 1.0);
    auto cc = calderon_commutator(phi, w);
    CHECK(std::abs(cc.coeff(5, 3) - (std::hypot(5, 3) - 5.0)) < 1e-13);
    cc.coeff_ref(5, 3) = 0;
    CHECK(cc.max_abs_coeff() < 1e-13);
    // bounded ratio ||[L,phi]v||_2 / (||phi||_{W1,inf} ||v||_2)
    double worst = 0;
    for (int s = 0; s < 10; ++s) {
        auto p = random_field(g, 8, rng, false), q = random_field(g, 12, rng);
        double num = std::sqrt(coeff_energy(calderon_commutator(p, q)));
        double den = std::max(c_norm(p, 0), c_norm(p, 1)) * std::sqrt(coeff_energy(q));
        worst = std::max(worst, num / den);
    }
    CHECK(worst < 2.0);
}

TEST_CASE("2D magic identity") {
    TorusGrid g(64);
    std::mt19937_64 rng(17);
    for (int s = 0; s < 5; ++s) {
        auto f = random_div_free(g, 10, rng), h = random_vector(g, 10, rng);
        auto a = nonlinear_N(f, h), b = nonlinear_N_magic(f, h);
        CHECK((a - b).max_abs_coeff() <= 1e-11 * a.max_abs_coeff());
    }
}
