#include "doctest.h"
#include "test_util.hpp"
#include "sqgci/pseudo_product.hpp"

using namespace sqgci;
using namespace testutil;

namespace {

// random real field localized in |xi/lambda - k| <= radius (and its mirror)
ScalarField localized_pair_field(const TorusGrid& g, const Vec2& k, double lambda, double radius,
                                 std::mt19937_64& rng, bool plus) {
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField f(g, false);
    int h = g.n / 2;
    Vec2 c = plus ? k : -k;
    for (int k1 = -h + 1; k1 < h; ++k1)
        for (int k2 = -h + 1; k2 < h; ++k2)
            if (std::hypot(k1 / lambda - c.x, k2 / lambda - c.y) <= radius) f.coeff_ref(k1, k2) = cplx(N(rng), N(rng));
    return f;
}

double vec_err(const VectorField& a, const VectorField& b) { return c_norm(a - b, 0); }

}  // namespace

TEST_CASE("Riesz property of the symbol at mirror pairs is exact") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> U(-60, 60);
    int tested = 0;
    while (tested < 1000) {
        Vec2 eta{double(U(rng)), double(U(rng))};
        if (eta.norm() == 0.0) continue;
        auto s = s_symbol(-eta, eta);
        CHECK(s[0] == cplx(0.0, eta.x / eta.norm()));
        CHECK(s[1] == cplx(0.0, eta.y / eta.norm()));
        ++tested;
    }
}

TEST_CASE("symbol antisymmetry, homogeneity and closed form") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-50, 50);
    for (int i = 0; i < 500; ++i) {
        Vec2 z{U(rng), U(rng)}, e{U(rng), U(rng)};
        auto sz = s_symbol(e, e);
        CHECK(std::abs(sz[0]) + std::abs(sz[1]) < 1e-14);
        auto s = s_symbol(z, e);
        auto x = s_symbol_exact(z, e);
        CHECK(std::abs(s[0] - x[0]) + std::abs(s[1] - x[1]) < 1e-10);
        double t = std::exp(U(rng) / 10.0);
        auto st = s_symbol(z * t, e * t);
        CHECK(std::abs(s[0] - st[0]) + std::abs(s[1] - st[1]) < 1e-12);
        // s^m(zeta, eta) at eta = 0 is -i zeta^m/|zeta|
        auto s0 = s_symbol(z, Vec2{});
        CHECK(std::abs(s0[0] - cplx(0, -z.x / z.norm())) < 1e-14);
    }
    // colinear crossing: exact principal-value split
    auto c = s_symbol(Vec2{3, 0}, Vec2{1, 0});
    auto ce = s_symbol_exact(Vec2{3, 0}, Vec2{1, 0});
    CHECK(std::abs(c[0] - ce[0]) < 1e-15);
    CHECK(std::abs(c[0] - cplx(0, -0.5)) < 1e-15);
    CHECK_THROWS_AS(s_symbol(Vec2{}, Vec2{}), PreconditionError);
}

TEST_CASE("symbol against a refined trapezoid oracle") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> U(-20, 20);
    for (int i = 0; i < 5; ++i) {
        Vec2 z{double(U(rng)), double(U(rng))}, e{double(U(rng)) + 0.5, double(U(rng))};
        auto s = s_symbol(z, e);
        auto t = s_symbol_trapezoid(z, e, 1000001);
        CHECK(std::abs(s[0] - t[0]) + std::abs(s[1] - t[1]) < 1e-9);
    }
}

TEST_CASE("pseudo-product single-mode reduction and mirror modes") {
    TorusGrid g(32);
    std::mt19937_64 rng(6);
    ScalarField f = random_field(g, 6, rng);
    ScalarField e = ScalarField::mode(g, 3, -2, cplx(1.0, 0.0));
    auto S = pseudo_product(f, e);
    Vec2 q{3, -2};
    for (int k1 = -6; k1 <= 6; ++k1)
        for (int k2 = -6; k2 <= 6; ++k2) {
            if (f.coeff(k1, k2) == cplx{}) continue;
            auto s = s_symbol_exact(Vec2{double(k1), double(k2)}, q);
            for (int m = 0; m < 2; ++m) CHECK(std::abs(S[m].coeff(k1 + 3, k2 - 2) - s[m] * f.coeff(k1, k2)) < 1e-12);
        }
    // mirror modes reproduce the Riesz symbol on the zero mode
    ScalarField a = ScalarField::mode(g, -4, 1, cplx(2.0, 1.0));
    ScalarField b = ScalarField::mode(g, 4, -1, cplx(0.5, -1.0));
    auto M = pseudo_product(a, b);
    double r = std::hypot(4.0, 1.0);
    CHECK(std::abs(M[0].coeff(0, 0) - cplx(0, 4.0 / r) * cplx(2.0, 1.0) * cplx(0.5, -1.0)) < 1e-15);
    CHECK(std::abs(M[1].coeff(0, 0) - cplx(0, -1.0 / r) * cplx(2.0, 1.0) * cplx(0.5, -1.0)) < 1e-15);
    auto Z = pseudo_product(ScalarField(g), f);
    CHECK(Z[0].is_zero());
    CHECK(Z[1].is_zero());
    // real inputs give a real (Hermitian) output
    ScalarField h = random_field(g, 5, rng);
    auto R = pseudo_product(f, h);
    CHECK(R[0].hermitian_defect() < 1e-13);
    PseudoProductOptions tight;
    tight.budget = 10;
    CHECK_THROWS_AS(pseudo_product(f, h, tight), ResolutionError);
}

TEST_CASE("T symmetrization and two-mode zero mode") {
    TorusGrid g(32);
    std::mt19937_64 rng(7);
    ScalarField t = random_field(g, 7, rng);
    VectorField T = nonlinear_T(t, t);
    VectorField Rt = riesz(t);
    VectorField ref(dealiased_product(Rt[0], t), dealiased_product(Rt[1], t));
    CHECK(vec_err(T, ref) < 1e-12 * c_norm(ref, 0));
    ScalarField p = ScalarField::mode(g, 3, 1, cplx(1.0, 0.0)), m = ScalarField::mode(g, -3, -1, cplx(1.0, 0.0));
    VectorField T2 = nonlinear_T(p, m);
    CHECK(std::abs(T2[0].coeff(0, 0)) < 1e-15);
    CHECK(std::abs(T2[1].coeff(0, 0)) < 1e-15);
}

TEST_CASE("T gradient plus divergence decomposition") {
    TorusGrid g(128);
    std::mt19937_64 rng(8);
    double lambda = 40.0;
    for (int trial = 0; trial < 3; ++trial) {
        const Vec2 ks[3] = {{1, 0}, {0.6, 0.8}, {-0.8, 0.6}};
        Vec2 k = ks[trial];
        ScalarField a = localized_pair_field(g, k, lambda, 0.125, rng, true);
        ScalarField b = localized_pair_field(g, k, lambda, 0.125, rng, false);
        VectorField T = nonlinear_T(a, b);
        auto D = t_decomposition(a, b);
        double scale = c_norm(T, 0);
        CHECK(vec_err(T, D.sum()) <= 1e-8 * scale);
    }
    // general band-limited mean-zero pair
    ScalarField a = random_field(g, 12, rng), b = random_field(g, 12, rng);
    auto D = t_decomposition(a, b);
    VectorField T = nonlinear_T(a, b);
    CHECK(vec_err(T, D.sum()) <= 1e-8 * c_norm(T, 0));
}

TEST_CASE("decomposition residual converges under r-quadrature refinement") {
    TorusGrid g(64);
    std::mt19937_64 rng(9);
    Vec2 k{0.6, 0.8};
    double lambda = 20.0;
    ScalarField a = localized_pair_field(g, k, lambda, 0.125, rng, true);
    ScalarField b = localized_pair_field(g, k, lambda, 0.125, rng, false);
    VectorField T = nonlinear_T(a, b);
    double scale = c_norm(T, 0);
    std::vector<double> res;
    for (int nodes : {1, 2, 4}) {
        PseudoProductOptions o;
        o.quad.nodes = nodes;
        res.push_back(vec_err(T, t_decomposition(a, b, o).sum()) / scale);
    }
    MESSAGE("residuals " << res[0] << " " << res[1] << " " << res[2]);
    CHECK(res[0] / res[1] >= 4.0);
    CHECK(res[1] / res[2] >= 4.0);
}

TEST_CASE("oscillation matrix principal part for constant amplitudes") {
    TorusGrid g(64);
    double lambda = 20.0, amp = 0.7;
    for (const Vec2& k : {Vec2{1, 0}, Vec2{0.6, 0.8}, Vec2{0.6, -0.8}}) {
        int k1 = int(std::lround(lambda * k.x)), k2 = int(std::lround(lambda * k.y));
        // vorticity of a Beltrami wave a b_k(lambda x): -lambda a e^{i lambda k.x}
        ScalarField tp = ScalarField::mode(g, k1, k2, cplx(-lambda * amp, 0.0));
        ScalarField tm = ScalarField::mode(g, -k1, -k2, cplx(-lambda * amp, 0.0));
        ScalarField a2(g);
        a2.coeff_ref(0, 0) = amp * amp;
        auto Q = oscillation_Q(k, lambda, tp, tm, a2);
        CHECK(Q.remainder.c0_norm() <= 1e-8 * Q.principal.c0_norm());
        CHECK(Q.principal.c0_norm() > 0.0);
        auto Z = oscillation_Q(k, lambda, ScalarField(g, false), ScalarField(g, false), ScalarField(g));
        CHECK(Z.full.c0_norm() == 0.0);
        CHECK(Z.principal.c0_norm() == 0.0);
    }
    ScalarField bad = ScalarField::mode(g, 3, 0, 1.0);
    CHECK_THROWS_AS(oscillation_Q(Vec2{1, 0}, lambda, bad, bad, ScalarField(g)), PreconditionError);
}

TEST_CASE("shifted multiplier support and origin value") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    Vec2 k{0.6, 0.8};
    for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l)
            for (double r : {0.0, 0.3, 1.0}) CHECK(std::abs(shifted_multiplier(m, l, k, r, {}, {}) + k[m - 1] * k[l - 1]) < 1e-15);
    for (int i = 0; i < 2000; ++i) {
        Vec2 a{U(rng), U(rng)}, b{U(rng), U(rng)};
        if (a.norm() < 0.125 && b.norm() < 0.125) continue;
        CHECK(shifted_multiplier(1, 2, k, 0.4, a, b) == 0.0);
    }
    double bound = shifted_multiplier_gradient_bound(k, 7);
    CHECK(std::isfinite(bound));
    CHECK(bound > 0.0);
}
