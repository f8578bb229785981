#include "doctest.h"
#include "test_util.hpp"
#include "sqgci/waves.hpp"

using namespace sqgci;
using namespace testutil;

TEST_CASE("direction set invariants") {
    for (int j : {1, 2}) {
        const auto& s = direction_set(j);
        auto all = s.all();
        for (const auto& k : all) {
            CHECK(std::abs(k.norm() - 1.0) < 1e-15);
            CHECK(std::abs(5 * k.x - std::round(5 * k.x)) < 1e-12);
            CHECK(std::abs(5 * k.y - std::round(5 * k.y)) < 1e-12);
            bool neg = false;
            for (const auto& m : all) {
                if ((k + m).norm() < 1e-14) neg = true;
                else CHECK((k + m).norm() >= 0.5);
            }
            CHECK(neg);
            for (const auto& m : direction_set(3 - j).all()) CHECK((k - m).norm() > 1e-3);
        }
        CHECK(std::abs(s.solve_determinant()) > 0.1);
    }
}

TEST_CASE("gamma coefficients at the identity") {
    auto g2 = direction_set(1).gamma_squared(Sym2::identity());
    CHECK(std::abs(g2[0] - 7.0 / 16) < 1e-12);
    CHECK(std::abs(g2[1] - 25.0 / 32) < 1e-12);
    CHECK(std::abs(g2[2] - 25.0 / 32) < 1e-12);
    auto h2 = direction_set(2).gamma_squared(Sym2::identity());
    for (int i = 0; i < 3; ++i) CHECK(std::abs(h2[i] - g2[i]) < 1e-12);
    CHECK(std::abs(g2[0] + g2[1] + g2[2] - 2.0) < 1e-14);
}

TEST_CASE("gamma reconstruction and epsilon_gamma") {
    double eps = direction_set(1).epsilon_gamma();
    CHECK(eps > 0.05);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int s = 0; s < 1000; ++s) {
        Sym2 e{U(rng), U(rng), U(rng)};
        e = e * (eps * std::abs(U(rng)) / e.op_norm());
        Sym2 R = Sym2::identity() + e;
        for (int j : {1, 2}) {
            const auto& ds = direction_set(j);
            auto g = ds.gamma_coefficients(R);
            Sym2 back = ds.reconstruct({g[0] * g[0], g[1] * g[1], g[2] * g[2]});
            CHECK((back - R).op_norm() <= 1e-12);
        }
    }
    for (int s = 0; s < 100; ++s) {
        Sym2 e{U(rng), U(rng), U(rng)};
        e = e * (1.0 / e.op_norm());
        for (int j : {1, 2}) {
            auto g = direction_set(j).gamma_squared(Sym2::identity() + e * (0.9 * eps));
            auto h = direction_set(j).gamma_squared(Sym2::identity() + e * (0.45 * eps));
            for (int i = 0; i < 3; ++i) {
                CHECK(g[i] > 0);
                CHECK(h[i] > 0);
            }
        }
    }
    CHECK_THROWS_AS(direction_set(1).gamma_coefficients(Sym2{-1, 0, 1}), PreconditionError);
}

TEST_CASE("Beltrami pair") {
    TorusGrid g(32);
    auto p = beltrami_pair(Vec2{1, 0}, 5, g);
    CHECK(std::abs(p.b[1].coeff(5, 0) - cplx(0, 1)) < 1e-15);
    CHECK(p.b[0].max_abs_coeff() < 1e-15);
    Vec2 k{0.6, -0.8};
    auto q = beltrami_pair(k, 10, g);
    CHECK((fractional_laplacian(q.b, 1.0) - 10.0 * q.b).max_abs_coeff() < 1e-13);
    CHECK((-1.0 * perp_divergence(q.b) - 10.0 * q.c).max_abs_coeff() < 1e-13);
    CHECK_THROWS_AS(beltrami_pair(Vec2{0.6, 0.8}, 3, g), PreconditionError);
}

TEST_CASE("Beltrami identity") {
    TorusGrid g(64);
    std::mt19937_64 rng(22);
    std::normal_distribution<double> N(0, 1);
    for (int j : {1, 2}) {
        std::vector<cplx> a(6);
        for (int i = 0; i < 3; ++i) {
            a[i] = cplx(N(rng), N(rng));
            a[i + 3] = std::conj(a[i]);
        }
        auto r = beltrami_identity_check(direction_set(j), a, 5, g);
        CHECK(r.divergence_form <= 1e-12);
        CHECK(r.zero_mode <= 1e-12);
        std::vector<cplx> single(6, 0.0);
        single[1] = cplx(0.3, -0.7);
        single[4] = std::conj(single[1]);
        r = beltrami_identity_check(direction_set(j), single, 10, g);
        CHECK(r.divergence_form <= 1e-12);
        CHECK(r.zero_mode <= 1e-12);
    }
    auto z = beltrami_identity_check(direction_set(1), std::vector<cplx>(6, 0.0), 5, g);
    CHECK(z.divergence_form == 0.0);
}
