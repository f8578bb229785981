#include "doctest.h"
#include "test_util.hpp"

using namespace sqgci;
using namespace testutil;

TEST_CASE("transform round trip") {
    TorusGrid g(32);
    std::vector<double> one(g.size(), 1.0);
    auto f = ScalarField::from_physical(g, one);
    CHECK(std::abs(f.coeff(0, 0) - 1.0) < 1e-15);
    f.coeff_ref(0, 0) = 0.0;
    CHECK(f.max_abs_coeff() < 1e-15);

    std::vector<double> c3(g.size());
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) c3[a * g.n + b] = std::cos(3 * g.x(a));
    auto h = ScalarField::from_physical(g, c3);
    CHECK(std::abs(h.coeff(3, 0) - 0.5) < 1e-14);
    CHECK(std::abs(h.coeff(-3, 0) - 0.5) < 1e-14);
    h.coeff_ref(3, 0) = 0.0;
    h.coeff_ref(-3, 0) = 0.0;
    CHECK(h.max_abs_coeff() < 1e-14);

    std::mt19937_64 rng(1);
    auto r = random_field(g, 10, rng, false);
    auto phys = r.to_physical();
    auto back = ScalarField::from_physical(g, phys).to_physical();
    double err = 0, mx = 0;
    for (std::size_t i = 0; i < phys.size(); ++i) {
        err = std::max(err, std::abs(back[i] - phys[i]));
        mx = std::max(mx, std::abs(phys[i]));
    }
    CHECK(err / mx <= 1e-13);
    CHECK(r.hermitian_defect() == 0.0);

    std::vector<double> bad(g.size(), 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(ScalarField::from_physical(g, bad), PreconditionError);
    CHECK_THROWS_AS(TorusGrid(15), PreconditionError);
}

TEST_CASE("coefficients evaluate at grid points") {
    TorusGrid g(16);
    std::mt19937_64 rng(2);
    auto f = random_field(g, 5, rng, false);
    auto phys = f.to_physical();
    for (int a : {0, 3, 7})
        for (int b : {1, 9, 15}) CHECK(std::abs(f.eval(g.x(a), g.x(b)) - phys[a * g.n + b]) < 1e-12);
}

TEST_CASE("spectral derivative") {
    TorusGrid g(32);
    auto c1 = 0.5 * (ScalarField::mode(g, 1, 0, 1.0) + ScalarField::mode(g, -1, 0, 1.0));
    auto d = spectral_derivative(c1, 1);
    auto phys = d.to_physical();
    for (int a = 0; a < g.n; ++a) CHECK(std::abs(phys[a * g.n + 5] + std::sin(g.x(a))) < 1e-14);
    CHECK(spectral_derivative(c1, 2).max_abs_coeff() == 0.0);

    std::mt19937_64 rng(3);
    auto phi = random_field(g, 12, rng);
    auto lhs = perp_divergence(perp_grad(phi));
    auto rhs = apply_multiplier(phi, [](int k1, int k2) { return -double(k1 * k1 + k2 * k2); });
    CHECK((lhs - rhs).max_abs_coeff() <= 1e-12 * rhs.max_abs_coeff());
}

TEST_CASE("dealiased product") {
    TorusGrid g(32);
    auto cx1 = 0.5 * (ScalarField::mode(g, 1, 0, 1.0) + ScalarField::mode(g, -1, 0, 1.0));
    auto cx2 = 0.5 * (ScalarField::mode(g, 0, 1, 1.0) + ScalarField::mode(g, 0, -1, 1.0));
    auto p = dealiased_product(cx1, cx2);
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) CHECK(std::abs(p.coeff(s1, s2) - 0.25) < 1e-15);
    std::mt19937_64 rng(4);
    auto f = random_field(g, 10, rng, false);
    auto one = ScalarField::mode(g, 0, 0, 1.0, true);
    CHECK((dealiased_product(f, one) - f).max_abs_coeff() < 1e-14 * f.max_abs_coeff());

    // supports inside radius n/6: compare with direct convolution
    auto a = random_field(g, g.n / 6.0, rng, false), b = random_field(g, g.n / 6.0, rng, false);
    auto prod = dealiased_product(a, b);
    ScalarField conv(g);
    int R = g.n / 6;
    for (int p1 = -R; p1 <= R; ++p1)
        for (int p2 = -R; p2 <= R; ++p2)
            for (int q1 = -R; q1 <= R; ++q1)
                for (int q2 = -R; q2 <= R; ++q2) {
                    cplx c = a.coeff(p1, p2) * b.coeff(q1, q2);
                    if (c != cplx{}) conv.coeff_ref(p1 + q1, p2 + q2) += c;
                }
    CHECK((prod - conv).max_abs_coeff() <= 1e-13 * conv.max_abs_coeff());
}

TEST_CASE("C^N norms") {
    TorusGrid g(128);
    auto c1 = 0.5 * (ScalarField::mode(g, 1, 0, 1.0) + ScalarField::mode(g, -1, 0, 1.0));
    CHECK(std::abs(c_norm(c1, 0) - 1.0) < 1e-14);
    auto c5 = 0.5 * (ScalarField::mode(g, 5, 0, 1.0) + ScalarField::mode(g, -5, 0, 1.0));
    CHECK(std::abs(c_norm(c5, 1) - 5.0) < 1e-3);
    CHECK(c_norm(ScalarField(g), 3) == 0.0);
    CHECK(besov_norm(c5, 0.5) > 0.0);
}

TEST_CASE("Plancherel and mean-zero preservation") {
    TorusGrid g(64);
    std::mt19937_64 rng(5);
    auto f = random_field(g, 20, rng, false);
    CHECK(std::abs(grid_mean_square(f) - coeff_energy(f)) <= 1e-12 * coeff_energy(f));
    auto z = random_field(g, 20, rng, true);
    CHECK(std::abs(spectral_derivative(z, 2).mean()) == 0.0);
    CHECK(std::abs(dealiased_product(z, ScalarField::mode(g, 0, 0, 1.0)).mean()) < 1e-14);
}

TEST_CASE("resampling between grids") {
    TorusGrid g(32), G(96);
    std::mt19937_64 rng(6);
    auto f = random_field(g, 10, rng, false);
    auto F = resample(f, G);
    CHECK(std::abs(F.eval(0.3, -1.1) - f.eval(0.3, -1.1)) < 1e-12);
    CHECK((resample(F, g) - f).max_abs_coeff() == 0.0);
    auto s = sample_on(f, 96);
    auto back = from_samples(s, 96, g, true);
    CHECK((back - f).max_abs_coeff() < 1e-14);
}
