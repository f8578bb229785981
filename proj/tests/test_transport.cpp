#include "doctest.h"
#include "test_util.hpp"
#include "sqgci/scheme.hpp"
#include "sqgci/transport.hpp"

using namespace sqgci;
using namespace testutil;

TEST_CASE("tau step") {
    SchemeParams p;
    double d0 = 25.0, d1 = 25.0 * std::pow(5.0, -1.2);
    CHECK(std::abs(p.delta(0) - d0) < 1e-12);
    CHECK(std::abs(p.delta(1) - d1) < 1e-12);
    CHECK(std::abs(1.0 / p.tau_next(0) - 5.0 * std::pow(d0, 0.25) * std::pow(d1, 0.25)) < 1e-12);
    for (int q = 0; q < 3; ++q)
        CHECK(std::abs(p.tau_next(q + 1) / p.tau_next(q) - std::pow(5.0, -(2.0 - p.beta))) < 1e-12);
    SchemeParams b;
    b.beta = 0.7999;
    CHECK(std::abs(b.cfl_scale() - std::pow(5.0, -1.0 + 0.39995)) < 1e-12);
}

TEST_CASE("time partition") {
    TimePartition P(0.07);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(-3, 5);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        double t = U(rng);
        worst = std::max(worst, std::abs(P.partition_sum(t) - 1.0));
        for (long j : P.active(t)) {
            CHECK(t > (j + 0.5) * P.tau());
            CHECK(t < (j + 4.0) * P.tau());
        }
        CHECK(P.active(t).size() <= 2);
    }
    CHECK(worst <= 1e-12);
    // derivative vs central differences
    for (double s : {0.7, 1.2, 1.5, 1.9, 2.3}) {
        double h = 1e-6;
        double fd = (master_cutoff(s + h) - master_cutoff(s - h)) / (2 * h);
        CHECK(std::abs(fd - master_cutoff_derivative(s)) < 1e-7);
    }
    CHECK(master_cutoff(0.5) == 0.0);
    CHECK(master_cutoff(2.5) == 0.0);
    CHECK(std::abs(master_cutoff(1.5) - 1.0) < 1e-15);
}

TEST_CASE("point evaluation") {
    TorusGrid g(64);
    std::mt19937_64 rng(32);
    auto f = random_field(g, 20, rng);
    PointEvaluator lag(f, PointEvaluator::Method::Lagrange), trig(f, PointEvaluator::Method::Trigonometric);
    std::uniform_real_distribution<double> U(-4, 4);
    double scale = c_norm(f, 0), worst = 0, worst_t = 0;
    for (int i = 0; i < 200; ++i) {
        double a = U(rng), b = U(rng);
        cplx ex = f.eval(a, b);
        worst = std::max(worst, std::abs(lag.at(a, b) - ex));
        worst_t = std::max(worst_t, std::abs(trig.at(a, b) - ex));
    }
    CHECK(worst / scale <= 1e-6);
    CHECK(worst_t / scale <= 1e-12);
    auto small = random_field(g, 4, rng);
    CHECK(PointEvaluator(small).method() == PointEvaluator::Method::Trigonometric);
}

TEST_CASE("flow map closed forms") {
    TorusGrid g(32);
    SteadyVelocity zero{VectorField(g)};
    auto id = solve_flow_map(zero, 0.0, 0.3, g);
    for (double d : id.d1) CHECK(d == 0.0);

    VectorField c(g);
    c[0].coeff_ref(0, 0) = 0.7;
    SteadyVelocity cu(c);
    auto fm = solve_flow_map(cu, 0.1, 0.5, g, FlowOptions{8});
    for (std::size_t i = 0; i < fm.d1.size(); ++i) {
        CHECK(std::abs(fm.d1[i] + 0.7 * 0.4) < 1e-14);
        CHECK(std::abs(fm.d2[i]) < 1e-15);
    }

    // shear (sin x2, 0)
    VectorField s(g);
    s[0].coeff_ref(0, 1) = cplx(0, -0.5);
    s[0].coeff_ref(0, -1) = cplx(0, 0.5);
    SteadyVelocity su(s);
    double tau = 0.05;
    FlowOptions o;
    o.substeps = 64;
    auto sh = solve_flow_map(su, 2 * tau, 2 * tau + 3.5 * tau, g, o);
    double err = 0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            std::size_t i = a * g.n + b;
            err = std::max(err, std::abs(sh.d1[i] + 3.5 * tau * std::sin(g.x(b))));
            err = std::max(err, std::abs(sh.d2[i]));
        }
    CHECK(err <= 1e-8);
    auto psi0 = phase_deformation(solve_flow_map(su, 1.0, 1.0, g), Vec2{1, 0}, 5.0);
    for (auto z : psi0) CHECK(std::abs(z - 1.0) == 0.0);
}

TEST_CASE("flow map Jacobian, gradient bound and advection exactness") {
    TorusGrid g(48);
    std::mt19937_64 rng(33);
    auto u = random_div_free(g, 4, rng);
    u *= 1.0 / c_norm(u, 1);  // ||grad u|| = 1
    SteadyVelocity su(u);
    double tau = 0.1;
    auto fm = solve_flow_map(su, 0.0, 4 * tau, g);
    double drift = 0;
    for (double j : fm.jacobian()) drift = std::max(drift, std::abs(j - 1.0));
    CHECK(drift <= 1e-6);
    CHECK(fm.gradient_deviation() <= 1.5 * (std::exp(4 * tau * c_norm(u, 1)) - 1.0));

    auto phi = fm;
    auto base = StressField(random_field(g, 6, rng), random_field(g, 6, rng));
    auto R = transport_stress(base, phi);
    StressField Rj(ScalarField::from_physical(g, R.m11), ScalarField::from_physical(g, R.m12));
    std::vector<double> x1, x2;
    forward_characteristics(su, 0.0, 4 * tau, g, 64, x1, x2);
    std::vector<double> back;
    PointEvaluator(Rj.m11, PointEvaluator::Method::Trigonometric).eval_real(x1, x2, back);
    auto orig = base.m11.to_physical();
    double err = 0;
    for (std::size_t i = 0; i < back.size(); ++i) err = std::max(err, std::abs(back[i] - orig[i]));
    CHECK(err / c_norm(base.m11, 0) <= 1e-6);
}

TEST_CASE("CFL refusal") {
    TorusGrid g(32);
    std::mt19937_64 rng(34);
    auto u = random_div_free(g, 4, rng);
    u *= 10.0 / c_norm(u, 1);
    SteadyVelocity su(u);
    FlowOptions o;
    o.substeps = 1;
    bool thrown = false;
    try {
        solve_flow_map(su, 0.0, 1.0, g, o);
    } catch (const CflViolation& e) {
        thrown = true;
        CHECK(e.required_substeps >= 20);
    }
    CHECK(thrown);
}

TEST_CASE("material derivative") {
    TorusGrid g(32);
    std::mt19937_64 rng(35);
    auto gf = random_vector(g, 6, rng);
    VectorField zero(g);
    double h = 1e-3, t = 0.4;
    auto d = material_derivative((t - h) * gf, t * gf, (t + h) * gf, h, zero);
    CHECK((d - gf).max_abs_coeff() < 1e-11);
    auto dz = material_derivative(gf, gf, gf, h, zero);
    CHECK(dz.max_abs_coeff() == 0.0);
    // f(x, t) = g(x - c t) advected by constant (c, 0)
    double c = 0.8;
    VectorField u(g);
    u[0].coeff_ref(0, 0) = c;
    auto shift = [&](double tt) {
        auto s = [&](const ScalarField& f) {
            return apply_multiplier(f, [&](int k1, int) { return std::polar(1.0, -k1 * c * tt); });
        };
        return VectorField(s(gf[0]), s(gf[1]));
    };
    auto dm = material_derivative(shift(t - h), shift(t), shift(t + h), h, u);
    CHECK(c_norm(dm, 0) <= 1e-4 * c_norm(gf, 1));
    std::vector<VectorField> series{shift(0), shift(h), shift(2 * h)};
    auto r = material_derivative(series, 0, h, u);
    CHECK(r.one_sided);
    CHECK(!material_derivative(series, 1, h, u).one_sided);
}
