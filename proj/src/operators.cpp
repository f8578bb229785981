#include "sqgci/operators.hpp"

#include "sqgci/spectral.hpp"

namespace sqgci {

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

double localizer_bump(double r) { return 1.0 - smooth_step((r - 1.0 / 16.0) * 16.0); }

double annular_symbol(double r) {
    return smooth_step((r - 0.25) * 8.0) * (1.0 - smooth_step(r - 3.0));
}

namespace {
bool has_mean(const ScalarField& f) {
    double mx = f.max_abs_coeff();
    return std::abs(f.mean()) > 1e-13 * mx && mx > 0.0;
}
}  // namespace

ScalarField fractional_laplacian(const ScalarField& f, double s) {
    if (s < 0.0 && has_mean(f)) throw PreconditionError("fractional_laplacian: negative order needs a mean-zero field");
    int h = f.n() / 2;
    return apply_multiplier(f, [s, h](int k1, int k2) {
        if (k1 == 0 && k2 == 0) return s == 0.0 ? 1.0 : 0.0;
        if (k1 == -h || k2 == -h) return 0.0;
        return std::pow(double(k1 * k1 + k2 * k2), 0.5 * s);
    });
}

VectorField fractional_laplacian(const VectorField& f, double s) {
    VectorField r(fractional_laplacian(f[0], s), fractional_laplacian(f[1], s));
    r.div_free = f.div_free;
    return r;
}

ScalarField riesz(const ScalarField& f, int l) {
    int h = f.n() / 2;
    return apply_multiplier(f, [l, h](int k1, int k2) {
        if ((k1 == 0 && k2 == 0) || k1 == -h || k2 == -h) return cplx{};
        return cplx(0.0, (l == 1 ? k1 : k2) / std::hypot(k1, k2));
    });
}

VectorField riesz(const ScalarField& f) { return VectorField(riesz(f, 1), riesz(f, 2)); }

VectorField riesz_perp(const ScalarField& theta) {
    if (has_mean(theta)) throw PreconditionError("riesz_perp: theta must be mean-zero");
    VectorField u(-1.0 * riesz(theta, 2), riesz(theta, 1));
    u.div_free = true;
    return u;
}

VectorField leray_project(const VectorField& f) {
    const auto& g = f.grid();
    VectorField r(g, f[0].real() && f[1].real());
    int n = g.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::size_t i = static_cast<std::size_t>(a) * n + b;
            double k1 = g.freq(a), k2 = g.freq(b), kk = k1 * k1 + k2 * k2;
            cplx f1 = f[0].data()[i], f2 = f[1].data()[i];
            if (kk == 0.0) {
                r[0].data()[i] = f1;
                r[1].data()[i] = f2;
                continue;
            }
            cplx kf = (k1 * f1 + k2 * f2) / kk;
            r[0].data()[i] = f1 - k1 * kf;
            r[1].data()[i] = f2 - k2 * kf;
        }
    r.div_free = true;
    return r;
}

void inverse_divergence_symbol(double k1, double k2, cplx g1, cplx g2, cplx& b11, cplx& b12) {
    double kk = k1 * k1 + k2 * k2;
    const cplx mi(0.0, -1.0 / kk);
    b11 = mi * (2.0 * k1 * g1);
    b12 = mi * (k2 * g1 + k1 * g2);
}

StressField inverse_divergence(const VectorField& f) {
    VectorField p = leray_project(f);
    const auto& g = f.grid();
    bool real = f[0].real() && f[1].real();
    StressField r(g, real);
    int n = g.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::size_t i = static_cast<std::size_t>(a) * n + b;
            double k1 = g.freq(a), k2 = g.freq(b);
            if (k1 == 0.0 && k2 == 0.0) continue;
            inverse_divergence_symbol(k1, k2, p[0].data()[i], p[1].data()[i], r.m11.data()[i], r.m12.data()[i]);
        }
    return r;
}

ScalarField freq_localizer(const Vec2& k, double lambda, const ScalarField& f) {
    if (std::abs(k.norm() - 1.0) > 1e-12) throw PreconditionError("freq_localizer: k must be a unit vector");
    if (lambda < 1.0) throw PreconditionError("freq_localizer: lambda must be >= 1");
    return apply_multiplier(
        f, [&](int k1, int k2) { return localizer_bump(std::hypot(k1 / lambda - k.x, k2 / lambda - k.y)); }, false);
}

VectorField freq_localizer(const Vec2& k, double lambda, const VectorField& f) {
    return VectorField(freq_localizer(k, lambda, f[0]), freq_localizer(k, lambda, f[1]));
}

VectorField wave_localizer(const Vec2& k, double lambda, const VectorField& f) {
    return leray_project(freq_localizer(k, lambda, f));
}

ScalarField annular_projector(double lambda, const ScalarField& f) {
    if (lambda <= 0.0) throw PreconditionError("annular_projector: lambda must be positive");
    return apply_multiplier(f, [lambda](int k1, int k2) { return annular_symbol(std::hypot(k1, k2) / lambda); });
}

VectorField annular_projector(double lambda, const VectorField& f) {
    VectorField r(annular_projector(lambda, f[0]), annular_projector(lambda, f[1]));
    r.div_free = f.div_free;
    return r;
}

ScalarField calderon_commutator(const ScalarField& phi, const ScalarField& v) {
    if (has_mean(v)) throw PreconditionError("calderon_commutator: v must be mean-zero");
    double need = phi.max_frequency() + v.max_frequency();
    if (need >= phi.n() / 2)
        throw ResolutionError("calderon_commutator: product support exceeds grid band");
    return fractional_laplacian(dealiased_product(phi, v), 1.0) -
           dealiased_product(phi, fractional_laplacian(v, 1.0));
}

VectorField grad_transpose_dot(const VectorField& u, const VectorField& w) {
    ProductSpace ps(u.grid());
    auto u1 = ps.sample(u[0]), u2 = ps.sample(u[1]);
    auto w1 = ps.sample(w[0]), w2 = ps.sample(w[1]);
    bool real = u[0].real() && w[0].real();
    std::vector<cplx> o1(u1.size()), o2(u1.size());
    {
        auto d11 = ps.sample(spectral_derivative(u[0], 1)), d12 = ps.sample(spectral_derivative(u[1], 1));
        for (std::size_t i = 0; i < o1.size(); ++i) o1[i] = d11[i] * w1[i] + d12[i] * w2[i];
    }
    {
        auto d21 = ps.sample(spectral_derivative(u[0], 2)), d22 = ps.sample(spectral_derivative(u[1], 2));
        for (std::size_t i = 0; i < o2.size(); ++i) o2[i] = d21[i] * w1[i] + d22[i] * w2[i];
    }
    return VectorField(ps.back(o1, real), ps.back(o2, real));
}

VectorField advect(const VectorField& u, const VectorField& w) {
    ProductSpace ps(u.grid());
    auto u1 = ps.sample(u[0]), u2 = ps.sample(u[1]);
    bool real = u[0].real() && w[0].real();
    VectorField r;
    for (int c = 0; c < 2; ++c) {
        auto a = ps.sample(spectral_derivative(w[c], 1)), b = ps.sample(spectral_derivative(w[c], 2));
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = u1[i] * a[i] + u2[i] * b[i];
        r[c] = ps.back(a, real);
    }
    return r;
}

VectorField nonlinear_N(const VectorField& f, const VectorField& g) {
    VectorField lf = fractional_laplacian(f, 1.0);
    return advect(lf, g) - grad_transpose_dot(g, lf);
}

VectorField nonlinear_N_magic(const VectorField& f, const VectorField& g) {
    VectorField rf = riesz(perp_divergence(f));
    ScalarField pg = perp_divergence(g);
    return VectorField(dealiased_product(rf[0], pg), dealiased_product(rf[1], pg));
}

}  // namespace sqgci
