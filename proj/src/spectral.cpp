#include "sqgci/spectral.hpp"

#include <algorithm>

namespace sqgci {

ScalarField spectral_derivative(const ScalarField& f, int dir) {
    if (dir != 1 && dir != 2) throw PreconditionError("derivative direction must be 1 or 2");
    int h = f.n() / 2;
    return apply_multiplier(f, [dir, h](int k1, int k2) {
        if (k1 == -h || k2 == -h) return cplx{};
        return cplx(0.0, dir == 1 ? k1 : k2);
    });
}

VectorField grad(const ScalarField& f) { return VectorField(spectral_derivative(f, 1), spectral_derivative(f, 2)); }

VectorField perp_grad(const ScalarField& f) {
    VectorField v(-1.0 * spectral_derivative(f, 2), spectral_derivative(f, 1));
    v.div_free = true;
    return v;
}

ScalarField divergence(const VectorField& v) { return spectral_derivative(v[0], 1) + spectral_derivative(v[1], 2); }

ScalarField perp_divergence(const VectorField& v) {
    return spectral_derivative(v[1], 1) - spectral_derivative(v[0], 2);
}

ScalarField laplacian(const ScalarField& f) {
    int h = f.n() / 2;
    return apply_multiplier(f, [h](int k1, int k2) {
        if (k1 == -h || k2 == -h) return 0.0;
        return -double(k1 * k1 + k2 * k2);
    });
}

VectorField divergence(const StressField& r) {
    // R = [[m11, m12], [m12, -m11]]
    return VectorField(spectral_derivative(r.m11, 1) + spectral_derivative(r.m12, 2),
                       spectral_derivative(r.m12, 1) - spectral_derivative(r.m11, 2));
}

// ---------------------------------------------------------------- products
ProductSpace::ProductSpace(const TorusGrid& g) : grid_(g), m_(fft_size_at_least((3 * g.n + 1) / 2)) {}

std::vector<cplx> ProductSpace::sample(const ScalarField& f) const {
    if (!(f.grid() == grid_)) throw PreconditionError("product space grid mismatch");
    return sample_on(f, m_);
}

ScalarField ProductSpace::back(const std::vector<cplx>& values, bool real) const {
    return from_samples(values, m_, grid_, real);
}

ScalarField dealiased_product(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid())) throw PreconditionError("dealiased_product: grid mismatch");
    ProductSpace ps(f.grid());
    auto a = ps.sample(f);
    auto b = ps.sample(g);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return ps.back(a, f.real() && g.real());
}

// ---------------------------------------------------------------- norms
namespace {
double max_abs(const std::vector<cplx>& z) {
    double m = 0.0;
    for (const auto& v : z) m = std::max(m, std::abs(v));
    return m;
}

ScalarField mixed_derivative(const ScalarField& f, int a1, int a2) {
    int h = f.n() / 2;
    return apply_multiplier(f, [a1, a2, h](int k1, int k2) {
        if (k1 == -h || k2 == -h) return cplx{};
        return std::pow(cplx(0.0, k1), a1) * std::pow(cplx(0.0, k2), a2);
    });
}
}  // namespace

double c_norm(const ScalarField& f, int order) {
    if (order < 0 || order > 3) throw PreconditionError("c_norm order must be 0..3");
    if (order == 0) return max_abs(f.to_physical_complex());
    double m = 0.0;
    for (int a1 = 0; a1 <= order; ++a1)
        m = std::max(m, max_abs(mixed_derivative(f, a1, order - a1).to_physical_complex()));
    return m;
}

double c_norm(const VectorField& v, int order) {
    if (order == 0) {
        auto a = v[0].to_physical_complex(), b = v[1].to_physical_complex();
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::sqrt(std::norm(a[i]) + std::norm(b[i])));
        return m;
    }
    return std::max(c_norm(v[0], order), c_norm(v[1], order));
}

double c_norm(const StressField& r, int order) {
    if (order == 0) {
        auto a = r.m11.to_physical_complex(), b = r.m12.to_physical_complex();
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::sqrt(std::norm(a[i]) + std::norm(b[i])));
        return m;
    }
    return std::max(c_norm(r.m11, order), c_norm(r.m12, order));
}

double besov_norm(const ScalarField& f, double beta) {
    double best = 0.0;
    int h = f.n() / 2;
    for (int j = 0; (1 << j) < 2 * h; ++j) {
        double lo = std::ldexp(1.0, j), hi = std::ldexp(1.0, j + 1);
        auto shell = apply_multiplier(f, [lo, hi](int k1, int k2) {
            double r = std::hypot(k1, k2);
            return (r >= lo && r < hi) ? 1.0 : 0.0;
        });
        if (shell.is_zero()) continue;
        best = std::max(best, std::pow(lo, beta) * c_norm(shell, 0));
    }
    // the zero mode is part of the lowest block
    return std::max(best, std::abs(f.mean()));
}

double coeff_energy(const ScalarField& f) {
    double s = 0.0;
    for (const auto& c : f.data()) s += std::norm(c);
    return s;
}

double grid_mean_square(const ScalarField& f) {
    auto z = f.to_physical_complex();
    double s = 0.0;
    for (const auto& v : z) s += std::norm(v);
    return s / double(z.size());
}

cplx l2_inner(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid())) throw PreconditionError("l2_inner: grid mismatch");
    cplx s{};
    for (std::size_t i = 0; i < f.data().size(); ++i) s += f.data()[i] * std::conj(g.data()[i]);
    return s * (kTwoPi * kTwoPi);
}

double l2_inner(const VectorField& f, const VectorField& g) {
    return (l2_inner(f[0], g[0]) + l2_inner(f[1], g[1])).real();
}

}  // namespace sqgci
