#pragma once
// Differentiation, dealiased products and norms on spectral fields.

#include <vector>

#include "sqgci/field.hpp"

namespace sqgci {

// Apply a Fourier multiplier symbol(k1, k2) -> complex to every coefficient.
template <class Symbol>
ScalarField apply_multiplier(const ScalarField& f, Symbol&& symbol, bool keep_real = true) {
    ScalarField r(f.grid(), keep_real && f.real());
    const auto& g = f.grid();
    int n = g.n;
    const auto& src = f.data();
    auto& dst = r.data();
    for (int a = 0; a < n; ++a) {
        int k1 = g.freq(a);
        for (int b = 0; b < n; ++b) {
            std::size_t i = static_cast<std::size_t>(a) * n + b;
            if (src[i] == cplx{}) continue;
            dst[i] = src[i] * cplx(symbol(k1, g.freq(b)));
        }
    }
    return r;
}

// d/dx_dir, dir in {1, 2}; Nyquist lines are zeroed.
ScalarField spectral_derivative(const ScalarField& f, int dir);
VectorField grad(const ScalarField& f);
VectorField perp_grad(const ScalarField& f);        // (-d2 f, d1 f)
ScalarField divergence(const VectorField& v);       // d1 v1 + d2 v2
ScalarField perp_divergence(const VectorField& v);  // -d2 v1 + d1 v2
ScalarField laplacian(const ScalarField& f);
// divergence of a stress: (div R)^i = d_j R^{ij}
VectorField divergence(const StressField& r);

// Zero-padded product space: samples band-limited fields on an m-grid with
// m >= 3n/2 so that products truncated back to the n-grid are alias free.
class ProductSpace {
public:
    explicit ProductSpace(const TorusGrid& g);
    int m() const { return m_; }
    const TorusGrid& grid() const { return grid_; }
    std::vector<cplx> sample(const ScalarField& f) const;
    ScalarField back(const std::vector<cplx>& values, bool real) const;

private:
    TorusGrid grid_;
    int m_;
};

ScalarField dealiased_product(const ScalarField& f, const ScalarField& g);

// Grid norms. Order N: max over grid points and all multi-indices |alpha| = N.
double c_norm(const ScalarField& f, int order);
// Order 0 uses the pointwise Euclidean length; N >= 1 maxes over components.
double c_norm(const VectorField& v, int order);
// Order 0 uses the pointwise operator norm sqrt(m11^2 + m12^2).
double c_norm(const StressField& r, int order);
// Dyadic-shell surrogate sup_j 2^{j beta} ||P_j f||_{C^0}, shells 2^j <= |k| < 2^{j+1}.
double besov_norm(const ScalarField& f, double beta);

// sum |c_k|^2 (equals the grid mean of |f|^2 by Plancherel)
double coeff_energy(const ScalarField& f);
double grid_mean_square(const ScalarField& f);
// integral over the torus of f * conj(g)
cplx l2_inner(const ScalarField& f, const ScalarField& g);
double l2_inner(const VectorField& f, const VectorField& g);

}  // namespace sqgci
