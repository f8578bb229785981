#pragma once
// Bilinear Fourier machinery for the SQG nonlinearity: the symbol
//   s^m(zeta, eta) = int_0^1 i ((1-r) eta - r zeta)^m / |(1-r) eta - r zeta| dr,
// the pseudo-product (S^m(f, g))^(xi) = sum_eta s^m(xi - eta, eta) f^(xi - eta) g^(eta),
// the operator T(f, g) = 1/2 ((R f) g + f (R g)) with its gradient + divergence
// split, and the oscillation matrices Q_{j,k} with their principal parts.

#include <array>
#include <vector>

#include "sqgci/field.hpp"

namespace sqgci {

// Gauss-Legendre rule on [0, 1] (cached per order).
struct QuadratureRule {
    std::vector<double> nodes, weights;
};
const QuadratureRule& gauss_legendre(int order);

// r-quadrature settings. The integrand v(r) = (eta - r d)/|eta - r d|, d = zeta + eta,
// is smooth except near r* = eta.d/|d|^2 where |eta - r d| reaches its minimum
// |b| = |eta x d|/|d|. The segment [0, 1] is split at r* and, when the near
// singularity is sharp, into panels graded geometrically (ratio 4) away from r*.
struct SymbolQuadrature {
    int nodes = 32;      // Gauss-Legendre nodes per panel
    bool graded = true;  // geometric grading around r*
};

// both components (m = 1, 2) by quadrature; throws PreconditionError if zeta = eta = 0
std::array<cplx, 2> s_symbol(const Vec2& zeta, const Vec2& eta, const SymbolQuadrature& quad = {});
cplx s_symbol(int m, const Vec2& zeta, const Vec2& eta, const SymbolQuadrature& quad = {});
// closed form of the same integral (oracle)
std::array<cplx, 2> s_symbol_exact(const Vec2& zeta, const Vec2& eta);
// plain composite trapezoid rule with `points` nodes (refined-quadrature oracle)
std::array<cplx, 2> s_symbol_trapezoid(const Vec2& zeta, const Vec2& eta, long points);

struct PseudoProductOptions {
    SymbolQuadrature quad;
    // maximum number of (input-pair) symbol evaluations
    double budget = 2.0e8;
};

// Exact lattice double sum over the nonzero coefficients of f and g; both
// inputs must live on the same grid; the result is truncated to that grid.
// Returns {S^1(f, g), S^2(f, g)}. Throws ResolutionError when the pair count
// exceeds the budget (localize the inputs first).
std::array<ScalarField, 2> pseudo_product(const ScalarField& f, const ScalarField& g,
                                          const PseudoProductOptions& opt = {});
ScalarField pseudo_product(int m, const ScalarField& f, const ScalarField& g, const PseudoProductOptions& opt = {});
// number of symbol evaluations pseudo_product would perform
double pseudo_product_cost(const ScalarField& f, const ScalarField& g);

// T(f, g)^l = 1/2 ((R^l f) g + f (R^l g)), dealiased
VectorField nonlinear_T(const ScalarField& theta1, const ScalarField& theta2);

// T^l = 1/2 d_l (Lambda^{-1} theta1 theta2) + 1/2 d_m S^m(Lambda^{-1} theta1, R^l theta2)
struct TDecomposition {
    VectorField gradient_part;    // 1/2 grad(Lambda^{-1} theta1 theta2)
    VectorField divergence_part;  // 1/2 d_m S^m(Lambda^{-1} theta1, R^l theta2)
    VectorField sum() const { return gradient_part + divergence_part; }
};
TDecomposition t_decomposition(const ScalarField& theta1, const ScalarField& theta2,
                               const PseudoProductOptions& opt = {});

// Full (non-symmetric) 2x2 matrix field, entries q[m][l].
struct MatrixField {
    ScalarField q[2][2];
    MatrixField() = default;
    explicit MatrixField(const TorusGrid& g, bool real = true)
        : q{{ScalarField(g, real), ScalarField(g, real)}, {ScalarField(g, real), ScalarField(g, real)}} {}
    MatrixField& operator+=(const MatrixField& o);
    MatrixField& operator-=(const MatrixField& o);
    double c0_norm() const;  // max over grid points of the Frobenius norm
};
MatrixField operator-(MatrixField a, const MatrixField& b);

// Q^{ml} = 1/2 S^m(Lambda^{-1} theta_k, R^l theta_{-k}); principal part
// -(lambda/2) (k (x) k)^{ml} chi^2 a^2, remainder = Q - principal.
struct OscillationSplit {
    MatrixField full, principal, remainder;
};
// theta_plus / theta_minus must be supported in |xi/lambda -+ k| <= 1/8;
// chi2a2 is the scalar field chi_j^2 a_{k,j}^2.
OscillationSplit oscillation_Q(const Vec2& k, double lambda, const ScalarField& theta_plus,
                               const ScalarField& theta_minus, const ScalarField& chi2a2,
                               const PseudoProductOptions& opt = {});
// throws PreconditionError unless every nonzero coefficient satisfies |xi/lambda - center| <= radius
void check_localized(const ScalarField& f, const Vec2& center, double lambda, double radius = 0.125);

// Rescaled shifted multiplier M*_{k,r}^{ml}(xi1, xi2) (lambda-independent);
// vanishes unless |xi1|, |xi2| < 1/8 and equals -k^m k^l at the origin.
double shifted_multiplier(int m, int l, const Vec2& k, double r, const Vec2& xi1, const Vec2& xi2);
// sup over a sample grid of B_{1/8} x B_{1/8} and r of |grad_{xi1,xi2} M*| (finite differences);
// the Taylor-kernel remainder bound scales like this constant times lambda^{-1}.
double shifted_multiplier_gradient_bound(const Vec2& k, int samples = 9);

}  // namespace sqgci
