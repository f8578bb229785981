#pragma once
// Linear Fourier-multiplier toolkit on the torus and the SQG momentum
// nonlinearity.

#include "sqgci/field.hpp"

namespace sqgci {

// C-infinity step: 0 for s <= 0, 1 for s >= 1, built from exp(-1/s).
double smooth_step(double s);
// Radial bump: 1 for r <= 1/16, 0 for r >= 1/8.
double localizer_bump(double r);
// Radial annular symbol: 1 on [3/8, 3], 0 outside (1/4, 4) (in units of lambda).
double annular_symbol(double r_over_lambda);

ScalarField fractional_laplacian(const ScalarField& f, double s);
VectorField fractional_laplacian(const VectorField& f, double s);

VectorField riesz(const ScalarField& f);       // symbol i xi/|xi|
ScalarField riesz(const ScalarField& f, int l);  // component l in {1,2}
VectorField riesz_perp(const ScalarField& theta);  // symbol i xi^perp/|xi|

VectorField leray_project(const VectorField& f);
StressField inverse_divergence(const VectorField& f);

// P_{~k lambda}: symbol localizer_bump(|xi/lambda - k|); k must be a unit vector.
ScalarField freq_localizer(const Vec2& k, double lambda, const ScalarField& f);
VectorField freq_localizer(const Vec2& k, double lambda, const VectorField& f);
// P_{q+1,k} = Leray o P_{~k lambda}
VectorField wave_localizer(const Vec2& k, double lambda, const VectorField& f);

ScalarField annular_projector(double lambda, const ScalarField& f);
VectorField annular_projector(double lambda, const VectorField& f);

// Lambda(phi v) - phi Lambda v, dealiased
ScalarField calderon_commutator(const ScalarField& phi, const ScalarField& v);

// N(f, g)^i = (Lambda f)^j d_j g^i - d_i g^j (Lambda f)^j  (dealiased)
VectorField nonlinear_N(const VectorField& f, const VectorField& g);
// For divergence-free f: N(f, g) = (R(perp_div f)) (perp_div g)
VectorField nonlinear_N_magic(const VectorField& f, const VectorField& g);
// (grad u)^T w, i.e. component i = d_i u^j w^j
VectorField grad_transpose_dot(const VectorField& u, const VectorField& w);
// (u . grad) w
VectorField advect(const VectorField& u, const VectorField& w);

// symmetric 2x2 value at one frequency of B f (no Leray / mean handling)
void inverse_divergence_symbol(double k1, double k2, cplx g1, cplx g2, cplx& b11, cplx& b12);

}  // namespace sqgci
