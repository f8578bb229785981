#pragma once
// Hamiltonian, pressure recovery and the weak-form (momentum) tester.

#include <functional>
#include <vector>

#include "sqgci/field.hpp"

namespace sqgci {

// integral over the torus of |Lambda^{1/2} v|^2 = (2 pi)^2 sum |xi| |v^(xi)|^2
double hamiltonian(const VectorField& v);
double hamiltonian_scalar(const ScalarField& theta);  // ||theta||^2 in H^{-1/2}

// Mean-zero p solving -Laplace p = Tr(grad v grad u - grad v^T grad u) - Laplace v . u - d_i d_j R^{ij}
// (R optional), i.e. the pressure of the relaxed momentum equation.
ScalarField pressure_recover(const VectorField& v, const VectorField& u);
ScalarField pressure_recover(const VectorField& v, const VectorField& u, const StressField& R);

// Leray-projected defect of the relaxed momentum equation
//   P(d_t v + (Lambda v . grad) v - (grad v)^T Lambda v + Lambda^gamma v - div R)
// (the pressure gradient is annihilated by P).
VectorField relaxed_defect(const VectorField& dtv, const VectorField& v, const StressField& R, double gamma);

// Space-time test field phi(x, t) (divergence free), with its time derivative.
struct TestField {
    std::function<VectorField(double)> phi, dphi;
};

// Trapezoidal time quadrature on the uniform samples t_i = t0 + i dt of
//   int [ <v, d_t phi> + <Lambda v^j, v^i d_j phi^i> - 1/2 <d_i v^j, [Lambda, phi^i] v^j> - <v, Lambda^gamma phi> ] dt
// where v(t_i) = v_samples[i]. Throws PreconditionError if phi is not divergence free.
double weak_form_residual(const std::vector<VectorField>& v_samples, double t0, double dt, const TestField& phi,
                          double gamma);
// the integrand at one time (for tests)
double weak_form_integrand(const VectorField& v, const VectorField& phi, const VectorField& dphi, double gamma);

}  // namespace sqgci
