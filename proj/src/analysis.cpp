#include "sqgci/analysis.hpp"

#include "sqgci/operators.hpp"
#include "sqgci/spectral.hpp"

namespace sqgci {

double hamiltonian_scalar(const ScalarField& theta) {
    const auto& g = theta.grid();
    double s = 0.0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            double k = std::hypot(g.freq(a), g.freq(b));
            if (k == 0.0) continue;
            s += std::norm(theta.data()[static_cast<std::size_t>(a) * g.n + b]) / k;
        }
    return kTwoPi * kTwoPi * s;
}

double hamiltonian(const VectorField& v) {
    const auto& g = v.grid();
    double s = 0.0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            std::size_t i = static_cast<std::size_t>(a) * g.n + b;
            double k = std::hypot(g.freq(a), g.freq(b));
            s += k * (std::norm(v[0].data()[i]) + std::norm(v[1].data()[i]));
        }
    return kTwoPi * kTwoPi * s;
}

namespace {

ScalarField inverse_neg_laplacian(const ScalarField& rhs) {
    return apply_multiplier(rhs, [](int k1, int k2) {
        double kk = double(k1) * k1 + double(k2) * k2;
        return kk == 0.0 ? 0.0 : 1.0 / kk;
    });
}

}  // namespace

ScalarField pressure_recover(const VectorField& v, const VectorField& u) {
    ScalarField rhs(v.grid(), true);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            // d_j v^i d_i u^j - d_i v^j d_i u^j
            rhs += dealiased_product(spectral_derivative(v[i - 1], j), spectral_derivative(u[j - 1], i));
            rhs -= dealiased_product(spectral_derivative(v[j - 1], i), spectral_derivative(u[j - 1], i));
        }
    for (int j = 0; j < 2; ++j) rhs -= dealiased_product(laplacian(v[j]), u[j]);
    return inverse_neg_laplacian(rhs);
}

ScalarField pressure_recover(const VectorField& v, const VectorField& u, const StressField& R) {
    ScalarField p = pressure_recover(v, u);
    ScalarField dd = divergence(divergence(R));
    return p - inverse_neg_laplacian(dd);
}

VectorField relaxed_defect(const VectorField& dtv, const VectorField& v, const StressField& R, double gamma) {
    VectorField lhs = dtv + nonlinear_N(v, v);
    if (gamma > 0.0) lhs += fractional_laplacian(v, gamma);
    return leray_project(lhs - divergence(R));
}

double weak_form_integrand(const VectorField& v, const VectorField& phi, const VectorField& dphi, double gamma) {
    if (phi.divergence_defect() > 1e-12) throw PreconditionError("weak_form_residual: test field must be divergence free");
    double s = l2_inner(v, dphi);
    VectorField lv = fractional_laplacian(v, 1.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            // <Lambda v^j, v^i d_j phi^i>
            s += l2_inner(lv[j], dealiased_product(v[i], spectral_derivative(phi[i], j + 1))).real();
            // -1/2 <d_i v^j, [Lambda, phi^i] v^j>
            s -= 0.5 * l2_inner(spectral_derivative(v[j], i + 1), calderon_commutator(phi[i], v[j])).real();
        }
    if (gamma > 0.0) s -= l2_inner(v, fractional_laplacian(phi, gamma));
    return s;
}

double weak_form_residual(const std::vector<VectorField>& v_samples, double t0, double dt, const TestField& phi,
                          double gamma) {
    double s = 0.0;
    for (std::size_t i = 0; i < v_samples.size(); ++i) {
        double t = t0 + dt * double(i);
        double w = (i == 0 || i + 1 == v_samples.size()) ? 0.5 : 1.0;
        s += w * weak_form_integrand(v_samples[i], phi.phi(t), phi.dphi(t), gamma);
    }
    return s * dt;
}

}  // namespace sqgci
