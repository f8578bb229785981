#pragma once
// Iteration parameters and prescribed Hamiltonian profiles.

#include <string>

namespace sqgci {

struct SchemeParams {
    double lambda0 = 5.0;
    double beta = 0.6;
    double gamma = 0.0;

    void validate() const;  // throws ConfigError
    double lambda(int q) const;
    double delta(int q) const;
    // tau_{q+1} = (lambda_q lambda_{q+1} delta_q^{1/4} delta_{q+1}^{1/4})^{-1}
    double tau_next(int q) const;
    // lambda0^{-1 + beta/2}, the scale bounding tau_{q+1} ||grad u_q||
    double cfl_scale() const;
    double epsilon_gamma() const;
    double epsilon_R() const { return epsilon_gamma() / 8.0; }
};

struct HamiltonianProfile {
    std::string name = "cos2";  // "cos2" or "bump"
    double amplitude = 12.0;
    double t0 = 0.0, t1 = 4.0;

    void validate() const;
    double value(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;
};

}  // namespace sqgci
