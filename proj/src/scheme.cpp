#include "sqgci/scheme.hpp"

#include <cmath>

#include "sqgci/common.hpp"
#include "sqgci/waves.hpp"

namespace sqgci {

void SchemeParams::validate() const {
    if (!(lambda0 >= 5.0) || std::fmod(lambda0, 5.0) != 0.0)
        throw ConfigError("lambda0 must be a positive multiple of 5");
    if (!(beta > 0.5 && beta < 0.8)) throw ConfigError("beta must lie in (1/2, 4/5)");
    if (!(gamma >= 0.0 && gamma < 2.0 - beta)) throw ConfigError("gamma must lie in [0, 2 - beta)");
}

double SchemeParams::lambda(int q) const { return std::pow(lambda0, q); }

double SchemeParams::delta(int q) const { return lambda0 * lambda0 * std::pow(lambda(q), -2.0 * beta); }

double SchemeParams::tau_next(int q) const {
    return 1.0 / (lambda(q) * lambda(q + 1) * std::pow(delta(q), 0.25) * std::pow(delta(q + 1), 0.25));
}

double SchemeParams::cfl_scale() const { return std::pow(lambda0, -1.0 + 0.5 * beta); }

double SchemeParams::epsilon_gamma() const { return direction_set(1).epsilon_gamma(); }

void HamiltonianProfile::validate() const {
    if (name != "cos2" && name != "bump") throw ConfigError("profile must be 'cos2' or 'bump'");
    if (!(t1 > t0)) throw ConfigError("profile support must satisfy t1 > t0");
    if (!(amplitude >= 0.0)) throw ConfigError("profile amplitude must be nonnegative");
}

// cos2: A cos^2(pi (t - c) / L); bump: A exp(1 - 1/(1 - s^2)), s = 2 (t - c) / L
double HamiltonianProfile::value(double t) const {
    if (t <= t0 || t >= t1) return 0.0;
    double L = t1 - t0, c = 0.5 * (t0 + t1);
    if (name == "cos2") {
        double v = std::cos(kPi * (t - c) / L);
        return amplitude * v * v;
    }
    double s = 2.0 * (t - c) / L;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double HamiltonianProfile::derivative(double t) const {
    if (t <= t0 || t >= t1) return 0.0;
    double L = t1 - t0, c = 0.5 * (t0 + t1);
    if (name == "cos2") return -amplitude * (kPi / L) * std::sin(2.0 * kPi * (t - c) / L);
    double s = 2.0 * (t - c) / L, d = 1.0 - s * s;
    return value(t) * (-2.0 * s / (d * d)) * (2.0 / L);
}

double HamiltonianProfile::second_derivative(double t) const {
    if (t <= t0 || t >= t1) return 0.0;
    double L = t1 - t0, c = 0.5 * (t0 + t1);
    if (name == "cos2") return -amplitude * 2.0 * (kPi / L) * (kPi / L) * std::cos(2.0 * kPi * (t - c) / L);
    double s = 2.0 * (t - c) / L, d = 1.0 - s * s;
    double g = -2.0 * s / (d * d);                       // d/ds of the exponent
    double gp = (-2.0 * d * d - 8.0 * s * s * d) / (d * d * d * d);  // d^2/ds^2 of the exponent
    return value(t) * (g * g + gp) * (2.0 / L) * (2.0 / L);
}

}  // namespace sqgci
