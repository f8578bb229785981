#pragma once
// Random band-limited fields for property tests.

#include <random>

#include "sqgci/field.hpp"
#include "sqgci/operators.hpp"
#include "sqgci/spectral.hpp"

namespace testutil {

using namespace sqgci;

// real field with random coefficients on |k| <= radius (optionally mean-zero)
inline ScalarField random_field(const TorusGrid& g, double radius, std::mt19937_64& rng, bool mean_zero = true,
                                double rmin = 0.0) {
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField f(g, true);
    int R = int(radius);
    for (int k1 = -R; k1 <= R; ++k1)
        for (int k2 = -R; k2 <= R; ++k2) {
            double r = std::hypot(k1, k2);
            if (r > radius || r < rmin) continue;
            if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
            if (k1 == 0 && k2 == 0) {
                if (!mean_zero) f.coeff_ref(0, 0) = N(rng);
                continue;
            }
            cplx c(N(rng), N(rng));
            f.coeff_ref(k1, k2) = c;
            f.coeff_ref(-k1, -k2) = std::conj(c);
        }
    return f;
}

inline VectorField random_vector(const TorusGrid& g, double radius, std::mt19937_64& rng) {
    return VectorField(random_field(g, radius, rng), random_field(g, radius, rng));
}

// divergence-free mean-zero field perp_grad(psi)
inline VectorField random_div_free(const TorusGrid& g, double radius, std::mt19937_64& rng, double rmin = 0.0) {
    return perp_grad(random_field(g, radius, rng, true, rmin));
}

inline double rel(double err, double scale) { return err / (scale > 0 ? scale : 1.0); }

}  // namespace testutil
