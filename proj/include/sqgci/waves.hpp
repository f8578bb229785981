#pragma once
// Beltrami plane waves and the geometric decomposition of symmetric
// matrices near the identity over the direction sets Omega_1, Omega_2.

#include <array>
#include <vector>

#include "sqgci/field.hpp"

namespace sqgci {

class DirectionSet {
public:
    // j in {1, 2}; Omega_2 = Omega_1^perp
    explicit DirectionSet(int j);
    int index() const { return j_; }
    // Omega_j^+ : one representative of each +/- pair
    const std::array<Vec2, 3>& plus() const { return plus_; }
    // all six directions, ordered k_1, k_2, k_3, -k_1, -k_2, -k_3
    std::vector<Vec2> all() const;
    // gamma_k^2 for k in plus(), from the exact linear solve
    // R = sum_i gamma_i^2 k_i^perp (x) k_i^perp  (= 1/2 sum over all of Omega_j)
    std::array<double, 3> gamma_squared(const Sym2& R) const;
    // gamma_k >= 0; throws PreconditionError if some gamma^2 <= 0
    std::array<double, 3> gamma_coefficients(const Sym2& R) const;
    Sym2 reconstruct(const std::array<double, 3>& gamma_sq) const;
    // determinant of the 3x3 solve matrix
    double solve_determinant() const;
    // positivity radius of the ball around Id (operator norm), cached
    double epsilon_gamma() const;

private:
    int j_;
    std::array<Vec2, 3> plus_;
    double inv_[3][3];
    double det_;
};

// Omega_1 for odd wave index, Omega_2 for even.
const DirectionSet& direction_set_for_index(long j);
const DirectionSet& direction_set(int which);

// Largest radius r (bisection) such that gamma_k^2(Id + r E) >= 0.1 gamma_k^2(Id)
// over a deterministic 10^4-point sweep of unit operator-norm symmetric E,
// for both direction sets.
double estimate_epsilon_gamma();

struct BeltramiPair {
    VectorField b;  // i k^perp e^{i lambda k.x}
    ScalarField c;  // e^{i lambda k.x}
};
BeltramiPair beltrami_pair(const Vec2& k, double lambda, const TorusGrid& g);

struct BeltramiResidual {
    double divergence_form = 0.0;  // ||div(W(x)W) - 1/2 grad(|W|^2 + |V|^2)||_C0
    double zero_mode = 0.0;        // ||sum_k W_k (x) W_{-k} - sum |a_k|^2 k^perp (x) k^perp||
};
// amplitudes ordered like DirectionSet::all(); requires a_{-k} = conj(a_k)
BeltramiResidual beltrami_identity_check(const DirectionSet& omega, const std::vector<cplx>& amplitudes,
                                         double lambda, const TorusGrid& g);

}  // namespace sqgci
