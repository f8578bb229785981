#include "sqgci/waves.hpp"

#include <algorithm>
#include <mutex>

#include "sqgci/operators.hpp"
#include "sqgci/spectral.hpp"

namespace sqgci {

DirectionSet::DirectionSet(int j) : j_(j) {
    if (j != 1 && j != 2) throw PreconditionError("direction set index must be 1 or 2");
    std::array<Vec2, 3> base{Vec2{1.0, 0.0}, Vec2{0.6, 0.8}, Vec2{0.6, -0.8}};
    for (int i = 0; i < 3; ++i) plus_[i] = (j == 1) ? base[i] : base[i].perp();
    // columns: components (11, 12, 22) of k_i^perp (x) k_i^perp
    double m[3][3];
    for (int i = 0; i < 3; ++i) {
        Sym2 b = Sym2::outer(plus_[i].perp());
        m[0][i] = b.a11;
        m[1][i] = b.a12;
        m[2][i] = b.a22;
    }
    det_ = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
            inv_[r][c] = (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) / det_;
        }
}

std::vector<Vec2> DirectionSet::all() const {
    return {plus_[0], plus_[1], plus_[2], -plus_[0], -plus_[1], -plus_[2]};
}

std::array<double, 3> DirectionSet::gamma_squared(const Sym2& R) const {
    double v[3] = {R.a11, R.a12, R.a22};
    std::array<double, 3> g{};
    for (int i = 0; i < 3; ++i) g[i] = inv_[i][0] * v[0] + inv_[i][1] * v[1] + inv_[i][2] * v[2];
    return g;
}

std::array<double, 3> DirectionSet::gamma_coefficients(const Sym2& R) const {
    auto g2 = gamma_squared(R);
    std::array<double, 3> g{};
    for (int i = 0; i < 3; ++i) {
        if (!(g2[i] > 0.0)) throw PreconditionError("gamma_coefficients: matrix outside the validity ball");
        g[i] = std::sqrt(g2[i]);
    }
    return g;
}

Sym2 DirectionSet::reconstruct(const std::array<double, 3>& gs) const {
    Sym2 r;
    for (int i = 0; i < 3; ++i) r = r + Sym2::outer(plus_[i].perp()) * gs[i];
    return r;
}

double DirectionSet::solve_determinant() const { return det_; }

double DirectionSet::epsilon_gamma() const {
    static const double eps = estimate_epsilon_gamma();
    return eps;
}

const DirectionSet& direction_set(int which) {
    static const DirectionSet s1(1), s2(2);
    return which == 1 ? s1 : s2;
}

const DirectionSet& direction_set_for_index(long j) { return direction_set((j % 2 != 0) ? 1 : 2); }

double estimate_epsilon_gamma() {
    // unit operator-norm symmetric matrices: E = a Id + rho (cos p, sin p; sin p, -cos p),
    // |a| + rho = 1
    const int nt = 100, np = 100;
    std::vector<Sym2> dirs;
    dirs.reserve(nt * np);
    for (int it = 0; it < nt; ++it) {
        double a = -1.0 + 2.0 * it / (nt - 1);
        double rho = 1.0 - std::abs(a);
        for (int ip = 0; ip < np; ++ip) {
            double p = kTwoPi * ip / np;
            dirs.push_back({a + rho * std::cos(p), rho * std::sin(p), a - rho * std::cos(p)});
        }
    }
    DirectionSet sets[2] = {DirectionSet(1), DirectionSet(2)};
    auto valid = [&](double r) {
        for (const auto& s : sets) {
            auto g0 = s.gamma_squared(Sym2::identity());
            for (const auto& e : dirs) {
                auto g = s.gamma_squared(Sym2::identity() + e * r);
                for (int i = 0; i < 3; ++i)
                    if (g[i] < 0.1 * g0[i]) return false;
            }
        }
        return true;
    };
    double lo = 0.0, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (valid(mid) ? lo : hi) = mid;
    }
    return lo;
}

BeltramiPair beltrami_pair(const Vec2& k, double lambda, const TorusGrid& g) {
    double l1 = lambda * k.x, l2 = lambda * k.y;
    long i1 = std::lround(l1), i2 = std::lround(l2);
    if (std::abs(l1 - i1) > 1e-9 || std::abs(l2 - i2) > 1e-9)
        throw PreconditionError("beltrami_pair: lambda*k is not a lattice point");
    if (!g.holds(int(i1), int(i2))) throw ResolutionError("beltrami_pair: carrier frequency outside grid band");
    Vec2 kp = k.perp();
    BeltramiPair p;
    p.b = VectorField(ScalarField::mode(g, int(i1), int(i2), cplx(0.0, kp.x)),
                      ScalarField::mode(g, int(i1), int(i2), cplx(0.0, kp.y)));
    p.b.div_free = true;
    p.c = ScalarField::mode(g, int(i1), int(i2), 1.0);
    return p;
}

BeltramiResidual beltrami_identity_check(const DirectionSet& omega, const std::vector<cplx>& a, double lambda,
                                         const TorusGrid& g) {
    auto dirs = omega.all();
    if (a.size() != dirs.size()) throw PreconditionError("beltrami_identity_check: need one amplitude per direction");
    for (int i = 0; i < 3; ++i)
        if (std::abs(a[i + 3] - std::conj(a[i])) > 1e-14 * (1.0 + std::abs(a[i])))
            throw PreconditionError("beltrami_identity_check: amplitudes violate a_{-k} = conj(a_k)");
    VectorField W(g), Wk[6];
    ScalarField V(g);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        auto p = beltrami_pair(dirs[i], lambda, g);
        Wk[i] = p.b;
        Wk[i] *= a[i];
        W += Wk[i];
        V += a[i] * p.c;
    }
    for (int c = 0; c < 2; ++c) W[c] = W[c].real_part();
    V = V.real_part();
    BeltramiResidual res;
    // div(W (x) W)^i = d_j (W^i W^j)
    ScalarField w11 = dealiased_product(W[0], W[0]), w12 = dealiased_product(W[0], W[1]),
                w22 = dealiased_product(W[1], W[1]);
    VectorField divww(spectral_derivative(w11, 1) + spectral_derivative(w12, 2),
                      spectral_derivative(w12, 1) + spectral_derivative(w22, 2));
    ScalarField q = w11 + w22 + dealiased_product(V, V);
    VectorField rhs = grad(q);
    rhs *= 0.5;
    res.divergence_form = c_norm(divww - rhs, 0);
    // zero-mode formula
    ScalarField z11(g, false), z12(g, false), z22(g, false);
    Sym2 expect;
    for (int i = 0; i < 6; ++i) {
        int m = (i + 3) % 6;
        z11 += dealiased_product(Wk[i][0], Wk[m][0]);
        z12 += dealiased_product(Wk[i][0], Wk[m][1]);
        z22 += dealiased_product(Wk[i][1], Wk[m][1]);
        expect = expect + Sym2::outer(dirs[i].perp()) * std::norm(a[i]);
    }
    z11.coeff_ref(0, 0) -= expect.a11;
    z12.coeff_ref(0, 0) -= expect.a12;
    z22.coeff_ref(0, 0) -= expect.a22;
    res.zero_mode = std::max({c_norm(z11, 0), c_norm(z12, 0), c_norm(z22, 0)});
    return res;
}

}  // namespace sqgci
