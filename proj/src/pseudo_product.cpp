#include "sqgci/pseudo_product.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "sqgci/operators.hpp"
#include "sqgci/spectral.hpp"

namespace sqgci {

// ---------------------------------------------------------------- quadrature

const QuadratureRule& gauss_legendre(int order) {
    if (order < 1) throw PreconditionError("gauss_legendre: order must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double dp = 1.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) p0 = 1.0;
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
        }
        // map [-1, 1] -> [0, 1], ascending nodes
        rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[order - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

// ---------------------------------------------------------------- symbol

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// panel breakpoints in [0, 1] for the integrand (eta - r d)/|eta - r d|
std::vector<double> panels(const Vec2& eta, const Vec2& d, bool graded) {
    std::vector<double> br{0.0, 1.0};
    double dd = d.dot(d);
    double rs = eta.dot(d) / dd;
    double w = std::abs(cross(d, eta)) / dd;  // |b| / |d|
    if (rs > 0.0 && rs < 1.0) br.push_back(rs);
    if (graded && w > 0.0 && w < 0.25) {
        for (double h = w; h < 1.0; h *= 4.0) {
            if (rs - h > 0.0 && rs - h < 1.0) br.push_back(rs - h);
            if (rs + h > 0.0 && rs + h < 1.0) br.push_back(rs + h);
        }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
}

}  // namespace

std::array<cplx, 2> s_symbol(const Vec2& zeta, const Vec2& eta, const SymbolQuadrature& quad) {
    if (zeta.x == 0.0 && zeta.y == 0.0 && eta.x == 0.0 && eta.y == 0.0)
        throw PreconditionError("s_symbol: both frequencies are zero");
    Vec2 d = zeta + eta;
    if (d.x == 0.0 && d.y == 0.0) {
        // constant integrand eta/|eta|
        double e = eta.norm();
        return {cplx(0.0, eta.x / e), cplx(0.0, eta.y / e)};
    }
    const QuadratureRule& rule = gauss_legendre(quad.nodes);
    auto br = panels(eta, d, quad.graded);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
        double lo = br[p], len = br[p + 1] - lo;
        double a1 = 0.0, a2 = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double r = lo + len * rule.nodes[i];
            double v1 = eta.x - r * d.x, v2 = eta.y - r * d.y;
            double nv = std::hypot(v1, v2);
            if (nv == 0.0) continue;  // measure-zero crossing point
            a1 += rule.weights[i] * v1 / nv;
            a2 += rule.weights[i] * v2 / nv;
        }
        s1 += len * a1;
        s2 += len * a2;
    }
    return {cplx(0.0, s1), cplx(0.0, s2)};
}

cplx s_symbol(int m, const Vec2& zeta, const Vec2& eta, const SymbolQuadrature& quad) {
    if (m != 1 && m != 2) throw PreconditionError("s_symbol: m must be 1 or 2");
    return s_symbol(zeta, eta, quad)[m - 1];
}

std::array<cplx, 2> s_symbol_exact(const Vec2& zeta, const Vec2& eta) {
    if (zeta.x == 0.0 && zeta.y == 0.0 && eta.x == 0.0 && eta.y == 0.0)
        throw PreconditionError("s_symbol_exact: both frequencies are zero");
    Vec2 d = zeta + eta;
    double nd = d.norm();
    if (nd == 0.0) {
        double e = eta.norm();
        return {cplx(0.0, eta.x / e), cplx(0.0, eta.y / e)};
    }
    Vec2 dh = d * (1.0 / nd), dp = dh.perp();
    double a = eta.dot(dh), b = eta.dot(dp);
    // integral of the d-parallel component: (|eta| - |zeta|)/|d|
    double par = (eta.norm() - zeta.norm()) / nd;
    double perp = 0.0;
    if (b != 0.0) perp = b / nd * (std::asinh(a / std::abs(b)) - std::asinh((a - nd) / std::abs(b)));
    return {cplx(0.0, dh.x * par + dp.x * perp), cplx(0.0, dh.y * par + dp.y * perp)};
}

std::array<cplx, 2> s_symbol_trapezoid(const Vec2& zeta, const Vec2& eta, long points) {
    if (points < 2) throw PreconditionError("s_symbol_trapezoid: need at least two points");
    Vec2 d = zeta + eta;
    double h = 1.0 / double(points - 1), s1 = 0.0, s2 = 0.0;
    for (long i = 0; i < points; ++i) {
        double r = i * h, w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        double v1 = eta.x - r * d.x, v2 = eta.y - r * d.y, nv = std::hypot(v1, v2);
        if (nv == 0.0) continue;
        s1 += w * v1 / nv;
        s2 += w * v2 / nv;
    }
    return {cplx(0.0, s1 * h), cplx(0.0, s2 * h)};
}

// ---------------------------------------------------------------- lattice sum

namespace {

struct Mode {
    int k1, k2;
    cplx c;
};

std::vector<Mode> nonzero_modes(const ScalarField& f, int box[4]) {
    const auto& g = f.grid();
    int n = g.n, h = n / 2;
    std::vector<Mode> out;
    box[0] = box[2] = n;
    box[1] = box[3] = -n;
    for (int a = 0; a < n; ++a) {
        int k1 = g.freq(a);
        if (k1 == -h) continue;
        for (int b = 0; b < n; ++b) {
            int k2 = g.freq(b);
            if (k2 == -h) continue;
            cplx c = f.data()[static_cast<std::size_t>(a) * n + b];
            if (c == cplx{}) continue;
            out.push_back({k1, k2, c});
            box[0] = std::min(box[0], k1);
            box[1] = std::max(box[1], k1);
            box[2] = std::min(box[2], k2);
            box[3] = std::max(box[3], k2);
        }
    }
    // deterministic order: ascending (k1, k2)
    std::sort(out.begin(), out.end(), [](const Mode& x, const Mode& y) {
        return x.k1 != y.k1 ? x.k1 < y.k1 : x.k2 < y.k2;
    });
    return out;
}

std::size_t count_nonzero(const ScalarField& f) {
    std::size_t c = 0;
    for (const auto& v : f.data())
        if (v != cplx{}) ++c;
    return c;
}

}  // namespace

double pseudo_product_cost(const ScalarField& f, const ScalarField& g) {
    return double(count_nonzero(f)) * double(count_nonzero(g));
}

std::array<ScalarField, 2> pseudo_product(const ScalarField& f, const ScalarField& g, const PseudoProductOptions& opt) {
    if (!(f.grid() == g.grid())) throw PreconditionError("pseudo_product: inputs must share a grid");
    const TorusGrid& grid = f.grid();
    bool real = f.real() && g.real();
    std::array<ScalarField, 2> out{ScalarField(grid, real), ScalarField(grid, real)};
    int boxA[4], boxB[4];
    auto A = nonzero_modes(f, boxA);
    auto B = nonzero_modes(g, boxB);
    if (A.empty() || B.empty()) return out;
    double cost = double(A.size()) * double(B.size());
    if (cost > opt.budget)
        throw ResolutionError("pseudo_product: " + std::to_string(A.size()) + " x " + std::to_string(B.size()) +
                              " mode pairs exceed the evaluation budget; localize the inputs first");
    int n = grid.n, h = n / 2;
    int lo1 = std::max(boxA[0] + boxB[0], -h + 1), hi1 = std::min(boxA[1] + boxB[1], h - 1);
    int lo2 = std::max(boxA[2] + boxB[2], -h + 1), hi2 = std::min(boxA[3] + boxB[3], h - 1);
    if (lo1 > hi1 || lo2 > hi2) return out;
    const auto& gd = g.data();
    auto& o1 = out[0].data();
    auto& o2 = out[1].data();
    // parallel over output rows; each output coefficient is summed over A in
    // a fixed order, so the result does not depend on the thread count
    parallel_for(std::size_t(hi1 - lo1 + 1), [&](std::size_t rb, std::size_t re) {
        for (std::size_t row = rb; row < re; ++row) {
            int x1 = lo1 + int(row);
            for (int x2 = lo2; x2 <= hi2; ++x2) {
                cplx acc1{}, acc2{};
                for (const Mode& z : A) {
                    int e1 = x1 - z.k1, e2 = x2 - z.k2;
                    if (e1 < boxB[0] || e1 > boxB[1] || e2 < boxB[2] || e2 > boxB[3]) continue;
                    cplx gv = gd[static_cast<std::size_t>(grid.index(e1)) * n + grid.index(e2)];
                    if (gv == cplx{}) continue;
                    auto s = s_symbol(Vec2{double(z.k1), double(z.k2)}, Vec2{double(e1), double(e2)}, opt.quad);
                    cplx fg = z.c * gv;
                    acc1 += s[0] * fg;
                    acc2 += s[1] * fg;
                }
                std::size_t idx = static_cast<std::size_t>(grid.index(x1)) * n + grid.index(x2);
                o1[idx] = acc1;
                o2[idx] = acc2;
            }
        }
    });
    return out;
}

ScalarField pseudo_product(int m, const ScalarField& f, const ScalarField& g, const PseudoProductOptions& opt) {
    if (m != 1 && m != 2) throw PreconditionError("pseudo_product: m must be 1 or 2");
    return pseudo_product(f, g, opt)[m - 1];
}

// ---------------------------------------------------------------- T

VectorField nonlinear_T(const ScalarField& theta1, const ScalarField& theta2) {
    VectorField r1 = riesz(theta1), r2 = riesz(theta2);
    VectorField t(0.5 * (dealiased_product(r1[0], theta2) + dealiased_product(theta1, r2[0])),
                  0.5 * (dealiased_product(r1[1], theta2) + dealiased_product(theta1, r2[1])));
    return t;
}

TDecomposition t_decomposition(const ScalarField& theta1, const ScalarField& theta2, const PseudoProductOptions& opt) {
    ScalarField f = fractional_laplacian(theta1, -1.0);
    TDecomposition d;
    d.gradient_part = grad(dealiased_product(f, theta2));
    d.gradient_part *= 0.5;
    d.divergence_part = VectorField(theta1.grid(), theta1.real() && theta2.real());
    for (int l = 1; l <= 2; ++l) {
        auto S = pseudo_product(f, riesz(theta2, l), opt);
        ScalarField c = spectral_derivative(S[0], 1) + spectral_derivative(S[1], 2);
        c *= 0.5;
        d.divergence_part[l - 1] = c;
    }
    return d;
}

// ---------------------------------------------------------------- Q

MatrixField& MatrixField::operator+=(const MatrixField& o) {
    for (int m = 0; m < 2; ++m)
        for (int l = 0; l < 2; ++l) q[m][l] += o.q[m][l];
    return *this;
}

MatrixField& MatrixField::operator-=(const MatrixField& o) {
    for (int m = 0; m < 2; ++m)
        for (int l = 0; l < 2; ++l) q[m][l] -= o.q[m][l];
    return *this;
}

MatrixField operator-(MatrixField a, const MatrixField& b) {
    a -= b;
    return a;
}

double MatrixField::c0_norm() const {
    std::vector<cplx> s[2][2];
    for (int m = 0; m < 2; ++m)
        for (int l = 0; l < 2; ++l) s[m][l] = q[m][l].to_physical_complex();
    double mx = 0.0;
    for (std::size_t i = 0; i < s[0][0].size(); ++i) {
        double v = std::norm(s[0][0][i]) + std::norm(s[0][1][i]) + std::norm(s[1][0][i]) + std::norm(s[1][1][i]);
        mx = std::max(mx, std::sqrt(v));
    }
    return mx;
}

void check_localized(const ScalarField& f, const Vec2& center, double lambda, double radius) {
    const auto& g = f.grid();
    int n = g.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (f.data()[static_cast<std::size_t>(a) * n + b] == cplx{}) continue;
            double r = std::hypot(g.freq(a) / lambda - center.x, g.freq(b) / lambda - center.y);
            if (r > radius * (1.0 + 1e-12))
                throw PreconditionError("oscillation input not localized near lambda k: mode (" +
                                        std::to_string(g.freq(a)) + "," + std::to_string(g.freq(b)) + ")");
        }
}

OscillationSplit oscillation_Q(const Vec2& k, double lambda, const ScalarField& theta_plus,
                               const ScalarField& theta_minus, const ScalarField& chi2a2,
                               const PseudoProductOptions& opt) {
    check_localized(theta_plus, k, lambda);
    check_localized(theta_minus, -k, lambda);
    const TorusGrid& g = theta_plus.grid();
    OscillationSplit out;
    out.full = MatrixField(g, false);
    ScalarField f = fractional_laplacian(theta_plus, -1.0);
    for (int l = 1; l <= 2; ++l) {
        auto S = pseudo_product(f, riesz(theta_minus, l), opt);
        for (int m = 0; m < 2; ++m) {
            S[m] *= 0.5;
            out.full.q[m][l - 1] = S[m];
        }
    }
    out.principal = MatrixField(g, chi2a2.real());
    ScalarField base = resample(chi2a2, g);
    for (int m = 0; m < 2; ++m)
        for (int l = 0; l < 2; ++l) out.principal.q[m][l] = (-0.5 * lambda * k[m] * k[l]) * base;
    out.remainder = out.full - out.principal;
    return out;
}

// ---------------------------------------------------------------- M*

double shifted_multiplier(int m, int l, const Vec2& k, double r, const Vec2& xi1, const Vec2& xi2) {
    double K1 = localizer_bump(xi1.norm()), K2 = localizer_bump(xi2.norm());
    if (K1 == 0.0 || K2 == 0.0) return 0.0;
    Vec2 v = xi2 * (1.0 - r) - xi1 * r - k;
    Vec2 p = xi1 + k, q = xi2 - k;
    return v[m - 1] / v.norm() * (xi2[l - 1] - k[l - 1]) * (k.dot(p) / p.norm()) * (k.dot(q) / q.norm()) * K1 * K2;
}

double shifted_multiplier_gradient_bound(const Vec2& k, int samples) {
    const double R = 0.125, h = 1e-6;
    std::vector<Vec2> pts;
    for (int i = 0; i < samples; ++i)
        for (int j = 0; j < samples; ++j) {
            Vec2 p{-R + 2.0 * R * i / (samples - 1), -R + 2.0 * R * j / (samples - 1)};
            if (p.norm() <= R) pts.push_back(p);
        }
    const double rs[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    double mx = 0.0;
    for (double r : rs)
        for (const Vec2& a : pts)
            for (const Vec2& b : pts)
                for (int m = 1; m <= 2; ++m)
                    for (int l = 1; l <= 2; ++l) {
                        double g2 = 0.0;
                        for (int c = 0; c < 4; ++c) {
                            Vec2 da{c == 0 ? h : 0.0, c == 1 ? h : 0.0}, db{c == 2 ? h : 0.0, c == 3 ? h : 0.0};
                            double d = (shifted_multiplier(m, l, k, r, a + da, b + db) -
                                        shifted_multiplier(m, l, k, r, a - da, b - db)) /
                                       (2.0 * h);
                            g2 += d * d;
                        }
                        mx = std::max(mx, std::sqrt(g2));
                    }
    return mx;
}

}  // namespace sqgci
