#include "sqgci/transport.hpp"

#include <algorithm>

#include "sqgci/operators.hpp"
#include "sqgci/spectral.hpp"

namespace sqgci {

// ---------------------------------------------------------------- cutoffs
double smooth_step_derivative(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
    double d = a + b;
    return a * b * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s))) / (d * d);
}

double master_cutoff(double s) {
    if (s <= 0.5 || s >= 2.5) return 0.0;
    if (s <= 1.5) return std::sin(0.5 * kPi * smooth_step(s - 0.5));
    return std::cos(0.5 * kPi * smooth_step(s - 1.5));
}

double master_cutoff_derivative(double s) {
    if (s <= 0.5 || s >= 2.5) return 0.0;
    if (s <= 1.5) return std::cos(0.5 * kPi * smooth_step(s - 0.5)) * 0.5 * kPi * smooth_step_derivative(s - 0.5);
    return -std::sin(0.5 * kPi * smooth_step(s - 1.5)) * 0.5 * kPi * smooth_step_derivative(s - 1.5);
}

TimePartition::TimePartition(double tau) : tau_(tau) {
    if (!(tau > 0.0)) throw PreconditionError("TimePartition: tau must be positive");
}

std::vector<long> TimePartition::active(double t) const {
    std::vector<long> r;
    long top = static_cast<long>(std::floor(t / tau_ - 0.5));
    for (long j = top - 2; j <= top + 1; ++j)
        if (chi(j, t) > 0.0) r.push_back(j);
    return r;
}

std::vector<long> TimePartition::covering(double t0, double t1) const {
    std::vector<long> r;
    long lo = static_cast<long>(std::floor(t0 / tau_ - 2.5)), hi = static_cast<long>(std::ceil(t1 / tau_ - 0.5));
    for (long j = lo; j <= hi; ++j) {
        double a = (j + 0.5) * tau_, b = (j + 2.5) * tau_;
        if (b > t0 && a < t1) r.push_back(j);
    }
    return r;
}

double TimePartition::partition_sum(double t) const {
    double s = 0.0;
    for (long j : active(t)) s += chi(j, t) * chi(j, t);
    return s;
}

// ---------------------------------------------------------------- interpolation
PointEvaluator::PointEvaluator(const ScalarField& f, Method method, int stencil, int min_band) : real_(f.real()) {
    const auto& g = f.grid();
    int n = g.n;
    K_ = 0;
    double mx = f.max_abs_coeff();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (std::abs(f.data()[static_cast<std::size_t>(a) * n + b]) > 1e-15 * mx && mx > 0.0)
                K_ = std::max({K_, std::abs(g.freq(a)), std::abs(g.freq(b))});
    K_ = std::max(K_, std::min(min_band, n / 2 - 1));
    if (stencil < 2 || stencil % 2) throw PreconditionError("PointEvaluator: stencil must be even");
    S_ = stencil;
    if (method == Method::Auto)
        method = ((2 * K_ + 1) * (2 * K_ + 1) <= 4 * S_ * S_) ? Method::Trigonometric : Method::Lagrange;
    if (method == Method::Trigonometric && 2 * K_ + 1 > kMaxTrigWidth)
        throw PreconditionError("PointEvaluator: band too wide for direct trigonometric evaluation");
    method_ = method;
    if (method_ == Method::Trigonometric) {
        int w = 2 * K_ + 1;
        bre_.assign(static_cast<std::size_t>(w) * w, 0.0);
        bim_.assign(static_cast<std::size_t>(w) * w, 0.0);
        for (int k1 = -K_; k1 <= K_; ++k1)
            for (int k2 = -K_; k2 <= K_; ++k2) {
                cplx c = f.coeff(k1, k2);
                bre_[(k1 + K_) * w + (k2 + K_)] = c.real();
                bim_[(k1 + K_) * w + (k2 + K_)] = c.imag();
            }
        return;
    }
    // oversampled grid with K h <= 0.4
    m_ = fft_size_at_least(std::max(n, static_cast<int>(std::ceil(kTwoPi * std::max(K_, 1) / 0.4))));
    auto z = sample_on(f, m_);
    int P = m_ + 2 * S_;
    auto pad = [&](bool imag) {
        std::vector<double> out(static_cast<std::size_t>(P) * P);
        for (int a = 0; a < P; ++a) {
            int ia = ((a - S_) % m_ + m_) % m_;
            for (int b = 0; b < P; ++b) {
                int ib = ((b - S_) % m_ + m_) % m_;
                cplx v = z[static_cast<std::size_t>(ia) * m_ + ib];
                out[static_cast<std::size_t>(a) * P + b] = imag ? v.imag() : v.real();
            }
        }
        return out;
    };
    re_ = pad(false);
    if (!real_) im_ = pad(true);
    int half = S_ / 2;
    bary_.resize(S_);
    for (int j = 0; j < S_; ++j) {
        double oj = j - (half - 1), v = 1.0;
        for (int q = 0; q < S_; ++q)
            if (q != j) v *= oj - (q - (half - 1));
        bary_[j] = 1.0 / v;
    }
}

void PointEvaluator::lagrange_weights(double x, int& first, double* w) const {
    double h = kTwoPi / m_;
    double p = (x + kPi) / h;
    double i0 = std::floor(p);
    double u = p - i0;
    int half = S_ / 2;
    first = static_cast<int>(i0) - half + 1;
    // nodes o_j = j - (half - 1); barycentric form l(u) * b_j / (u - o_j)
    double l = 1.0;
    for (int j = 0; j < S_; ++j) {
        double d = u - (j - (half - 1));
        if (d == 0.0) {
            for (int q = 0; q < S_; ++q) w[q] = q == j ? 1.0 : 0.0;
            return;
        }
        l *= d;
    }
    for (int j = 0; j < S_; ++j) w[j] = l * bary_[j] / (u - (j - (half - 1)));
}

double PointEvaluator::lagrange_sum(const std::vector<double>& data, int f1, int f2, const double* w1,
                                    const double* w2) const {
    // bring the stencil start into the padded index range
    f1 = ((f1 % m_) + m_) % m_ + S_;
    f2 = ((f2 % m_) + m_) % m_ + S_;
    if (f1 + S_ > m_ + 2 * S_) f1 -= m_;
    if (f2 + S_ > m_ + 2 * S_) f2 -= m_;
    std::size_t P = static_cast<std::size_t>(m_ + 2 * S_);
    double s = 0.0;
    for (int a = 0; a < S_; ++a) {
        const double* row = &data[(f1 + a) * P + f2];
        double r = 0.0;
        for (int b = 0; b < S_; ++b) r += w2[b] * row[b];
        s += w1[a] * r;
    }
    return s;
}

namespace {
// cos(kx), sin(kx) for k = 0..K by the angle-addition recurrence
void trig_powers(double x, int K, double* c, double* s) {
    double c1 = std::cos(x), s1 = std::sin(x);
    c[0] = 1.0;
    s[0] = 0.0;
    for (int k = 1; k <= K; ++k) {
        c[k] = c[k - 1] * c1 - s[k - 1] * s1;
        s[k] = s[k - 1] * c1 + c[k - 1] * s1;
    }
}
}  // namespace

double PointEvaluator::trig_real(double x1, double x2) const {
    // Hermitian symmetry: rows k1 and -k1 are conjugate, so only k1 >= 0 is summed
    int w = 2 * K_ + 1;
    double c1[kMaxTrigWidth], s1[kMaxTrigWidth], c2[kMaxTrigWidth], s2[kMaxTrigWidth];
    trig_powers(x1, K_, c1, s1);
    trig_powers(x2, K_, c2, s2);
    double e2r[kMaxTrigWidth], e2i[kMaxTrigWidth];
    for (int k = -K_; k <= K_; ++k) {
        e2r[k + K_] = c2[std::abs(k)];
        e2i[k + K_] = k < 0 ? -s2[-k] : s2[k];
    }
    double s = 0.0;
    for (int k1 = 0; k1 <= K_; ++k1) {
        const double* rr = &bre_[static_cast<std::size_t>(k1 + K_) * w];
        const double* ri = &bim_[static_cast<std::size_t>(k1 + K_) * w];
        double ir = 0.0, ii = 0.0;
        for (int q = 0; q < w; ++q) {
            ir += rr[q] * e2r[q] - ri[q] * e2i[q];
            ii += rr[q] * e2i[q] + ri[q] * e2r[q];
        }
        s += (k1 == 0 ? 1.0 : 2.0) * (ir * c1[k1] - ii * s1[k1]);
    }
    return s;
}

cplx PointEvaluator::at(double x1, double x2) const {
    if (method_ == Method::Trigonometric) {
        if (real_) return {trig_real(x1, x2), 0.0};
        int w = 2 * K_ + 1;
        cplx s{};
        for (int k1 = -K_; k1 <= K_; ++k1) {
            cplx inner{};
            for (int k2 = -K_; k2 <= K_; ++k2) {
                std::size_t i = static_cast<std::size_t>(k1 + K_) * w + (k2 + K_);
                inner += cplx(bre_[i], bim_[i]) * std::polar(1.0, k2 * x2);
            }
            s += inner * std::polar(1.0, k1 * x1);
        }
        return s;
    }
    double w1[32], w2[32];
    int f1, f2;
    lagrange_weights(x1, f1, w1);
    lagrange_weights(x2, f2, w2);
    return {lagrange_sum(re_, f1, f2, w1, w2), real_ ? 0.0 : lagrange_sum(im_, f1, f2, w1, w2)};
}

void PointEvaluator::eval_real_pair(const PointEvaluator& a, const PointEvaluator& b, const std::vector<double>& x1,
                                    const std::vector<double>& x2, std::vector<double>& oa, std::vector<double>& ob) {
    bool shared = a.method_ == Method::Lagrange && b.method_ == Method::Lagrange && a.m_ == b.m_ && a.S_ == b.S_;
    if (!shared) {
        a.eval_real(x1, x2, oa);
        b.eval_real(x1, x2, ob);
        return;
    }
    oa.resize(x1.size());
    ob.resize(x1.size());
    parallel_for(x1.size(), [&](std::size_t lo, std::size_t hi) {
        double w1[32], w2[32];
        int f1, f2;
        for (std::size_t i = lo; i < hi; ++i) {
            a.lagrange_weights(x1[i], f1, w1);
            a.lagrange_weights(x2[i], f2, w2);
            oa[i] = a.lagrange_sum(a.re_, f1, f2, w1, w2);
            ob[i] = b.lagrange_sum(b.re_, f1, f2, w1, w2);
        }
    });
}

double PointEvaluator::real_at(double x1, double x2) const { return at(x1, x2).real(); }

void PointEvaluator::eval_real(const std::vector<double>& x1, const std::vector<double>& x2,
                               std::vector<double>& out) const {
    out.resize(x1.size());
    parallel_for(x1.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = at(x1[i], x2[i]).real();
    });
}

void PointEvaluator::eval(const std::vector<double>& x1, const std::vector<double>& x2, std::vector<cplx>& out) const {
    out.resize(x1.size());
    parallel_for(x1.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = at(x1[i], x2[i]);
    });
}

// ---------------------------------------------------------------- velocities
SampledVelocity::SampledVelocity(std::function<VectorField(double)> exact, double spacing)
    : exact_(std::move(exact)), dt_(spacing) {
    if (!(spacing > 0.0)) throw PreconditionError("SampledVelocity: spacing must be positive");
}

VectorField SampledVelocity::sample(long i) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
    }
    VectorField u = exact_(double(i) * dt_);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(i, u);
    return u;
}

VectorField SampledVelocity::at(double s) const {
    double p = s / dt_;
    long i = static_cast<long>(std::floor(p));
    double th = p - double(i);
    if (th < 1e-12) return sample(i);
    if (th > 1.0 - 1e-12) return sample(i + 1);
    VectorField a = sample(i), b = sample(i + 1);
    a *= (1.0 - th);
    b *= th;
    a += b;
    return a;
}

std::size_t SampledVelocity::cached() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
}

void SampledVelocity::trim(long keep_from) {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.erase(cache_.begin(), cache_.lower_bound(keep_from));
}

// ---------------------------------------------------------------- flow maps
namespace {
struct StageEval {
    double s;
    VectorField u;
    std::unique_ptr<PointEvaluator> e1, e2;
    double grad_norm;
};

std::shared_ptr<StageEval> make_stage(const VelocitySource& src, double s) {
    auto st = std::make_shared<StageEval>();
    st->s = s;
    st->u = src.at(s);
    int band = static_cast<int>(std::ceil(st->u.max_frequency()));
    st->e1 = std::make_unique<PointEvaluator>(st->u[0], PointEvaluator::Method::Auto, 10, band);
    st->e2 = std::make_unique<PointEvaluator>(st->u[1], PointEvaluator::Method::Auto, 10, band);
    st->grad_norm = c_norm(st->u, 1);
    return st;
}

void integrate(const VelocitySource& src, double t_from, double t_to, int steps, std::vector<double>& x1,
               std::vector<double>& x2, double cfl_max, double* max_cfl) {
    std::size_t N = x1.size();
    double h = (t_to - t_from) / steps;
    std::vector<double> k1a(N), k1b(N), k2a(N), k2b(N), k3a(N), k3b(N), k4a(N), k4b(N), ya(N), yb(N);
    auto start = make_stage(src, t_from);
    double worst = 0.0;
    for (int step = 0; step < steps; ++step) {
        double s0 = t_from + step * h;
        auto mid = make_stage(src, s0 + 0.5 * h);
        auto end = make_stage(src, step + 1 == steps ? t_to : s0 + h);
        double c = std::abs(h) * std::max({start->grad_norm, mid->grad_norm, end->grad_norm});
        worst = std::max(worst, c);
        if (c > cfl_max) {
            double g = c / std::abs(h);
            int req = static_cast<int>(std::ceil(std::abs(t_to - t_from) * g / cfl_max));
            throw CflViolation("flow map: CFL number " + std::to_string(c) + " exceeds " + std::to_string(cfl_max) +
                                   "; at least " + std::to_string(req) + " substeps required",
                               req);
        }
        auto field = [&](const StageEval& st, const std::vector<double>& a, const std::vector<double>& b,
                         std::vector<double>& oa, std::vector<double>& ob) {
            PointEvaluator::eval_real_pair(*st.e1, *st.e2, a, b, oa, ob);
        };
        field(*start, x1, x2, k1a, k1b);
        for (std::size_t i = 0; i < N; ++i) {
            ya[i] = x1[i] + 0.5 * h * k1a[i];
            yb[i] = x2[i] + 0.5 * h * k1b[i];
        }
        field(*mid, ya, yb, k2a, k2b);
        for (std::size_t i = 0; i < N; ++i) {
            ya[i] = x1[i] + 0.5 * h * k2a[i];
            yb[i] = x2[i] + 0.5 * h * k2b[i];
        }
        field(*mid, ya, yb, k3a, k3b);
        for (std::size_t i = 0; i < N; ++i) {
            ya[i] = x1[i] + h * k3a[i];
            yb[i] = x2[i] + h * k3b[i];
        }
        field(*end, ya, yb, k4a, k4b);
        for (std::size_t i = 0; i < N; ++i) {
            x1[i] += h / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i]);
            x2[i] += h / 6.0 * (k1b[i] + 2.0 * k2b[i] + 2.0 * k3b[i] + k4b[i]);
        }
        start = end;
    }
    if (max_cfl) *max_cfl = worst;
}

void grid_points(const TorusGrid& g, std::vector<double>& x1, std::vector<double>& x2) {
    x1.resize(g.size());
    x2.resize(g.size());
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            x1[static_cast<std::size_t>(a) * g.n + b] = g.x(a);
            x2[static_cast<std::size_t>(a) * g.n + b] = g.x(b);
        }
}
}  // namespace

FlowMap solve_flow_map(const VelocitySource& u, double base_time, double t, const TorusGrid& g,
                       const FlowOptions& opt) {
    FlowMap fm;
    fm.base_time = base_time;
    fm.time = t;
    fm.grid = g;
    fm.d1.assign(g.size(), 0.0);
    fm.d2.assign(g.size(), 0.0);
    double span = std::abs(t - base_time);
    if (span == 0.0) return fm;
    int steps = opt.substeps;
    if (steps <= 0) {
        double gn = std::max({c_norm(u.at(t), 1), c_norm(u.at(0.5 * (t + base_time)), 1), c_norm(u.at(base_time), 1)});
        steps = std::max(opt.min_substeps, static_cast<int>(std::ceil(1.25 * span * gn / opt.cfl_target)));
    }
    std::vector<double> x1, x2;
    grid_points(g, x1, x2);
    std::vector<double> y1 = x1, y2 = x2;
    integrate(u, t, base_time, steps, y1, y2, opt.cfl_max, &fm.max_cfl);
    for (std::size_t i = 0; i < x1.size(); ++i) {
        fm.d1[i] = y1[i] - x1[i];
        fm.d2[i] = y2[i] - x2[i];
    }
    fm.substeps = steps;
    return fm;
}

void forward_characteristics(const VelocitySource& u, double base_time, double t, const TorusGrid& g, int substeps,
                             std::vector<double>& x1, std::vector<double>& x2) {
    grid_points(g, x1, x2);
    if (t == base_time) return;
    integrate(u, base_time, t, substeps, x1, x2, 1e300, nullptr);
}

VectorField FlowMap::displacement() const {
    VectorField d(ScalarField::from_physical(grid, d1), ScalarField::from_physical(grid, d2));
    return d;
}

std::vector<double> FlowMap::jacobian() const {
    VectorField d = displacement();
    auto a11 = spectral_derivative(d[0], 1).to_physical(), a12 = spectral_derivative(d[0], 2).to_physical();
    auto a21 = spectral_derivative(d[1], 1).to_physical(), a22 = spectral_derivative(d[1], 2).to_physical();
    std::vector<double> j(a11.size());
    for (std::size_t i = 0; i < j.size(); ++i) j[i] = (1.0 + a11[i]) * (1.0 + a22[i]) - a12[i] * a21[i];
    return j;
}

double FlowMap::gradient_deviation() const {
    VectorField d = displacement();
    auto a11 = spectral_derivative(d[0], 1).to_physical(), a12 = spectral_derivative(d[0], 2).to_physical();
    auto a21 = spectral_derivative(d[1], 1).to_physical(), a22 = spectral_derivative(d[1], 2).to_physical();
    double m = 0.0;
    for (std::size_t i = 0; i < a11.size(); ++i) {
        // operator norm of [[a11, a12], [a21, a22]]
        double p = a11[i] * a11[i] + a12[i] * a12[i] + a21[i] * a21[i] + a22[i] * a22[i];
        double det = a11[i] * a22[i] - a12[i] * a21[i];
        double s = 0.5 * p + std::sqrt(std::max(0.0, 0.25 * p * p - det * det));
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

std::vector<cplx> phase_deformation(const FlowMap& phi, const Vec2& k, double lambda) {
    std::vector<cplx> psi(phi.d1.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::polar(1.0, lambda * (phi.d1[i] * k.x + phi.d2[i] * k.y));
    return psi;
}

StressSamples transport_stress(const StressField& base, const FlowMap& phi) {
    const auto& g = phi.grid;
    std::vector<double> x1(g.size()), x2(g.size());
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            std::size_t i = static_cast<std::size_t>(a) * g.n + b;
            x1[i] = g.x(a) + phi.d1[i];
            x2[i] = g.x(b) + phi.d2[i];
        }
    StressSamples s;
    PointEvaluator(base.m11).eval_real(x1, x2, s.m11);
    PointEvaluator(base.m12).eval_real(x1, x2, s.m12);
    return s;
}

// ---------------------------------------------------------------- material derivative
ScalarField advect_scalar(const VectorField& u, const ScalarField& f) {
    ProductSpace ps(f.grid());
    auto a = ps.sample(resample(u[0], f.grid())), b = ps.sample(resample(u[1], f.grid()));
    auto d1 = ps.sample(spectral_derivative(f, 1)), d2 = ps.sample(spectral_derivative(f, 2));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] * d1[i] + b[i] * d2[i];
    return ps.back(a, f.real() && u[0].real());
}

ScalarField material_derivative(const ScalarField& fm, const ScalarField& f0, const ScalarField& fp, double h,
                                const VectorField& u) {
    ScalarField d = fp - fm;
    d *= 1.0 / (2.0 * h);
    return d + advect_scalar(u, f0);
}

VectorField material_derivative(const VectorField& fm, const VectorField& f0, const VectorField& fp, double h,
                                const VectorField& u) {
    return VectorField(material_derivative(fm[0], f0[0], fp[0], h, u), material_derivative(fm[1], f0[1], fp[1], h, u));
}

StressField material_derivative(const StressField& fm, const StressField& f0, const StressField& fp, double h,
                                const VectorField& u) {
    return StressField(material_derivative(fm.m11, f0.m11, fp.m11, h, u),
                       material_derivative(fm.m12, f0.m12, fp.m12, h, u));
}

MaterialDerivativeResult material_derivative(const std::vector<VectorField>& series, std::size_t i, double h,
                                             const VectorField& u) {
    if (series.size() < 3) throw PreconditionError("material_derivative: need at least 3 time samples");
    MaterialDerivativeResult r;
    VectorField dt;
    std::size_t n = series.size();
    if (i == 0) {
        dt = -3.0 * series[0] + 4.0 * series[1] - series[2];
        r.one_sided = true;
    } else if (i == n - 1) {
        dt = 3.0 * series[n - 1] - 4.0 * series[n - 2] + series[n - 3];
        r.one_sided = true;
    } else {
        dt = series[i + 1] - series[i - 1];
    }
    dt *= 1.0 / (2.0 * h);
    r.value = VectorField(dt[0] + advect_scalar(u, series[i][0]), dt[1] + advect_scalar(u, series[i][1]));
    return r;
}

}  // namespace sqgci
