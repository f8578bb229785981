#include "sqgci/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace sqgci {

TorusGrid::TorusGrid(int n_) : n(n_) {
    if (n < 4 || n % 2 != 0) throw PreconditionError("grid size must be even and >= 4, got " + std::to_string(n));
}

// ---------------------------------------------------------------- FFT
namespace {
std::mutex g_plan_mutex;
std::map<std::pair<int, int>, fftw_plan> g_plans;

fftw_plan plan_for(int n, int sign) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    std::vector<cplx> tmp(static_cast<std::size_t>(n) * n);
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_plan plan = fftw_plan_dft_2d(n, n, p, p, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    g_plans[key] = plan;
    return plan;
}

inline double parity_sign(int a, int b) { return ((a + b) & 1) ? -1.0 : 1.0; }
}  // namespace

void fft2(std::vector<cplx>& data, int n, int sign) {
    if (data.size() != static_cast<std::size_t>(n) * n) throw PreconditionError("fft2: size mismatch");
    fftw_plan plan = plan_for(n, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

int fft_size_at_least(int m) {
    for (int s = std::max(4, m);; ++s) {
        if (s % 2) continue;
        int r = s;
        for (int f : {2, 3, 5})
            while (r % f == 0) r /= f;
        if (r == 1) return s;
    }
}

// ---------------------------------------------------------------- ScalarField
ScalarField::ScalarField(const TorusGrid& g, bool real) : grid_(g), real_(real), c_(g.size(), cplx{}) {}

ScalarField ScalarField::from_physical(const TorusGrid& g, const std::vector<double>& samples) {
    if (samples.size() != g.size()) throw PreconditionError("from_physical: sample count != grid size");
    std::vector<cplx> z(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) throw PreconditionError("from_physical: non-finite sample");
        z[i] = samples[i];
    }
    return from_samples(z, g.n, g, true);
}

ScalarField ScalarField::from_physical_complex(const TorusGrid& g, const std::vector<cplx>& samples, bool real) {
    if (samples.size() != g.size()) throw PreconditionError("from_physical: sample count != grid size");
    for (const auto& s : samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw PreconditionError("from_physical: non-finite sample");
    return from_samples(samples, g.n, g, real);
}

ScalarField ScalarField::mode(const TorusGrid& g, int k1, int k2, cplx amp, bool real) {
    ScalarField f(g, real);
    f.coeff_ref(k1, k2) = amp;
    return f;
}

std::vector<cplx> ScalarField::to_physical_complex() const { return sample_on(*this, grid_.n); }

std::vector<double> ScalarField::to_physical() const {
    auto z = to_physical_complex();
    std::vector<double> r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].real();
    return r;
}

cplx ScalarField::coeff(int k1, int k2) const {
    int h = grid_.n / 2;
    if (k1 < -h || k1 >= h || k2 < -h || k2 >= h) return {};
    return c_[static_cast<std::size_t>(grid_.index(k1)) * grid_.n + grid_.index(k2)];
}

cplx& ScalarField::coeff_ref(int k1, int k2) {
    int h = grid_.n / 2;
    if (k1 < -h || k1 >= h || k2 < -h || k2 >= h)
        throw PreconditionError("frequency (" + std::to_string(k1) + "," + std::to_string(k2) +
                                ") outside grid n=" + std::to_string(grid_.n));
    return c_[static_cast<std::size_t>(grid_.index(k1)) * grid_.n + grid_.index(k2)];
}

cplx ScalarField::eval(double x1, double x2) const {
    cplx s{};
    int n = grid_.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx c = c_[static_cast<std::size_t>(a) * n + b];
            if (c == cplx{}) continue;
            double ph = grid_.freq(a) * x1 + grid_.freq(b) * x2;
            s += c * cplx(std::cos(ph), std::sin(ph));
        }
    return s;
}

double ScalarField::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
}

double ScalarField::max_frequency(double rel_tol) const {
    double thr = rel_tol * max_abs_coeff(), r = 0.0;
    if (thr == 0.0 && max_abs_coeff() == 0.0) return 0.0;
    int n = grid_.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (std::abs(c_[static_cast<std::size_t>(a) * n + b]) > thr)
                r = std::max(r, std::hypot(grid_.freq(a), grid_.freq(b)));
    return r;
}

double ScalarField::min_frequency(double rel_tol) const {
    double mx = max_abs_coeff();
    if (mx == 0.0) return 0.0;
    double thr = rel_tol * mx, r = 1e300;
    int n = grid_.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (std::abs(c_[static_cast<std::size_t>(a) * n + b]) > thr)
                r = std::min(r, std::hypot(grid_.freq(a), grid_.freq(b)));
    return r;
}

bool ScalarField::within(const Support& s, double rel_tol) const {
    double mx = max_abs_coeff();
    if (mx == 0.0) return true;
    double thr = rel_tol * mx;
    int n = grid_.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (std::abs(c_[static_cast<std::size_t>(a) * n + b]) <= thr) continue;
            double r = std::hypot(grid_.freq(a), grid_.freq(b));
            if (r < s.rmin - 1e-12 || r > s.rmax + 1e-12) return false;
        }
    return true;
}

double ScalarField::hermitian_defect() const {
    double mx = max_abs_coeff();
    if (mx == 0.0) return 0.0;
    double d = 0.0;
    int n = grid_.n, h = n / 2;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int k1 = grid_.freq(a), k2 = grid_.freq(b);
            if (k1 == -h || k2 == -h) continue;
            d = std::max(d, std::abs(coeff(-k1, -k2) - std::conj(coeff(k1, k2))));
        }
    return d / mx;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    if (!(grid_ == o.grid_)) throw PreconditionError("field grid mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    real_ = real_ && o.real_;
    return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
    if (!(grid_ == o.grid_)) throw PreconditionError("field grid mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    real_ = real_ && o.real_;
    return *this;
}
ScalarField& ScalarField::operator*=(cplx s) {
    for (auto& c : c_) c *= s;
    if (s.imag() != 0.0) real_ = false;
    return *this;
}
ScalarField& ScalarField::operator*=(double s) {
    for (auto& c : c_) c *= s;
    return *this;
}

ScalarField ScalarField::conj() const {
    ScalarField r(grid_, real_);
    int n = grid_.n, h = n / 2;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int k1 = grid_.freq(a), k2 = grid_.freq(b);
            if (k1 == -h || k2 == -h) continue;
            r.coeff_ref(-k1, -k2) = std::conj(c_[static_cast<std::size_t>(a) * n + b]);
        }
    return r;
}

ScalarField ScalarField::real_part() const {
    ScalarField r = conj();
    r += *this;
    r *= 0.5;
    r.real_ = true;
    return r;
}

bool ScalarField::is_zero() const {
    for (const auto& c : c_)
        if (c != cplx{}) return false;
    return true;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator*(cplx s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------- VectorField
VectorField& VectorField::operator+=(const VectorField& o) {
    c[0] += o.c[0];
    c[1] += o.c[1];
    div_free = div_free && o.div_free;
    return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
    c[0] -= o.c[0];
    c[1] -= o.c[1];
    div_free = div_free && o.div_free;
    return *this;
}
VectorField& VectorField::operator*=(double s) {
    c[0] *= s;
    c[1] *= s;
    return *this;
}
VectorField& VectorField::operator*=(cplx s) {
    c[0] *= s;
    c[1] *= s;
    return *this;
}
VectorField VectorField::conj() const {
    VectorField r(c[0].conj(), c[1].conj());
    r.div_free = div_free;
    return r;
}
double VectorField::max_frequency(double t) const {
    return std::max(c[0].max_frequency(t), c[1].max_frequency(t));
}
double VectorField::min_frequency(double t) const {
    bool z0 = c[0].max_abs_coeff() == 0.0, z1 = c[1].max_abs_coeff() == 0.0;
    if (z0) return c[1].min_frequency(t);
    if (z1) return c[0].min_frequency(t);
    return std::min(c[0].min_frequency(t), c[1].min_frequency(t));
}
double VectorField::max_abs_coeff() const { return std::max(c[0].max_abs_coeff(), c[1].max_abs_coeff()); }
double VectorField::divergence_defect() const {
    double mx = max_abs_coeff();
    if (mx == 0.0) return 0.0;
    const auto& g = grid();
    double d = 0.0;
    int n = g.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::size_t i = static_cast<std::size_t>(a) * n + b;
            d = std::max(d, std::abs(double(g.freq(a)) * c[0].data()[i] + double(g.freq(b)) * c[1].data()[i]));
        }
    return d / mx;
}
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// ---------------------------------------------------------------- StressField
StressField& StressField::operator+=(const StressField& o) {
    m11 += o.m11;
    m12 += o.m12;
    return *this;
}
StressField& StressField::operator-=(const StressField& o) {
    m11 -= o.m11;
    m12 -= o.m12;
    return *this;
}
StressField& StressField::operator*=(double s) {
    m11 *= s;
    m12 *= s;
    return *this;
}
double StressField::max_frequency(double t) const { return std::max(m11.max_frequency(t), m12.max_frequency(t)); }
StressField operator+(StressField a, const StressField& b) { return a += b; }
StressField operator-(StressField a, const StressField& b) { return a -= b; }
StressField operator*(double s, StressField a) { return a *= s; }

// ---------------------------------------------------------------- resampling
std::vector<cplx> sample_on(const ScalarField& f, int m) {
    const auto& g = f.grid();
    int n = g.n, hm = m / 2;
    std::vector<cplx> z(static_cast<std::size_t>(m) * m, cplx{});
    const auto& c = f.data();
    for (int a = 0; a < n; ++a) {
        int k1 = g.freq(a);
        if (k1 < -hm || k1 >= hm) continue;
        int am = k1 >= 0 ? k1 : k1 + m;
        for (int b = 0; b < n; ++b) {
            int k2 = g.freq(b);
            if (k2 < -hm || k2 >= hm) continue;
            int bm = k2 >= 0 ? k2 : k2 + m;
            z[static_cast<std::size_t>(am) * m + bm] = c[static_cast<std::size_t>(a) * n + b] * parity_sign(am, bm);
        }
    }
    fft2(z, m, +1);
    return z;
}

ScalarField from_samples(const std::vector<cplx>& samples, int m, const TorusGrid& target, bool real) {
    std::vector<cplx> z = samples;
    fft2(z, m, -1);
    double inv = 1.0 / (double(m) * m);
    ScalarField f(target, real);
    int n = target.n;
    auto& c = f.data();
    if (n == m) {
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                std::size_t i = static_cast<std::size_t>(a) * m + b;
                c[i] = z[i] * (inv * parity_sign(a, b));
            }
        return f;
    }
    int keep = std::min(n, m) / 2;  // keep |k_i| < keep
    for (int a = 0; a < m; ++a) {
        int k1 = a < m / 2 ? a : a - m;
        if (std::abs(k1) >= keep) continue;
        for (int b = 0; b < m; ++b) {
            int k2 = b < m / 2 ? b : b - m;
            if (std::abs(k2) >= keep) continue;
            c[static_cast<std::size_t>(target.index(k1)) * n + target.index(k2)] =
                z[static_cast<std::size_t>(a) * m + b] * (inv * parity_sign(a, b));
        }
    }
    return f;
}

ScalarField resample(const ScalarField& f, const TorusGrid& g) {
    if (f.grid() == g) return f;
    ScalarField r(g, f.real());
    const auto& src = f.grid();
    int hn = g.n / 2;
    for (int a = 0; a < src.n; ++a) {
        int k1 = src.freq(a);
        if (k1 < -hn || k1 >= hn) continue;
        for (int b = 0; b < src.n; ++b) {
            int k2 = src.freq(b);
            if (k2 < -hn || k2 >= hn) continue;
            r.coeff_ref(k1, k2) = f.data()[static_cast<std::size_t>(a) * src.n + b];
        }
    }
    return r;
}
VectorField resample(const VectorField& f, const TorusGrid& g) {
    VectorField r(resample(f[0], g), resample(f[1], g));
    r.div_free = f.div_free;
    return r;
}
StressField resample(const StressField& f, const TorusGrid& g) {
    return StressField(resample(f.m11, g), resample(f.m12, g));
}

}  // namespace sqgci
