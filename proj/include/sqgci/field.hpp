#pragma once
// Torus grid, FFT transforms and the spectral field containers.
//
// Grid: x_a = -pi + 2*pi*a/n, a = 0..n-1, in each direction.
// Coefficients: f(x) = sum_k c_k e^{i k.x}, so c_0 is the mean.
// Storage index (a, b) <-> frequency (freq(a), freq(b)) with
// freq(i) = i for i < n/2, i - n otherwise (index n/2 is the Nyquist line).
// Physical samples are stored row-major with the x1 index as the row:
// offset a*n + b.

#include <optional>
#include <vector>

#include "sqgci/common.hpp"

namespace sqgci {

struct TorusGrid {
    int n = 0;
    TorusGrid() = default;
    explicit TorusGrid(int n_);
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    int freq(int idx) const { return idx < n / 2 ? idx : idx - n; }
    // storage index of frequency k (requires |k| <= n/2)
    int index(int k) const { return k >= 0 ? k : k + n; }
    bool holds(int k1, int k2) const { return std::abs(k1) < n / 2 && std::abs(k2) < n / 2; }
    double x(int a) const { return -kPi + kTwoPi * a / n; }
    bool operator==(const TorusGrid& o) const { return n == o.n; }
};

// Radial frequency support metadata: all significant coefficients lie in
// the closed annulus rmin <= |k| <= rmax (rmin = 0 for a ball).
struct Support {
    double rmin = 0.0, rmax = 0.0;
};

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const TorusGrid& g, bool real = true);

    static ScalarField from_physical(const TorusGrid& g, const std::vector<double>& samples);
    static ScalarField from_physical_complex(const TorusGrid& g, const std::vector<cplx>& samples,
                                             bool real = false);
    // single Fourier mode amp * e^{i k.x}
    static ScalarField mode(const TorusGrid& g, int k1, int k2, cplx amp, bool real = false);

    std::vector<double> to_physical() const;
    std::vector<cplx> to_physical_complex() const;

    const TorusGrid& grid() const { return grid_; }
    int n() const { return grid_.n; }
    bool real() const { return real_; }
    void set_real(bool r) { real_ = r; }

    cplx coeff(int k1, int k2) const;
    cplx& coeff_ref(int k1, int k2);
    std::vector<cplx>& data() { return c_; }
    const std::vector<cplx>& data() const { return c_; }

    // direct evaluation of the trigonometric sum (slow; oracles and tests)
    cplx eval(double x1, double x2) const;

    cplx mean() const { return c_.empty() ? cplx{} : c_[0]; }
    double max_abs_coeff() const;
    // largest / smallest |k| carrying a coefficient above rel_tol * max
    double max_frequency(double rel_tol = 1e-14) const;
    double min_frequency(double rel_tol = 1e-14) const;
    // true if every coefficient above rel_tol * max lies inside the support
    bool within(const Support& s, double rel_tol = 1e-14) const;
    // Hermitian defect max |c(-k) - conj c(k)| relative to max |c|
    double hermitian_defect() const;

    std::optional<Support> support;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(cplx s);
    ScalarField& operator*=(double s);
    ScalarField conj() const;
    ScalarField real_part() const;  // (f + conj f)/2 in physical space
    bool is_zero() const;

private:
    TorusGrid grid_;
    bool real_ = true;
    std::vector<cplx> c_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator*(cplx s, ScalarField a);

struct VectorField {
    ScalarField c[2];
    bool div_free = false;
    VectorField() = default;
    explicit VectorField(const TorusGrid& g, bool real = true) : c{ScalarField(g, real), ScalarField(g, real)} {}
    VectorField(ScalarField a, ScalarField b) : c{std::move(a), std::move(b)} {}
    const TorusGrid& grid() const { return c[0].grid(); }
    ScalarField& operator[](int i) { return c[i]; }
    const ScalarField& operator[](int i) const { return c[i]; }
    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double s);
    VectorField& operator*=(cplx s);
    VectorField conj() const;
    double max_frequency(double rel_tol = 1e-14) const;
    double min_frequency(double rel_tol = 1e-14) const;
    double max_abs_coeff() const;
    // max |k . c(k)| / max |c|
    double divergence_defect() const;
};
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

// Symmetric trace-free 2x2 field: [[m11, m12], [m12, -m11]].
struct StressField {
    ScalarField m11, m12;
    StressField() = default;
    explicit StressField(const TorusGrid& g, bool real = true) : m11(g, real), m12(g, real) {}
    StressField(ScalarField a, ScalarField b) : m11(std::move(a)), m12(std::move(b)) {}
    const TorusGrid& grid() const { return m11.grid(); }
    StressField& operator+=(const StressField& o);
    StressField& operator-=(const StressField& o);
    StressField& operator*=(double s);
    double max_frequency(double rel_tol = 1e-14) const;
};
StressField operator+(StressField a, const StressField& b);
StressField operator-(StressField a, const StressField& b);
StressField operator*(double s, StressField a);

// ---- transforms on arbitrary grid sizes ----
// In-place unnormalized 2D FFT (sign -1 forward, +1 backward), plans cached.
void fft2(std::vector<cplx>& data, int n, int sign);

// Samples f on an m x m grid (coefficients outside the m-grid band are
// dropped; m may be larger or smaller than the field's own grid).
std::vector<cplx> sample_on(const ScalarField& f, int m);
// Inverse of sample_on: forward transform of m x m samples, keeping the
// modes representable on the target grid.
ScalarField from_samples(const std::vector<cplx>& samples, int m, const TorusGrid& target, bool real);
// Zero-pad or truncate the coefficient array onto another grid.
ScalarField resample(const ScalarField& f, const TorusGrid& g);
VectorField resample(const VectorField& f, const TorusGrid& g);
StressField resample(const StressField& f, const TorusGrid& g);

// Smallest FFT-friendly even size (2^a 3^b 5^c) that is >= m.
int fft_size_at_least(int m);

}  // namespace sqgci
