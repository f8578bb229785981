#pragma once
// Shared small types, error classes and the deterministic parallel loop.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace sqgci {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 perp() const { return {-y, x}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    double operator[](int i) const { return i == 0 ? x : y; }
};

// Symmetric 2x2 matrix stored as (a11, a12, a22).
struct Sym2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    static Sym2 identity() { return {1.0, 0.0, 1.0}; }
    static Sym2 outer(const Vec2& v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }
    Sym2 operator+(const Sym2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
    Sym2 operator-(const Sym2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
    Sym2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }
    double trace() const { return a11 + a22; }
    // spectral (operator) norm
    double op_norm() const {
        double m = 0.5 * (a11 + a22), d = std::hypot(0.5 * (a11 - a22), a12);
        return std::abs(m) + d;
    }
};

// Error taxonomy; the CLI maps these to exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AssertionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Execution mode. Every parallel loop writes disjoint outputs per index, so
// results are bit-identical between serial and parallel execution.
void set_serial(bool serial);
bool is_serial();
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sqgci
