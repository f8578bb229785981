#pragma once
// Field dumps (SFLD1) and CSV diagnostics.
//
// SFLD1 layout: one ASCII header line
//   SFLD1 n=<int> kind=<scalar|vector|matrix> t=<%.17g>\n
// followed by one block per component, each n*n IEEE-754 float64 values in
// little-endian byte order, row-major over the physical grid
// x_a = -pi + 2 pi a / n (offset a*n + b holds the sample at (x_a, x_b)).
// Components: scalar -> 1 block; vector -> v1, v2; matrix -> m11, m12 of the
// symmetric trace-free field [[m11, m12], [m12, -m11]].

#include <string>
#include <vector>

#include "sqgci/field.hpp"

namespace sqgci {

enum class FieldKind { Scalar, Vector, Matrix };
const char* to_string(FieldKind k);

struct FieldDump {
    int n = 0;
    FieldKind kind = FieldKind::Scalar;
    double t = 0.0;
    std::vector<std::vector<double>> blocks;  // physical samples per component
};

FieldDump make_dump(const ScalarField& f, double t);
FieldDump make_dump(const VectorField& f, double t);
FieldDump make_dump(const StressField& f, double t);

std::string encode_sfld1(const FieldDump& d);
FieldDump decode_sfld1(const std::string& bytes);  // throws std::runtime_error on malformed input

void write_sfld1(const std::string& path, const FieldDump& d);
FieldDump read_sfld1(const std::string& path);

// back to spectral fields (kind must match)
ScalarField dump_to_scalar(const FieldDump& d);
VectorField dump_to_vector(const FieldDump& d);
StressField dump_to_stress(const FieldDump& d);

// CSV with a header row; numbers printed with %.17g so the file round-trips.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header = nullptr);

std::string format_double(double x);  // %.17g
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sqgci
