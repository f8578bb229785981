#include "sqgci/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqgci {

const char* to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Scalar: return "scalar";
        case FieldKind::Vector: return "vector";
        case FieldKind::Matrix: return "matrix";
    }
    return "scalar";
}

namespace {

std::vector<double> samples_of(const ScalarField& f) {
    if (!f.real()) throw PreconditionError("SFLD1: only real fields can be dumped");
    return f.to_physical();
}

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

int components(FieldKind k) { return k == FieldKind::Scalar ? 1 : 2; }

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

FieldDump make_dump(const ScalarField& f, double t) { return {f.n(), FieldKind::Scalar, t, {samples_of(f)}}; }
FieldDump make_dump(const VectorField& f, double t) {
    return {f.grid().n, FieldKind::Vector, t, {samples_of(f[0]), samples_of(f[1])}};
}
FieldDump make_dump(const StressField& f, double t) {
    return {f.grid().n, FieldKind::Matrix, t, {samples_of(f.m11), samples_of(f.m12)}};
}

std::string encode_sfld1(const FieldDump& d) {
    std::string out = "SFLD1 n=" + std::to_string(d.n) + " kind=" + to_string(d.kind) + " t=" + format_double(d.t) + "\n";
    std::size_t nn = static_cast<std::size_t>(d.n) * d.n;
    if (int(d.blocks.size()) != components(d.kind)) throw std::runtime_error("SFLD1: component count mismatch");
    out.reserve(out.size() + d.blocks.size() * nn * 8);
    for (const auto& b : d.blocks) {
        if (b.size() != nn) throw std::runtime_error("SFLD1: block size mismatch");
        for (double x : b) {
            std::uint64_t u = to_le(std::bit_cast<std::uint64_t>(x));
            char bytes[8];
            std::memcpy(bytes, &u, 8);
            out.append(bytes, 8);
        }
    }
    return out;
}

FieldDump decode_sfld1(const std::string& bytes) {
    auto nl = bytes.find('\n');
    if (nl == std::string::npos) throw std::runtime_error("SFLD1: missing header line");
    std::istringstream hs(bytes.substr(0, nl));
    std::string magic, ntok, ktok, ttok;
    hs >> magic >> ntok >> ktok >> ttok;
    if (magic != "SFLD1" || ntok.rfind("n=", 0) != 0 || ktok.rfind("kind=", 0) != 0 || ttok.rfind("t=", 0) != 0)
        throw std::runtime_error("SFLD1: malformed header");
    FieldDump d;
    try {
        d.n = std::stoi(ntok.substr(2));
        d.t = std::stod(ttok.substr(2));
    } catch (const std::exception&) {
        throw std::runtime_error("SFLD1: malformed header value");
    }
    std::string kind = ktok.substr(5);
    if (kind == "scalar") d.kind = FieldKind::Scalar;
    else if (kind == "vector") d.kind = FieldKind::Vector;
    else if (kind == "matrix") d.kind = FieldKind::Matrix;
    else throw std::runtime_error("SFLD1: unknown kind '" + kind + "'");
    if (d.n <= 0) throw std::runtime_error("SFLD1: bad grid size");
    std::size_t nn = static_cast<std::size_t>(d.n) * d.n;
    int nc = components(d.kind);
    if (bytes.size() - nl - 1 != nn * 8 * nc) throw std::runtime_error("SFLD1: payload size mismatch");
    const char* p = bytes.data() + nl + 1;
    d.blocks.assign(nc, std::vector<double>(nn));
    for (int c = 0; c < nc; ++c)
        for (std::size_t i = 0; i < nn; ++i, p += 8) {
            std::uint64_t u;
            std::memcpy(&u, p, 8);
            d.blocks[c][i] = std::bit_cast<double>(to_le(u));
        }
    return d;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_sfld1(const std::string& path, const FieldDump& d) { write_file(path, encode_sfld1(d)); }
FieldDump read_sfld1(const std::string& path) { return decode_sfld1(read_file(path)); }

ScalarField dump_to_scalar(const FieldDump& d) {
    if (d.kind != FieldKind::Scalar) throw std::runtime_error("SFLD1: not a scalar dump");
    return ScalarField::from_physical(TorusGrid(d.n), d.blocks[0]);
}
VectorField dump_to_vector(const FieldDump& d) {
    if (d.kind != FieldKind::Vector) throw std::runtime_error("SFLD1: not a vector dump");
    TorusGrid g(d.n);
    return {ScalarField::from_physical(g, d.blocks[0]), ScalarField::from_physical(g, d.blocks[1])};
}
StressField dump_to_stress(const FieldDump& d) {
    if (d.kind != FieldKind::Matrix) throw std::runtime_error("SFLD1: not a matrix dump");
    TorusGrid g(d.n);
    return {ScalarField::from_physical(g, d.blocks[0]), ScalarField::from_physical(g, d.blocks[1])};
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += "\n";
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw std::runtime_error("CSV: row width mismatch in " + path);
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + format_double(r[i]);
        s += "\n";
    }
    write_file(path, s);
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header) {
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<std::vector<double>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) {
            if (header) *header = cells;
            first = false;
            continue;
        }
        std::vector<double> r;
        for (const auto& c : cells) r.push_back(std::stod(c));
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace sqgci
