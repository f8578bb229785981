#include <cstring>

#include "doctest.h"
#include "test_util.hpp"
#include "sqgci/io.hpp"

using namespace sqgci;
using namespace testutil;

TEST_CASE("SFLD1 byte layout") {
    TorusGrid g(16);
    ScalarField f = ScalarField::from_physical(g, std::vector<double>(g.size(), 0.0));
    f.coeff_ref(0, 0) = 1.5;  // constant field 1.5
    std::string bytes = encode_sfld1(make_dump(f, 0.1));
    std::string header = "SFLD1 n=16 kind=scalar t=0.10000000000000001\n";
    REQUIRE(bytes.substr(0, header.size()) == header);
    CHECK(bytes.size() == header.size() + 16 * 16 * 8);
    // 1.5 = 0x3FF8000000000000, little endian
    const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data() + header.size());
    unsigned char expect[8] = {0, 0, 0, 0, 0, 0, 0xF8, 0x3F};
    CHECK(std::memcmp(p, expect, 8) == 0);
}

TEST_CASE("SFLD1 round trips for all kinds") {
    TorusGrid g(24);
    std::mt19937_64 rng(1);
    ScalarField s = random_field(g, 7.0, rng);
    VectorField v = random_div_free(g, 7.0, rng);
    StressField r(random_field(g, 7.0, rng), random_field(g, 7.0, rng));
    auto ds = decode_sfld1(encode_sfld1(make_dump(s, 1.25)));
    CHECK(ds.kind == FieldKind::Scalar);
    CHECK(ds.t == 1.25);
    CHECK((dump_to_scalar(ds) - s).max_abs_coeff() <= 1e-15);
    auto dv = decode_sfld1(encode_sfld1(make_dump(v, -3.0)));
    CHECK(dv.kind == FieldKind::Vector);
    CHECK((dump_to_vector(dv) - v).max_abs_coeff() <= 1e-14 * v.max_abs_coeff());
    auto dr = decode_sfld1(encode_sfld1(make_dump(r, 0.0)));
    CHECK(dr.kind == FieldKind::Matrix);
    CHECK((dump_to_stress(dr).m12 - r.m12).max_abs_coeff() <= 1e-15);
    CHECK_THROWS(dump_to_vector(ds));
    // re-encoding is byte identical
    CHECK(encode_sfld1(dv) == encode_sfld1(make_dump(v, -3.0)));
}

TEST_CASE("SFLD1 rejects malformed input") {
    CHECK_THROWS(decode_sfld1("garbage"));
    CHECK_THROWS(decode_sfld1("SFLD1 n=4 kind=tensor t=0\n"));
    CHECK_THROWS(decode_sfld1("SFLD1 n=4 kind=scalar t=0\n" + std::string(8, '\0')));
    ScalarField c(TorusGrid(16), false);
    CHECK_THROWS_AS(make_dump(c, 0.0), PreconditionError);
}

TEST_CASE("CSV round trip is exact") {
    auto path = std::string("/tmp/sqgci_test_io.csv");
    std::vector<std::vector<double>> rows = {{0.1, 1.0 / 3.0}, {-2e-300, 12345.678901234567}};
    write_csv(path, {"a", "b"}, rows);
    std::vector<std::string> h;
    auto back = read_csv(path, &h);
    CHECK(h == std::vector<std::string>{"a", "b"});
    CHECK(back == rows);
    CHECK_THROWS(write_csv(path, {"a"}, rows));
}
