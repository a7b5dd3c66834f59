#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "svarsoft/rng.hpp"

using svarsoft::RngStream;

TEST_SUITE("rng") {

TEST_CASE("philox block matches the published known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(RngStream::philox_block({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(RngStream::philox_block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(RngStream::philox_block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same seed and stream reproduce the sequence") {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a() == b());
        REQUIRE(a.normal() == b.normal());
        REQUIRE(a.exponential() == b.exponential());
    }
}

TEST_CASE("streams and seeds are distinct") {
    std::set<std::uint64_t> first;
    for (std::uint64_t s = 0; s < 4; ++s)
        for (std::uint64_t id = 0; id < 4; ++id) first.insert(RngStream(s, id)());
    CHECK(first.size() == 16);
}

TEST_CASE("uniform ranges") {
    RngStream r(1);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double v = r.uniform_open();
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("variate moments") {
    RngStream r(3, 1);
    const int n = 200000;
    double sn = 0, sn2 = 0, se = 0, su = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
        se += r.exponential();
        su += r.uniform();
    }
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(std::abs(sn2 / n - 1.0) < 0.015);
    CHECK(std::abs(se / n - 1.0) < 0.015);
    CHECK(std::abs(su / n - 0.5) < 0.005);
}

}  // TEST_SUITE
