#include <cmath>
#include <vector>

#include "doctest.h"
#include "romberg/parallel.hpp"
#include "romberg/random.hpp"

using namespace romberg;

TEST_CASE("philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("split is a pure function of seed and path") {
    const RngStream s(7);
    CHECK(s.split(0) == s.split(0));
    CHECK(s.split(0).key() == s.split(0).key());
    Generator a(s.split(3)), b(s.split(3));
    for (int i = 0; i < 1000; ++i) REQUIRE(a.normal() == b.normal());
    CHECK(s.split(1).split(2).path().size() == 2);
    CHECK(s.split(0).key() == derive_key(s.key(), 0));
}

TEST_CASE("split paths are not symmetric") {
    const RngStream s(11);
    const RngStream ab = s.split(1).split(2), ba = s.split(2).split(1);
    CHECK_FALSE(ab == ba);
    Generator ga(ab), gb(ba);
    int same = 0;
    for (int i = 0; i < 100; ++i) same += ga.next_u64() == gb.next_u64();
    CHECK(same == 0);
}

TEST_CASE("sibling streams are uncorrelated") {
    const RngStream s(2024);
    Generator g1(s.split(1)), g2(s.split(2));
    const int N = 1000000;
    CoMoments m;
    for (int i = 0; i < N; ++i) m.add(g1.normal(), g2.normal());
    CHECK(std::fabs(m.correlation()) < 3.0 / std::sqrt(double(N)));
    CHECK(std::fabs(m.correlation()) < 0.01);
    CHECK(std::fabs(m.mean_x) < 4.0 / std::sqrt(double(N)));
    CHECK(m.variance_x() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("normal draws have Gaussian moments") {
    Generator g(RngStream(99));
    const int N = 400000;
    double m3 = 0, m4 = 0, tail = 0;
    for (int i = 0; i < N; ++i) {
        const double x = g.normal();
        m3 += x * x * x;
        m4 += x * x * x * x;
        tail += x > 1.959963984540054;
    }
    CHECK(std::fabs(m3 / N) < 5.0 * std::sqrt(15.0 / N));
    CHECK(std::fabs(m4 / N - 3.0) < 5.0 * std::sqrt(96.0 / N));
    CHECK(std::fabs(tail / N - 0.025) < 5.0 * std::sqrt(0.025 * 0.975 / N));
}

TEST_CASE("uniforms lie in the open unit interval") {
    Generator g(RngStream(3));
    double lo = 1, hi = 0, sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = g.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("time grids") {
    const TimeGrid g = TimeGrid::uniform(2.0, 8);
    CHECK(g.intervals() == 8);
    CHECK(g.node(0) == 0.0);
    CHECK(g.horizon() == 2.0);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(g.node(k + 1) > g.node(k));
        CHECK(g.step(k) == doctest::Approx(0.25));
    }
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0), std::invalid_argument);

    const TimeGrid u = TimeGrid::union_of(1.0, 4, 3);
    REQUIRE(u.nodes().size() == 7);
    const double expect[] = {0.0, 0.25, 1.0 / 3, 0.5, 2.0 / 3, 0.75, 1.0};
    for (int i = 0; i < 7; ++i) CHECK(u.node(i) == doctest::Approx(expect[i]).epsilon(1e-15));
    CHECK(u.contains_nodes_of(TimeGrid::uniform(1.0, 4)));
    CHECK(u.contains_nodes_of(TimeGrid::uniform(1.0, 3)));
    CHECK_FALSE(TimeGrid::uniform(1.0, 4).contains_nodes_of(TimeGrid::uniform(1.0, 3)));

    // nested steps: the union is the finer grid itself
    CHECK(TimeGrid::union_of(1.3, 12, 4) == TimeGrid::uniform(1.3, 12));
}

TEST_CASE("brownian increments") {
    const RngStream s(5);
    const TimeGrid g = TimeGrid::uniform(1.0, 1);
    Moments m;
    for (std::uint32_t i = 0; i < 100000; ++i) m.add(brownian_increments(s.split(i), g, 1).increments[0]);
    CHECK(m.variance() >= 0.98);
    CHECK(m.variance() <= 1.02);

    const TimeGrid g8 = TimeGrid::uniform(0.5, 8);
    const auto a = brownian_increments(s, g8, 3), b = brownian_increments(s, g8, 3);
    CHECK(a.increments == b.increments);
    CHECK(a.increments.size() == 24);
    CHECK(a.at(2).size() == 3);
    CHECK(a.at(2)[1] == a.increments[7]);

    Moments v;
    for (std::uint32_t i = 0; i < 20000; ++i)
        for (double x : brownian_increments(s.split(i), g8, 2).increments) v.add(x);
    CHECK(v.variance() == doctest::Approx(0.5 / 8).epsilon(0.02));
}

TEST_CASE("coarsening") {
    const TimeGrid fine = TimeGrid::uniform(3.0, 3);
    const PathIncrements w{fine, 1, {0.1, -0.2, 0.3}};
    const auto c = coarsen_increments(w, TimeGrid::uniform(3.0, 1));
    REQUIRE(c.increments.size() == 1);
    CHECK(c.increments[0] == doctest::Approx(0.2));
    CHECK(coarsen_increments(w, fine).increments == w.increments);
    CHECK_THROWS_AS(coarsen_increments(w, TimeGrid::uniform(3.0, 2)), GridMismatch);

    const RngStream s(8);
    const TimeGrid u = TimeGrid::union_of(1.0, 4, 3);
    const auto wu = brownian_increments(s, u, 2);
    const auto w4 = coarsen_increments(wu, TimeGrid::uniform(1.0, 4));
    const auto w3 = coarsen_increments(wu, TimeGrid::uniform(1.0, 3));
    CHECK(w4.increments.size() == 8);
    CHECK(w3.increments.size() == 6);
    CHECK(w4.terminal()[0] == doctest::Approx(wu.terminal()[0]).epsilon(1e-14));
    CHECK(w3.terminal()[1] == doctest::Approx(wu.terminal()[1]).epsilon(1e-14));
    // first coarse interval [0, 1/3] = [0, 1/4] + [1/4, 1/3]
    CHECK(w3.at(0)[0] == wu.at(0)[0] + wu.at(1)[0]);
}

TEST_CASE("coarsened paths have the law of the coarse grid") {
    const RngStream s(12);
    const TimeGrid u = TimeGrid::union_of(1.0, 10, 4);
    const TimeGrid c = TimeGrid::uniform(1.0, 4);
    Moments m;
    for (std::uint32_t i = 0; i < 40000; ++i)
        m.add(coarsen_increments(brownian_increments(s.split(i), u, 1), c).increments[1]);
    CHECK(m.variance() == doctest::Approx(0.25).epsilon(0.03));
    CHECK(std::fabs(m.mean) < 4 * m.std_err());
}
