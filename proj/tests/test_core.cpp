#include <doctest.h>

#include <cmath>
#include <set>

#include "fairvote/core.hpp"
#include "fairvote/rng.hpp"

using namespace fairvote;

namespace {
Outcome make(std::initializer_list<int> v) {
    std::vector<Spin> s;
    for (int x : v) s.push_back(static_cast<Spin>(x));
    return Outcome(std::move(s));
}
}  // namespace

TEST_CASE("margin") {
    CHECK(margin(make({1, 1, 1})) == 3);
    CHECK(margin(make({1, -1})) == 0);
    CHECK(margin(make({1, 1, -1, 1, -1})) == 1);
}

TEST_CASE("q_margin") {
    CHECK(q_margin(make({1, 1, 1, 1}), 0.5) == doctest::Approx(4.0));
    CHECK(q_margin(make({1, 1, 1, 1}), 0.75) == doctest::Approx(2.0));
    CHECK(q_margin(make({-1, -1}), 0.75) == doctest::Approx(3.0));
    CHECK_THROWS_AS(q_margin(make({1}), 0.0), DomainError);
    CHECK_THROWS_AS(q_margin(make({1}), 1.0), DomainError);
    CHECK_THROWS_AS(q_margin(make({1}), -0.2), DomainError);
}

TEST_CASE("affirmative_count") {
    CHECK(affirmative_count(make({1, 1, -1})) == 2);
    CHECK(affirmative_count(make({-1, -1})) == 0);
    CHECK(affirmative_count(make({1, -1, 1, -1})) == 2);
}

TEST_CASE("majority_sign breaks ties toward no") {
    CHECK(majority_sign(5) == 1);
    CHECK(majority_sign(0) == -1);
    CHECK(majority_sign(-0.3) == -1);
}

TEST_CASE("outcome validation") {
    CHECK_THROWS_AS(Outcome(std::vector<Spin>{1, 0, -1}), DomainError);
    CHECK_THROWS_AS(Outcome(std::vector<Spin>{}), DomainError);
    CHECK_THROWS_AS(Outcome(std::vector<Spin>{2}), DomainError);
    CHECK(Outcome::from_bits(0b101, 3).total() == 1);
}

TEST_CASE("mean-field model rejects negative coupling") {
    CHECK_THROWS_AS(VotingModel::mean_field(-0.1), DomainError);
    CHECK_NOTHROW(VotingModel::mean_field(0.0));
}

TEST_CASE("outcome identities hold on random outcomes") {
    RngStream rng(7, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto n = static_cast<int>(1 + rng.below(40));
        std::vector<Spin> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = (rng() & 1u) ? Spin{1} : Spin{-1};
        const Outcome o(v);
        CHECK(margin(o) == std::llabs(2 * affirmative_count(o) - n));
        CHECK(q_margin(o, 0.5 + 1e-12) == doctest::Approx(static_cast<double>(margin(o))).epsilon(1e-9));
        CHECK(margin(o.flipped()) == margin(o));
        const double x = rng.uniform01() * 10 - 5;
        if (x != 0.0) CHECK(majority_sign(-x) == -majority_sign(x));
    }
}

TEST_CASE("philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    std::vector<std::uint64_t> va, vc, vd;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        va.push_back(x);
        vc.push_back(c());
        vd.push_back(d());
    }
    CHECK(va != vc);
    CHECK(va != vd);
    std::set<std::uint64_t> uniq(va.begin(), va.end());
    CHECK(uniq.size() == va.size());
}

TEST_CASE("rng uniform and bounded draws are unbiased") {
    RngStream rng(1, 0);
    const int n = 200000;
    double sum = 0.0;
    std::vector<int> bins(7, 0);
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        ++bins[rng.below(7)];
    }
    // Mean of U(0,1): sd of the mean is sqrt(1/12/n).
    CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    for (int b : bins) CHECK(std::abs(b - n / 7.0) < 5.0 * std::sqrt(n / 7.0));
}

TEST_CASE("distinct streams are uncorrelated") {
    RngStream a(9, 0), b(9, 1);
    const int n = 100000;
    double sab = 0.0;
    for (int i = 0; i < n; ++i) sab += (a.uniform01() - 0.5) * (b.uniform01() - 0.5);
    // Var of product of two centered U(0,1) = (1/12)^2.
    CHECK(std::abs(sab / n) < 5.0 * (1.0 / 12.0) / std::sqrt(n));
}
