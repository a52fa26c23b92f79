#include <doctest.h>

#include <chrono>
#include <cmath>

#include "fairvote/commonbelief.hpp"
#include "fairvote/measures.hpp"
#include "fairvote/meanfield.hpp"
#include "oracle.hpp"

using namespace fairvote;

namespace {

std::vector<BeliefDistribution> belief_set() {
    return {
        BeliefDistribution::point_mass_zero(),
        BeliefDistribution::uniform(1.0),
        BeliefDistribution::uniform(0.2),
        BeliefDistribution::symmetric_pairs({{0.4, 1.0}}),
        BeliefDistribution::atoms({{-0.9, 0.1}, {0.0, 0.8}, {0.9, 0.1}}),
        BeliefDistribution::normalized_grid({-1, -0.5, 0, 0.5, 1}, {0, 1, 2, 1, 0}),
    };
}

}  // namespace

TEST_CASE("pairwise covariance equals the second moment of the belief") {
    const int n = 8;
    const std::vector<std::pair<BeliefDistribution, double>> cases = {
        {BeliefDistribution::point_mass_zero(), 0.0},
        {BeliefDistribution::uniform(1.0), 1.0 / 3.0},
        {BeliefDistribution::symmetric_pairs({{0.4, 1.0}}), 0.16},
    };
    for (const auto& [belief, expected] : cases) {
        CAPTURE(belief.describe());
        const auto model = VotingModel::common_belief(belief);
        double cov = 0.0;
        for (std::uint64_t m = 0; m < (1u << n); ++m) {
            const Outcome o = Outcome::from_bits(m, n);
            cov += pmf_exact(model, o) * o[0] * o[1];
        }
        CHECK(std::abs(cov - second_moment(belief)) <= 1e-9);
        CHECK(second_moment(belief) == doctest::Approx(expected).epsilon(1e-12));
        // Independent oracle on the same pair.
        const auto ref = oracle::outcome_probabilities(model, n);
        double cov_ref = 0.0;
        for (std::uint64_t m = 0; m < ref.size(); ++m) cov_ref += ref[m] * ((m & 1) ? 1 : -1) * ((m & 2) ? 1 : -1);
        CHECK(cov_ref == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("mu_bar values") {
    CHECK(mu_bar(BeliefDistribution::point_mass_zero()) == 0.0);
    CHECK(mu_bar(BeliefDistribution::uniform(1.0)) == doctest::Approx(0.5));
    CHECK(mu_bar(BeliefDistribution::uniform(0.3)) == doctest::Approx(0.15));
    CHECK(mu_bar(BeliefDistribution::symmetric_pairs({{0.4, 1.0}})) == doctest::Approx(0.4));
    CHECK(mu_bar(BeliefDistribution::normalized_grid({-1, 0, 1}, {0, 1, 0})) == doctest::Approx(1.0 / 3.0));
    CHECK(second_moment(BeliefDistribution::normalized_grid({-1, 0, 1}, {0, 1, 0})) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("margin and coupling bounds hold for every belief") {
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& belief : belief_set()) {
        for (Population n : {100, 1000, 10000}) {
            CAPTURE(belief.describe());
            CAPTURE(n);
            const auto r = margin_bound_check(belief, n);
            CHECK(r.margin_bound_ok);
            CHECK(r.coupling_bound_ok);
            CHECK(r.gap <= r.bound);
            CHECK(distribution_distance(belief, n) <= 1.0 / std::sqrt(static_cast<double>(n)));
        }
    }
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10));
}

TEST_CASE("margin bound check in Monte Carlo mode") {
    const auto r = margin_bound_check(BeliefDistribution::uniform(1.0), 400, BoundMode::MonteCarlo, 50000, {2, 2});
    CHECK(r.std_error > 0.0);
    const auto e = margin_bound_check(BeliefDistribution::uniform(1.0), 400);
    CHECK(std::abs(r.mean_abs_over_n - e.mean_abs_over_n) <= 4 * r.std_error);
}

TEST_CASE("mean vote law and distance") {
    const auto law = mean_vote_law(BeliefDistribution::uniform(1.0), 10);
    REQUIRE(law.size() == 11);
    for (double p : law) CHECK(p == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
    // Point mass: W1 of the binomial S/N to 0 is E|S|/N.
    const double d = distribution_distance(BeliefDistribution::point_mass_zero(), 100);
    CHECK(d == doctest::Approx(expected_margin_exact(VotingModel::independent(), 100).value / 100).epsilon(1e-10));
    const double d1 = distribution_distance(BeliefDistribution::uniform(1.0), 100);
    const double d2 = distribution_distance(BeliefDistribution::uniform(1.0), 1000);
    const double d3 = distribution_distance(BeliefDistribution::uniform(1.0), 10000);
    CHECK(d1 > d2);
    CHECK(d2 > d3);
    // Flat law on the 11 lattice points against U[-1,1]; 7/110 from a fine-grid integration of |F - G|.
    CHECK(wasserstein1(law, BeliefDistribution::uniform(1.0)) == doctest::Approx(7.0 / 110.0).epsilon(1e-9));
}

TEST_CASE("regime classification") {
    const auto grid = geometric_grid(256, 16384, 2);
    CHECK(classify_regime(BeliefFamily(1, 0.25), 0.1, grid).regime == Regime::Linear);
    CHECK(classify_regime(BeliefFamily(1, 0.75), 0.1, grid).regime == Regime::SquareRoot);
    CHECK(classify_regime(BeliefFamily(1, 0.5), 0.1, grid).regime == Regime::Boundary);
    const auto lin = classify_regime(BeliefFamily(1, 0.0), 0.1, grid);
    CHECK(lin.predicted_exponent == doctest::Approx(1.0));
    CHECK(lin.slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::isnan(classify_regime(BeliefFamily(1, 0.5), 0.1, grid).predicted_exponent));
    CHECK_THROWS_AS(classify_regime(BeliefFamily(1, 0.5), 0.0, grid), DomainError);
}

TEST_CASE("family half width") {
    BeliefFamily f(2.0, 0.5);
    CHECK(f.half_width(4) == doctest::Approx(1.0));
    CHECK(f.half_width(1) == doctest::Approx(1.0));
    CHECK(f.half_width(16) == doctest::Approx(0.5));
    CHECK_THROWS_AS(BeliefFamily(0.0, 0.5), DomainError);
}

TEST_CASE("interpolating exponents for the uniform family") {
    const auto grid = geometric_grid(256, 16384, 2);
    for (double beta : {0.0, 0.25, 0.75, 1.5}) {
        CAPTURE(beta);
        const BeliefFamily fam(1.0, beta);
        const auto fit = scaling_fit([&](Population n) { return VotingModel::common_belief(fam.at(n)); }, grid);
        CHECK(std::abs(fit.exponent - std::max(1.0 - beta, 0.5)) <= 0.07);
    }
}
