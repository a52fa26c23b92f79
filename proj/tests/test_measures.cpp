#include <doctest.h>

#include <cmath>
#include <map>

#include "fairvote/measures.hpp"
#include "oracle.hpp"

using namespace fairvote;

namespace {

std::vector<VotingModel> model_zoo() {
    return {
        VotingModel::independent(),
        VotingModel::common_belief(BeliefDistribution::point_mass_zero()),
        VotingModel::common_belief(BeliefDistribution::uniform(1.0)),
        VotingModel::common_belief(BeliefDistribution::uniform(0.3)),
        VotingModel::common_belief(BeliefDistribution::symmetric_pairs({{0.4, 1.0}})),
        VotingModel::common_belief(BeliefDistribution::atoms({{-0.8, 0.2}, {0.0, 0.6}, {0.8, 0.2}})),
        VotingModel::mean_field(0.0),
        VotingModel::mean_field(0.3),
        VotingModel::mean_field(1.0),
        VotingModel::mean_field(2.0),
    };
}

}  // namespace

TEST_CASE("pmf_exact matches brute force and is normalized") {
    for (const auto& model : model_zoo()) {
        for (int n : {1, 2, 3, 5, 8}) {
            CAPTURE(model.describe());
            CAPTURE(n);
            const auto ref = oracle::outcome_probabilities(model, n);
            double total = 0.0;
            for (std::uint64_t m = 0; m < ref.size(); ++m) {
                const double p = pmf_exact(model, Outcome::from_bits(m, n));
                CHECK(p == doctest::Approx(ref[m]).epsilon(1e-9));
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("pmf_exact is flip symmetric and exchangeable") {
    RngStream rng(3, 0);
    for (const auto& model : model_zoo()) {
        const int n = 10;
        for (int t = 0; t < 20; ++t) {
            const auto mask = rng.below(1u << n);
            const Outcome o = Outcome::from_bits(mask, n);
            const double p = pmf_exact(model, o);
            CHECK(pmf_exact(model, o.flipped()) == doctest::Approx(p).epsilon(1e-12));
            std::vector<Spin> v(o.votes().begin(), o.votes().end());
            std::reverse(v.begin(), v.end());
            CHECK(pmf_exact(model, Outcome(v)) == doctest::Approx(p).epsilon(1e-12));
        }
    }
}

TEST_CASE("pmf_exact reductions") {
    // J = 0 and the point mass both reduce to the fair coin.
    const Outcome o = Outcome::from_bits(0b1011001, 7);
    CHECK(pmf_exact(VotingModel::mean_field(0.0), o) == doctest::Approx(std::pow(0.5, 7)));
    CHECK(pmf_exact(VotingModel::common_belief(BeliefDistribution::point_mass_zero()), o) ==
          doctest::Approx(std::pow(0.5, 7)));
    CHECK(pmf_exact(VotingModel::independent(), o) == doctest::Approx(std::pow(0.5, 7)));
    // Uniform(1): P(x) = k!(N-k)!/(N+1)!.
    const Outcome o2 = Outcome::from_bits(0b011, 3);
    CHECK(pmf_exact(VotingModel::common_belief(BeliefDistribution::uniform(1.0)), o2) ==
          doctest::Approx(2.0 * 1.0 / 24.0));
    CHECK_THROWS_AS(pmf_exact(VotingModel::independent(), Outcome(std::vector<Spin>(25, 1))), DomainError);
}

TEST_CASE("mean-field N = 2 under the unordered-pair convention") {
    const auto mf = VotingModel::mean_field(0.5);
    const double e = std::exp(1.0);
    CHECK(pmf_exact(mf, Outcome::from_bits(0b11, 2)) == doctest::Approx(e / (2 * e + 2)).epsilon(1e-12));
    CHECK(pmf_exact(mf, Outcome::from_bits(0b01, 2)) == doctest::Approx(1.0 / (2 * e + 2)).epsilon(1e-12));
    const auto law = magnetization_pmf(0.5, 2);
    CHECK(law.expected_abs() == doctest::Approx(2 * e / (e + 1)).epsilon(1e-12));
    CHECK(law.at(0) == doctest::Approx(0.268941421369995).epsilon(1e-12));
}

TEST_CASE("magnetization pmf matches enumeration") {
    for (double j : {0.3, 1.0, 2.0}) {
        for (int n = 1; n <= 16; ++n) {
            CAPTURE(j);
            CAPTURE(n);
            const auto ref = oracle::outcome_probabilities(VotingModel::mean_field(j), n);
            std::map<int, double> by_total;
            for (std::uint64_t m = 0; m < ref.size(); ++m) by_total[oracle::total_of(m, n)] += ref[m];
            const auto law = magnetization_pmf(j, n);
            double sum = 0.0;
            for (int s = -n; s <= n; ++s) {
                CHECK(law.at(s) == doctest::Approx(by_total[s]).epsilon(1e-10));
                CHECK(law.at(s) == doctest::Approx(law.at(-s)).epsilon(1e-14));
                sum += law.at(s);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(law.at(n + 1) == 0.0);
        }
    }
}

TEST_CASE("magnetization pmf at large N stays normalized") {
    for (double j : {0.5, 1.0, 1.5, 3.0}) {
        const auto law = magnetization_pmf(j, 100000);
        double sum = 0.0;
        for (double p : law.by_yes_count()) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(magnetization_pmf(5.0, 1).at(1) == doctest::Approx(0.5));
}

TEST_CASE("total_spin_pmf agrees with enumeration for every model") {
    for (const auto& model : model_zoo()) {
        for (int n : {1, 4, 9, 12}) {
            CAPTURE(model.describe());
            CAPTURE(n);
            const auto ref = oracle::outcome_probabilities(model, n);
            std::map<int, double> by_total;
            for (std::uint64_t m = 0; m < ref.size(); ++m) by_total[oracle::total_of(m, n)] += ref[m];
            const auto law = total_spin_pmf(model, n);
            for (int s = -n; s <= n; s += 2) CHECK(law.at(s) == doctest::Approx(by_total[s]).epsilon(1e-9));
        }
    }
}

TEST_CASE("samplers reproduce pmf_exact frequencies") {
    const std::int64_t draws = 200000;
    for (const auto& model : model_zoo()) {
        const int n = 4;
        CAPTURE(model.describe());
        ModelSampler sampler(model, n);
        RngStream rng(11, 0);
        std::vector<std::int64_t> counts(1u << n, 0);
        for (std::int64_t t = 0; t < draws; ++t) {
            const Outcome o = sampler.draw_outcome(rng);
            std::uint64_t mask = 0;
            for (int i = 0; i < n; ++i)
                if (o[static_cast<std::size_t>(i)] > 0) mask |= 1ull << i;
            ++counts[mask];
        }
        for (std::uint64_t m = 0; m < counts.size(); ++m) {
            const double p = pmf_exact(model, Outcome::from_bits(m, n));
            const double sd = std::sqrt(draws * p * (1 - p));
            CHECK(std::abs(counts[m] - draws * p) <= 5 * sd + 1e-9);
        }
    }
}

TEST_CASE("belief/field transforms") {
    CHECK(field_to_belief(0.0) == 0.0);
    CHECK(belief_to_field(field_to_belief(0.7)) == doctest::Approx(0.7));
    CHECK_THROWS_AS(belief_to_field(1.0), DomainError);
    CHECK_THROWS_AS(belief_to_field(-1.5), DomainError);
}

TEST_CASE("sample_belief follows the cdf") {
    const std::vector<BeliefDistribution> beliefs = {
        BeliefDistribution::uniform(0.6),
        BeliefDistribution::symmetric_pairs({{0.4, 1.0}}),
        BeliefDistribution::normalized_grid({-1, -0.5, 0, 0.5, 1}, {0, 1, 2, 1, 0}),
    };
    RngStream rng(5, 0);
    const int draws = 100000;
    for (const auto& b : beliefs) {
        CAPTURE(b.describe());
        for (double x : {-0.45, -0.1, 0.2, 0.5}) {
            int below = 0;
            RngStream r(5, 1);
            for (int i = 0; i < draws; ++i) below += sample_belief(b, r) <= x ? 1 : 0;
            const double p = b.cdf(x);
            CHECK(std::abs(below - draws * p) <= 5 * std::sqrt(draws * p * (1 - p)) + 1e-9);
        }
    }
    (void)rng;
}

TEST_CASE("belief validation") {
    CHECK_THROWS_AS(BeliefDistribution::uniform(0.0), DomainError);
    CHECK_THROWS_AS(BeliefDistribution::uniform(1.5), DomainError);
    CHECK_THROWS_AS(BeliefDistribution::atoms({{0.4, 0.7}, {-0.4, 0.3}}), DomainError);
    CHECK_THROWS_AS(BeliefDistribution::atoms({{0.4, 0.4}, {-0.4, 0.4}}), DomainError);
    CHECK_THROWS_AS(BeliefDistribution::grid({-1, 0, 1}, {1, 1, 1}), DomainError);
    CHECK_NOTHROW(BeliefDistribution::grid({-1, 0, 1}, {0, 1, 0}));
    CHECK(BeliefDistribution::uniform(0.5).cdf(0.0) == doctest::Approx(0.5));
    CHECK(BeliefDistribution::uniform(0.5).cdf(0.25) == doctest::Approx(0.75));
}
