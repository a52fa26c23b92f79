#include <doctest.h>

#include <cmath>

#include "fairvote/weights.hpp"
#include "oracle.hpp"

using namespace fairvote;

namespace {

CouncilSpec council_of(std::vector<std::pair<Population, VotingModel>> states) {
    CouncilSpec c;
    int i = 0;
    for (auto& [n, m] : states) c.states.push_back({"s" + std::to_string(i++), n, m});
    return c;
}

// Direct enumeration of E((P - C)^2) over all joint outcomes.
double enumerated_delta(const CouncilSpec& c, const std::vector<double>& w) {
    std::vector<std::vector<double>> probs;
    for (const auto& s : c.states) probs.push_back(oracle::outcome_probabilities(s.model, static_cast<int>(s.population)));
    double acc = 0.0;
    std::vector<std::uint64_t> idx(c.size(), 0);
    while (true) {
        double p = 1.0, pop = 0.0, council = 0.0;
        for (std::size_t v = 0; v < c.size(); ++v) {
            const int n = static_cast<int>(c.states[v].population);
            const int s = oracle::total_of(idx[v], n);
            p *= probs[v][idx[v]];
            pop += s;
            council += w[v] * (s > 0 ? 1.0 : -1.0);
        }
        acc += p * (pop - council) * (pop - council);
        std::size_t v = 0;
        while (v < c.size() && ++idx[v] == probs[v].size()) idx[v++] = 0;
        if (v == c.size()) break;
    }
    return acc;
}

}  // namespace

TEST_CASE("optimal weights are half the expected margin") {
    const auto c = council_of({{1, VotingModel::independent()}, {3, VotingModel::independent()}, {5, VotingModel::independent()}});
    const auto w = optimal_weights(c);
    REQUIRE(w.raw.size() == 3);
    CHECK(w.raw[0] == doctest::Approx(0.5));
    CHECK(w.raw[1] == doctest::Approx(0.75));
    CHECK(w.raw[2] == doctest::Approx(0.9375));
    CHECK(w.normalized[2] == doctest::Approx(1.0));
    CHECK(w.normalized[0] == doctest::Approx(0.5 / 0.9375));
}

TEST_CASE("optimal weights fall back to Monte Carlo above the budget") {
    const auto c = council_of({{1000, VotingModel::independent()}});
    const auto w = optimal_weights(c, 100, 50000, McOptions{1, 2});
    CHECK(w.expected_margins[0].method == EstimateMethod::MonteCarlo);
    const double exact = expected_margin_exact(VotingModel::independent(), 1000).value;
    CHECK(std::abs(w.expected_margins[0].value - exact) <= 4 * w.expected_margins[0].std_error);
}

TEST_CASE("council validation") {
    CouncilSpec c;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.states = {{"a", 3, {}}, {"a", 5, {}}};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.states = {{"a", 0, {}}};
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK_THROWS_AS(Quota::qualified(1.0), DomainError);
    CHECK_THROWS_AS(Quota::qualified(0.0), DomainError);
}

TEST_CASE("single state deficit is a parabola with vertex at E|S|") {
    const auto c = council_of({{3, VotingModel::independent()}});
    for (double w : {0.0, 0.5, 1.5, 2.0}) {
        CHECK(delta(c, {{w}}, DeltaMode::Exact).value == doctest::Approx(3 - 3 * w + w * w));
        CHECK(delta(c, {{w}}, DeltaMode::SemiExact).value == doctest::Approx(3 - 3 * w + w * w));
    }
    const auto report = verify_minimizer(c, {{1.5}}, 0.1);
    CHECK(report.coordinates[0].vertex == doctest::Approx(1.5));
    CHECK(report.all_perturbations_increase());
}

TEST_CASE("deficit for the (1,3,5) council") {
    const auto c = council_of({{1, VotingModel::independent()}, {3, VotingModel::independent()}, {5, VotingModel::independent()}});
    const WeightVector w{{0.5, 0.75, 0.9375}};
    const double ref = enumerated_delta(c, w.values);
    CHECK(ref == doctest::Approx(3.92578125).epsilon(1e-14));
    CHECK(delta(c, w, DeltaMode::Exact).value == doctest::Approx(ref).epsilon(1e-13));
    CHECK(std::abs(delta(c, w, DeltaMode::SemiExact).value - ref) <= 1e-10);
    const auto mc = delta(c, w, DeltaMode::MonteCarlo, {400000, {3, 4}});
    CHECK(std::abs(mc.value - ref) <= 4 * mc.std_error);
}

TEST_CASE("deficit minimizer is the full expected margin") {
    const auto c = council_of({{1, VotingModel::independent()}, {3, VotingModel::independent()}, {5, VotingModel::independent()}});
    const auto w = deficit_minimizing_weights(c);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(1.5));
    CHECK(w[2] == doctest::Approx(1.875));
    const auto report = verify_minimizer(c, w, 0.1);
    CHECK(report.method == DeltaMode::Exact);
    CHECK(report.all_perturbations_increase());
    CHECK(report.all_vertices_match());
    // Half the margin is not a minimizer: every coordinate wants to grow.
    const auto half = verify_minimizer(c, optimal_weights(c).raw, 0.1);
    CHECK_FALSE(half.all_perturbations_increase());
    CHECK_FALSE(half.all_vertices_match());
}

TEST_CASE("SemiExact equals enumeration with ties and correlated states") {
    const auto c = council_of({{2, VotingModel::independent()},
                               {4, VotingModel::mean_field(1.3)},
                               {3, VotingModel::common_belief(BeliefDistribution::uniform(0.7))},
                               {6, VotingModel::common_belief(BeliefDistribution::symmetric_pairs({{0.4, 1.0}}))}});
    for (const auto& w : std::vector<std::vector<double>>{{0.3, 1.1, 0.2, 2.0}, {1, 1, 1, 1}, {0, 0, 0, 0}}) {
        const double ref = enumerated_delta(c, w);
        CHECK(std::abs(delta(c, {w}, DeltaMode::SemiExact).value - ref) <= 1e-10);
        CHECK(std::abs(delta(c, {w}, DeltaMode::Exact).value - ref) <= 1e-10);
    }
    const auto wstar = deficit_minimizing_weights(c);
    const auto report = verify_minimizer(c, wstar, 0.05);
    CHECK(report.all_perturbations_increase());
    CHECK(report.all_vertices_match());
}

TEST_CASE("zero weights give the second moment") {
    const auto c = council_of({{4, VotingModel::independent()}, {7, VotingModel::independent()}});
    CHECK(delta(c, {{0, 0}}, DeltaMode::SemiExact).value == doctest::Approx(11.0));
}

TEST_CASE("deficit rejects misaligned weights and oversize enumeration") {
    const auto c = council_of({{15, VotingModel::independent()}, {15, VotingModel::independent()}});
    CHECK_THROWS_AS(delta(c, {{1.0}}, DeltaMode::SemiExact), DomainError);
    CHECK_THROWS_AS(delta(c, {{1.0, 1.0}}, DeltaMode::Exact), DomainError);
    CHECK_THROWS_AS(delta(c, {{1.0, -1.0}}, DeltaMode::SemiExact), DomainError);
}

TEST_CASE("large council minimizer check uses SemiExact") {
    const auto c = council_of({{1000, VotingModel::independent()}, {2001, VotingModel::mean_field(1.5)},
                               {5000, VotingModel::common_belief(BeliefDistribution::uniform(0.2))}});
    const auto w = deficit_minimizing_weights(c);
    const auto report = verify_minimizer(c, w, 0.1);
    CHECK(report.method == DeltaMode::SemiExact);
    CHECK(report.all_perturbations_increase());
    CHECK(report.all_vertices_match());
}
