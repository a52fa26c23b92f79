#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairvote/core.hpp"
#include "fairvote/estimators.hpp"

namespace fairvote {

/// Council acceptance rule. Empty q means simple majority (accept iff the
/// weighted vote is strictly positive).
struct Quota {
    std::optional<double> q;

    static Quota simple_majority() { return {}; }
    static Quota qualified(double q);
};

struct StateSpec {
    std::string name;
    Population population = 1;
    VotingModel model;
};

struct CouncilSpec {
    std::vector<StateSpec> states;
    Quota quota;

    /// Throws DomainError on empty/duplicate names or populations < 1.
    void validate() const;
    Population total_population() const;
    std::size_t size() const { return states.size(); }
};

/// One weight per state, aligned with CouncilSpec order.
struct WeightVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    /// Copy rescaled so the largest weight is 1 (display only).
    WeightVector normalized() const;
    void validate(std::size_t expected) const;
};

struct OptimalWeights {
    WeightVector raw;         // E|S_nu| / 2 per state
    WeightVector normalized;  // raw / max(raw)
    std::vector<MarginEstimate> expected_margins;
};

/// Per-state weight E|S_nu| / 2. Exact route when N <= budget, Monte Carlo otherwise.
OptimalWeights optimal_weights(const CouncilSpec& council, Population exact_budget = kExactBudget,
                               std::int64_t mc_samples = 100'000, const McOptions& mc = {});

/// Weights minimizing the deficit. Solves the normal equations of the exact
/// quadratic, including the cross terms produced by tie probabilities
/// (nonzero only for even populations); equals E|S_nu| when no state can tie.
WeightVector deficit_minimizing_weights(const CouncilSpec& council);

enum class DeltaMode { Exact, SemiExact, MonteCarlo };
std::string to_string(DeltaMode m);

struct DeltaEstimate {
    double value = 0.0;
    DeltaMode method = DeltaMode::Exact;
    double std_error = 0.0;
};

/// Largest total population for full enumeration.
inline constexpr Population kDeltaEnumerationCap = 20;

struct DeltaBudget {
    std::int64_t trials = 100'000;  // MonteCarlo
    McOptions mc{};
};

/// Mean-square gap E((P - C)^2) between popular vote and council result.
///
/// Exact enumerates every outcome. SemiExact uses inter-state independence:
/// sum_nu [E S^2 - 2 w E|S| + w^2] + (sum_nu w p0)^2 - sum_nu (w p0)^2,
/// with p0 = P(S_nu = 0). MonteCarlo simulates P and C directly.
DeltaEstimate delta(const CouncilSpec& council, const WeightVector& weights, DeltaMode mode,
                    const DeltaBudget& budget = {});

/// SemiExact deficit from precomputed moments.
double delta_from_moments(const std::vector<StateMoments>& moments, const WeightVector& weights);

struct CoordinateCheck {
    std::size_t state = 0;
    double delta_minus = 0.0;
    double delta_center = 0.0;
    double delta_plus = 0.0;
    double vertex = 0.0;  // argmin of Delta along this coordinate, others fixed
    bool perturbations_increase = false;
    bool vertex_matches = false;  // |vertex - w*| <= 1e-9
};

struct MinimizerReport {
    double step = 0.0;
    DeltaMode method = DeltaMode::SemiExact;
    std::vector<CoordinateCheck> coordinates;

    bool all_perturbations_increase() const;
    bool all_vertices_match() const;
};

/// Probes Delta at w* +- step e_nu (enumeration when the council is small
/// enough, SemiExact otherwise) and locates the per-coordinate vertex.
/// Violations are reported, not thrown.
MinimizerReport verify_minimizer(const CouncilSpec& council, const WeightVector& w_star, double step);

}  // namespace fairvote
