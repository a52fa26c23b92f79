#pragma once

#include <string>
#include <vector>

#include "fairvote/core.hpp"
#include "fairvote/estimators.hpp"
#include "fairvote/weights.hpp"

namespace fairvote {

/// The state's delegate vote chi(S).
Spin state_delegate_vote(const Outcome& state_outcome) noexcept;

enum class Decision { Accept, Reject };

/// Accept iff sum w xi > 0 (simple majority) or sum w xi >= (2q - 1) W.
Decision council_decision(const std::vector<Spin>& delegate_votes, const WeightVector& weights, const Quota& quota);

struct SimulationResult {
    DeltaEstimate delta;
    double disagreement_rate = 0.0;  // council decision differs from the popular majority
    double disagreement_std_error = 0.0;
    double mean_popular_margin = 0.0;  // mean |P|
    std::int64_t trials = 0;
    std::vector<double> per_state_yes_rates;  // delegate votes +1
    /// Sample covariance of delegate votes, row-major M x M.
    std::vector<double> delegate_covariance;
    std::vector<double> delegate_covariance_std_error;
};

/// Simulates the union: states sampled independently, each trial
/// accumulating (P - C)^2, disagreement, and delegate statistics.
SimulationResult simulate(const CouncilSpec& council, const WeightVector& weights, std::int64_t trials,
                          const McOptions& mc = {});

struct RuleComparison {
    std::string rule;
    WeightVector weights;     // ray-scaled
    double scale = 0.0;       // c* applied to the rule's direction
    double delta_semi_exact = 0.0;
    SimulationResult simulation;
};

/// The deficit-minimizing multiple c* of a direction u (closed form of the quadratic).
double ray_scale(const std::vector<StateMoments>& moments, const std::vector<double>& direction);

/// Compares optimal (E|S|/2 direction), sqrt(N), N, and equal weights, each
/// scaled along its ray to minimize the deficit.
std::vector<RuleComparison> compare_weight_rules(const CouncilSpec& council, std::int64_t trials,
                                                 const McOptions& mc = {});

}  // namespace fairvote
