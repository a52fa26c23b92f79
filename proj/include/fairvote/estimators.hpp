#pragma once

#include <cstdint>

#include "fairvote/core.hpp"
#include "fairvote/measures.hpp"
#include "fairvote/rng.hpp"

namespace fairvote {

/// Largest N the exact routes accept by default.
inline constexpr Population kExactBudget = 10'000'000;

/// E|S| evaluated exactly for one state.
///
/// Independent: log-space binomial sum. CommonBelief: quadrature over the
/// belief of the closed-form shifted-binomial E|S|. MeanField: sum over the
/// magnetization law.
MarginEstimate expected_margin_exact(const VotingModel& model, Population n, Population budget = kExactBudget);

/// Parallel Monte Carlo layout: worker w draws from RngStream(seed, w).
struct McOptions {
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// Sample mean of |S| over `samples` draws from one stream.
MarginEstimate expected_margin_mc(const VotingModel& model, Population n, std::int64_t samples, RngStream& rng);

/// Same estimator split across workers; deterministic for fixed (seed, workers).
MarginEstimate expected_margin_mc(const VotingModel& model, Population n, std::int64_t samples, const McOptions& opts);

/// Leading-order large-N formula.
///
/// Independent: sqrt(2/pi) sqrt(N). MeanField J < 1: sqrt(2/pi) sqrt(N/(1-J));
/// J > 1: C(J) N. CommonBelief with a fixed belief: N mu_bar when mu_bar > 0,
/// else the independent law.
MarginEstimate expected_margin_asymptotic(const VotingModel& model, Population n);

/// Exact per-state moments entering the deficit decomposition.
struct StateMoments {
    double second_moment = 0.0;    // E S^2
    double expected_margin = 0.0;  // E|S|
    double tie_probability = 0.0;  // P(S = 0)
};

StateMoments state_moments(const VotingModel& model, Population n, Population budget = kExactBudget);

}  // namespace fairvote
