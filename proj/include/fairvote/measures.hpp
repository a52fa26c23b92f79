#pragma once

#include <cstdint>
#include <vector>

#include "fairvote/core.hpp"
#include "fairvote/rng.hpp"

namespace fairvote {

/// Largest population for which outcome-level enumeration is allowed.
inline constexpr Population kEnumerationCap = 24;

/// Probability of one exact voting outcome under `model`.
/// N is taken from the outcome; throws DomainError for N > kEnumerationCap.
double pmf_exact(const VotingModel& model, const Outcome& outcome);

/// Law of the total spin S = sum X_i on {-N, -N+2, ..., N}.
class MagnetizationPmf {
public:
    MagnetizationPmf(Population n, std::vector<double> by_yes_count);

    Population population() const noexcept { return n_; }
    /// P(S = s); zero off the lattice.
    double at(std::int64_t s) const noexcept;
    /// Indexed by yes-count k = (N + s) / 2.
    const std::vector<double>& by_yes_count() const noexcept { return p_; }

    double expected_abs() const noexcept;
    double second_moment() const noexcept;

private:
    Population n_;
    std::vector<double> p_;
};

/// Mean-field law of S: P(S = s) ~ C(N, (N+s)/2) exp(J s^2 / (2 (N - 1))),
/// normalized by log-sum-exp. N = 1 has no pairs and gives the fair coin.
MagnetizationPmf magnetization_pmf(double coupling, Population n);

/// Law of the total under any model (Independent and CommonBelief route
/// through binomial mixtures). O(N) for Independent/MeanField.
MagnetizationPmf total_spin_pmf(const VotingModel& model, Population n);

/// Precomputed sampler for one (model, N).
///
/// Mean-field draws the total from its exact law, then places the +1 votes
/// on a uniformly random subset (the Gibbs measure is exchangeable).
class ModelSampler {
public:
    ModelSampler(VotingModel model, Population n);

    Population population() const noexcept { return n_; }
    const VotingModel& model() const noexcept { return model_; }

    /// Draws S directly without materializing the outcome.
    std::int64_t draw_total(RngStream& rng) const;
    Outcome draw_outcome(RngStream& rng) const;

    /// Belief value for one proposal (0 for Independent).
    double draw_belief(RngStream& rng) const;

private:
    std::int64_t draw_yes_count(RngStream& rng) const;

    VotingModel model_;
    Population n_;
    std::vector<double> cdf_;  // mean-field yes-count CDF
};

/// One-shot convenience.
Outcome sample(const VotingModel& model, Population n, RngStream& rng);

/// zeta = tanh(h).
double field_to_belief(double h);
/// h = atanh(zeta); throws DomainError for |zeta| >= 1.
double belief_to_field(double zeta);

/// Draw from a belief distribution.
double sample_belief(const BeliefDistribution& belief, RngStream& rng);

}  // namespace fairvote
