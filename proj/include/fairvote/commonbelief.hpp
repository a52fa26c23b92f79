#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fairvote/belief.hpp"
#include "fairvote/core.hpp"
#include "fairvote/estimators.hpp"

namespace fairvote {

/// Straffin-type family: uniform on [-a_N, a_N] with a_N = c N^-beta,
/// clamped to (0, 1].
struct BeliefFamily {
    double c = 1.0;
    double beta = 0.0;

    BeliefFamily(double c_, double beta_);

    double half_width(Population n) const;
    BeliefDistribution at(Population n) const { return BeliefDistribution::uniform(half_width(n)); }
};

/// mu_bar = E|Z|.
double mu_bar(const BeliefDistribution& belief);

/// E Z^2; equals the covariance of two distinct voters.
double second_moment(const BeliefDistribution& belief);

enum class Regime { Linear, SquareRoot, Boundary };
std::string to_string(Regime r);

struct RegimeReport {
    Regime regime = Regime::Boundary;
    double slope = 0.0;            // fitted d log mu_bar / d log N
    double predicted_exponent = 0.0;  // alpha in w_N ~ N^alpha; NaN for Boundary
    bool bound_holds = false;      // literal C N^(-1/2 -+ eps) condition over the whole grid
    std::vector<std::pair<Population, double>> mu_bar_by_n;
};

/// Classifies mu_bar_N decay against N^(-1/2 +- epsilon) on a finite grid.
RegimeReport classify_regime(const BeliefFamily& family, double epsilon, const std::vector<Population>& grid,
                             double bound_constant = 1.0);

enum class BoundMode { Exact, MonteCarlo };

struct MarginBoundReport {
    Population n = 0;
    double mean_abs_over_n = 0.0;  // E(|S| / N)
    double mu_bar = 0.0;
    double gap = 0.0;              // |E(|S|/N) - mu_bar|
    double coupling_gap = 0.0;     // E(|S - N Z|) / N
    double bound = 0.0;            // 1 / sqrt(N)
    double std_error = 0.0;        // MonteCarlo only (of mean_abs_over_n)
    bool margin_bound_ok = false;
    bool coupling_bound_ok = false;
};

/// Checks |E(|S|/N) - mu_bar| <= 1/sqrt(N) and E(|S - N Z|)/N <= 1/sqrt(N).
MarginBoundReport margin_bound_check(const BeliefDistribution& belief, Population n, BoundMode mode = BoundMode::Exact,
                                     std::int64_t samples = 100'000, const McOptions& mc = {});

/// Exact law of S / N on the lattice {-1, -1 + 2/N, ..., 1}, indexed by yes-count.
std::vector<double> mean_vote_law(const BeliefDistribution& belief, Population n);

/// Wasserstein-1 distance between the law of S / N and the belief itself.
double distribution_distance(const BeliefDistribution& belief, Population n);

/// W1 distance between a lattice law (indexed by yes-count) and a belief.
double wasserstein1(const std::vector<double>& lattice_law, const BeliefDistribution& belief);

}  // namespace fairvote
