#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fairvote/core.hpp"
#include "fairvote/estimators.hpp"

namespace fairvote {

struct CjSolution {
    double value = 0.0;
    double residual = 0.0;  // |tanh(J C) - C|
    int iterations = 0;
};

/// Positive root of tanh(J C) = C by bisection on (1e-8, 1).
/// Throws SubcriticalCoupling for J <= 1.
CjSolution solve_cj(double coupling);

/// Leading-order E|S| across the phase transition; rejects J = 1.
MarginEstimate asymptotic_weight_meanfield(double coupling, Population n);

struct ScalingFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<Population, double>> grid;  // (N, expected margin)

    double prefactor() const;
};

/// Ordinary least squares of log value on log N.
ScalingFit fit_power_law(std::vector<std::pair<Population, double>> points);

enum class EstimatorMode { Exact, MonteCarlo };

struct ScalingOptions {
    EstimatorMode mode = EstimatorMode::Exact;
    std::int64_t samples = 100'000;
    McOptions mc{};
};

using ModelFamily = std::function<VotingModel(Population)>;

/// Fits E|S_N| ~ c N^alpha over `grid` (>= 3 distinct N).
ScalingFit scaling_fit(const ModelFamily& family, const std::vector<Population>& grid, const ScalingOptions& opts = {});

/// Geometric grid lo, lo*step, ... <= hi.
std::vector<Population> geometric_grid(Population lo, Population hi, double step);

}  // namespace fairvote
