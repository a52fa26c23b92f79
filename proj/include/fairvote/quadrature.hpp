#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "fairvote/belief.hpp"

namespace fairvote {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule, computed once per n and cached (thread-safe).
const GaussLegendreRule& gauss_legendre(int n);

struct QuadratureOptions {
    int initial_nodes = 64;
    int max_nodes = 8192;
    double tolerance = 1e-10;  // relative: |diff| <= tolerance * max(1, |value|)
};

/// Integrand writing `dim` values for belief value zeta into `out` (pre-zeroed).
using VectorIntegrand = std::function<void(double zeta, std::span<double> out)>;

/// Computes E_mu[f(Z)] componentwise.
///
/// Atoms and the point mass are exact sums. Uniform beliefs use composite
/// Gauss-Legendre on panels with breakpoints at +-resolution*2^k, doubling the
/// node count per panel until successive results agree. Gridded densities are
/// linear between nodes, so their trapezoid mass is exact; they integrate on
/// the same panels with the grid nodes added as breakpoints. `resolution`
/// should be the length scale on which f varies (1/sqrt(N) for binomial
/// mixtures).
std::vector<double> belief_expectation(const BeliefDistribution& belief, std::size_t dim, const VectorIntegrand& f,
                                       double resolution, const QuadratureOptions& opts = {});

/// Scalar convenience wrapper.
double belief_expectation(const BeliefDistribution& belief, const std::function<double(double)>& f,
                          double resolution, const QuadratureOptions& opts = {});

}  // namespace fairvote
