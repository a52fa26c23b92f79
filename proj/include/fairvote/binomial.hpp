#pragma once

#include <cstdint>
#include <vector>

namespace fairvote::binomial {

/// log C(n, k) via lgamma.
double log_choose(std::int64_t n, std::int64_t k);

/// log P(K = k) for K ~ Bin(n, p); -inf outside the support.
double log_pmf(std::int64_t n, std::int64_t k, double p);

/// P(K = k) for k in [k_lo, k_lo + pmf.size()); covers all but ~e^-800 of the mass.
struct Window {
    std::int64_t k_lo = 0;
    std::vector<double> pmf;
};
Window pmf_window(std::int64_t n, double p);

/// P(K <= m).
double cdf(std::int64_t n, std::int64_t m, double p);

/// E|2K - n|, i.e. the expected margin of n independent voters with
/// P(yes) = p. Closed form through regularized incomplete beta functions.
double expected_abs_total(std::int64_t n, double p);

/// E|K - n p| (de Moivre's mean absolute deviation formula).
double mean_abs_deviation(std::int64_t n, double p);

}  // namespace fairvote::binomial
