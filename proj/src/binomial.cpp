#include "fairvote/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

namespace fairvote::binomial {

double log_choose(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    const auto dn = static_cast<double>(n), dk = static_cast<double>(k);
    return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

double log_pmf(std::int64_t n, std::int64_t k, double p) {
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    if (k < 0 || k > n) return ninf;
    if (p <= 0.0) return k == 0 ? 0.0 : ninf;
    if (p >= 1.0) return k == n ? 0.0 : ninf;
    const auto dk = static_cast<double>(k), dm = static_cast<double>(n - k);
    return log_choose(n, k) + dk * std::log(p) + dm * std::log1p(-p);
}

Window pmf_window(std::int64_t n, double p) {
    Window w;
    if (p <= 0.0 || p >= 1.0) {
        w.k_lo = p <= 0.0 ? 0 : n;
        w.pmf = {1.0};
        return w;
    }
    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(mean * (1.0 - p));
    const double span = 40.0 * sd + 40.0;
    const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(mean - span)));
    const auto hi = std::min<std::int64_t>(n, static_cast<std::int64_t>(std::ceil(mean + span)));
    w.k_lo = lo;
    w.pmf.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    // Anchor at the mode, then walk outward with the ratio recurrence
    // P(k+1)/P(k) = (n-k)/(k+1) * p/(1-p).
    const auto mode = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * p)), lo, hi);
    const double odds = p / (1.0 - p);
    auto at = [&](std::int64_t k) -> double& { return w.pmf[static_cast<std::size_t>(k - lo)]; };
    at(mode) = std::exp(log_pmf(n, mode, p));
    for (std::int64_t k = mode; k < hi; ++k)
        at(k + 1) = at(k) * odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
    for (std::int64_t k = mode; k > lo; --k)
        at(k - 1) = at(k) / odds * static_cast<double>(k) / static_cast<double>(n - k + 1);
    return w;
}

double cdf(std::int64_t n, std::int64_t m, double p) {
    if (m < 0) return 0.0;
    if (m >= n) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    // P(K <= m) = 1 - I_p(m+1, n-m)
    return boost::math::ibetac(static_cast<double>(m + 1), static_cast<double>(n - m), p);
}

double expected_abs_total(std::int64_t n, double p) {
    // E|S| is symmetric under p -> 1-p; work with p >= 1/2 so the tail term is small.
    if (p < 0.5) p = 1.0 - p;
    const auto dn = static_cast<double>(n);
    if (p >= 1.0) return dn;
    // E|S| = E S + 2 E[(n - 2K) 1{K <= m}],  m = largest k with 2k < n.
    const std::int64_t m = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
    // E[K 1{K <= m}] = n p P(K' <= m - 1), K' ~ Bin(n - 1, p).
    const double lower = dn * cdf(n, m, p) - 2.0 * dn * p * cdf(n - 1, m - 1, p);
    return dn * (2.0 * p - 1.0) + 2.0 * std::max(lower, 0.0);
}

double mean_abs_deviation(std::int64_t n, double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    const auto dn = static_cast<double>(n);
    // E|K - np| = 2 v C(n, v) p^v q^(n - v + 1),  v = floor(np) + 1.
    const auto v = static_cast<std::int64_t>(std::floor(dn * p)) + 1;
    if (v > n) return 0.0;
    const double lg = log_choose(n, v) + static_cast<double>(v) * std::log(p) +
                      static_cast<double>(n - v + 1) * std::log1p(-p);
    return 2.0 * static_cast<double>(v) * std::exp(lg);
}

}  // namespace fairvote::binomial
