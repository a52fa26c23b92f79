#include "fairvote/estimators.hpp"

#include <cmath>
#include <numbers>

#include "fairvote/binomial.hpp"
#include "fairvote/commonbelief.hpp"
#include "fairvote/meanfield.hpp"
#include "fairvote/parallel.hpp"
#include "fairvote/quadrature.hpp"

namespace fairvote {
namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

void check_budget(Population n, Population budget) {
    if (n < 1) throw DomainError("expected margin needs N >= 1");
    if (n > budget) throw DomainError("N exceeds the exact-computation budget");
}

double independent_expected_margin(Population n) {
    // sum_k |2k - N| C(N, k) 2^-N, terms evaluated in log space.
    const double log_half_n = -static_cast<double>(n) * std::numbers::ln2;
    double e = 0.0;
    for (Population k = 0; k < n - k; ++k) {
        const double w = std::exp(binomial::log_choose(n, k) + log_half_n);
        e += 2.0 * static_cast<double>(n - 2 * k) * w;
    }
    return e;
}

double resolution_for(Population n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

}  // namespace

MarginEstimate expected_margin_exact(const VotingModel& model, Population n, Population budget) {
    check_budget(n, budget);
    const double value = std::visit(
        [n](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Independent>) {
                return independent_expected_margin(n);
            } else if constexpr (std::is_same_v<T, CommonBelief>) {
                if (m.belief.is_point_mass_zero()) return independent_expected_margin(n);
                return belief_expectation(
                    m.belief, [n](double zeta) { return binomial::expected_abs_total(n, 0.5 * (1.0 + zeta)); },
                    resolution_for(n));
            } else {
                return magnetization_pmf(m.coupling, n).expected_abs();
            }
        },
        model.variant());
    return MarginEstimate::exact(value);
}

MarginEstimate expected_margin_mc(const VotingModel& model, Population n, std::int64_t samples, RngStream& rng) {
    if (samples < 2) throw DomainError("Monte Carlo estimate needs at least 2 samples");
    const ModelSampler sampler(model, n);
    RunningStats stats;
    for (std::int64_t i = 0; i < samples; ++i) stats.add(static_cast<double>(std::llabs(sampler.draw_total(rng))));
    return {stats.mean, stats.std_error(), EstimateMethod::MonteCarlo, stats.count};
}

MarginEstimate expected_margin_mc(const VotingModel& model, Population n, std::int64_t samples, const McOptions& opts) {
    if (samples < 2) throw DomainError("Monte Carlo estimate needs at least 2 samples");
    const ModelSampler sampler(model, n);
    const auto parts = run_partitioned<RunningStats>(samples, opts.seed, opts.workers,
                                                     [&sampler](std::int64_t share, RngStream& rng) {
                                                         RunningStats s;
                                                         for (std::int64_t i = 0; i < share; ++i)
                                                             s.add(static_cast<double>(std::llabs(sampler.draw_total(rng))));
                                                         return s;
                                                     });
    RunningStats stats;
    for (const auto& p : parts) stats.merge(p);
    return {stats.mean, stats.std_error(), EstimateMethod::MonteCarlo, stats.count};
}

MarginEstimate expected_margin_asymptotic(const VotingModel& model, Population n) {
    if (n < 1) throw DomainError("asymptotic margin needs N >= 1");
    const double root_n = std::sqrt(static_cast<double>(n));
    return std::visit(
        [&](const auto& m) -> MarginEstimate {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Independent>) {
                return MarginEstimate::asymptotic(kSqrt2OverPi * root_n);
            } else if constexpr (std::is_same_v<T, CommonBelief>) {
                const double mb = mu_bar(m.belief);
                if (mb > 0.0) return MarginEstimate::asymptotic(static_cast<double>(n) * mb);
                return MarginEstimate::asymptotic(kSqrt2OverPi * root_n);
            } else {
                return asymptotic_weight_meanfield(m.coupling, n);
            }
        },
        model.variant());
}

StateMoments state_moments(const VotingModel& model, Population n, Population budget) {
    check_budget(n, budget);
    StateMoments out;
    const auto dn = static_cast<double>(n);
    if (model.is<MeanField>()) {
        const auto pmf = magnetization_pmf(model.as<MeanField>().coupling, n);
        out.second_moment = pmf.second_moment();
        out.expected_margin = pmf.expected_abs();
        out.tie_probability = pmf.at(0);
        return out;
    }
    const BeliefDistribution belief =
        model.is<CommonBelief>() ? model.as<CommonBelief>().belief : BeliefDistribution::point_mass_zero();
    // E S^2 = N + N (N - 1) E[Z^2]: diagonal terms plus pair covariances.
    out.second_moment = dn + dn * (dn - 1.0) * second_moment(belief);
    out.expected_margin = expected_margin_exact(model, n, budget).value;
    if (n % 2 == 0) {
        out.tie_probability = belief_expectation(
            belief, [n](double zeta) { return std::exp(binomial::log_pmf(n, n / 2, 0.5 * (1.0 + zeta))); },
            resolution_for(n));
    }
    return out;
}

}  // namespace fairvote
