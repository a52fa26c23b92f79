#include "fairvote/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fairvote/binomial.hpp"
#include "fairvote/quadrature.hpp"

namespace fairvote {
namespace {

double log_sum_exp_normalize(std::vector<double>& logw) {
    const double mx = *std::max_element(logw.begin(), logw.end());
    double z = 0.0;
    for (double& l : logw) {
        l = std::exp(l - mx);
        z += l;
    }
    for (double& l : logw) l /= z;
    return mx + std::log(z);
}

double resolution_for(Population n) { return 1.0 / std::sqrt(static_cast<double>(std::max<Population>(n, 1))); }

}  // namespace

double pmf_exact(const VotingModel& model, const Outcome& outcome) {
    const Population n = outcome.size();
    if (n < 1) throw DomainError("pmf_exact needs a non-empty outcome");
    if (n > kEnumerationCap) throw DomainError("pmf_exact is limited to N <= 24 (enumeration guard)");
    const std::int64_t k = affirmative_count(outcome);
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Independent>) {
                return std::ldexp(1.0, -static_cast<int>(n));
            } else if constexpr (std::is_same_v<T, CommonBelief>) {
                const auto kk = static_cast<double>(k), rest = static_cast<double>(n - k);
                return belief_expectation(
                    m.belief,
                    [&](double zeta) {
                        const double p = 0.5 * (1.0 + zeta);
                        return std::pow(p, kk) * std::pow(1.0 - p, rest);
                    },
                    resolution_for(n));
            } else {
                // Every outcome with the same total has the same weight.
                const auto pmf = magnetization_pmf(m.coupling, n);
                double choose = 1.0;
                const std::int64_t kk = std::min(k, n - k);
                for (std::int64_t i = 1; i <= kk; ++i) choose = choose * static_cast<double>(n - kk + i) / static_cast<double>(i);
                return pmf.by_yes_count()[static_cast<std::size_t>(k)] / choose;
            }
        },
        model.variant());
}

MagnetizationPmf::MagnetizationPmf(Population n, std::vector<double> by_yes_count)
    : n_(n), p_(std::move(by_yes_count)) {
    if (n < 1 || p_.size() != static_cast<std::size_t>(n + 1))
        throw DomainError("magnetization pmf needs N >= 1 and N + 1 probabilities");
}

double MagnetizationPmf::at(std::int64_t s) const noexcept {
    if (s < -n_ || s > n_ || ((s + n_) % 2) != 0) return 0.0;
    return p_[static_cast<std::size_t>((s + n_) / 2)];
}

double MagnetizationPmf::expected_abs() const noexcept {
    double e = 0.0;
    for (std::size_t k = 0; k < p_.size(); ++k) e += std::abs(2.0 * static_cast<double>(k) - static_cast<double>(n_)) * p_[k];
    return e;
}

double MagnetizationPmf::second_moment() const noexcept {
    double e = 0.0;
    for (std::size_t k = 0; k < p_.size(); ++k) {
        const double s = 2.0 * static_cast<double>(k) - static_cast<double>(n_);
        e += s * s * p_[k];
    }
    return e;
}

MagnetizationPmf magnetization_pmf(double coupling, Population n) {
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw DomainError("magnetization_pmf needs J >= 0");
    if (n < 1) throw DomainError("magnetization_pmf needs N >= 1");
    const double beta = n >= 2 ? coupling / (2.0 * static_cast<double>(n - 1)) : 0.0;
    std::vector<double> logw(static_cast<std::size_t>(n + 1));
    for (Population k = 0; k <= n; ++k) {
        const double s = 2.0 * static_cast<double>(k) - static_cast<double>(n);
        logw[static_cast<std::size_t>(k)] = binomial::log_choose(n, k) + beta * s * s;
    }
    log_sum_exp_normalize(logw);
    // Enforce exact symmetry P(s) = P(-s).
    for (Population k = 0; k < n - k; ++k) {
        auto& lo = logw[static_cast<std::size_t>(k)];
        auto& hi = logw[static_cast<std::size_t>(n - k)];
        const double avg = 0.5 * (lo + hi);
        lo = hi = avg;
    }
    return MagnetizationPmf(n, std::move(logw));
}

MagnetizationPmf total_spin_pmf(const VotingModel& model, Population n) {
    if (n < 1) throw DomainError("total_spin_pmf needs N >= 1");
    const auto size = static_cast<std::size_t>(n + 1);
    if (model.is<MeanField>()) return magnetization_pmf(model.as<MeanField>().coupling, n);
    const BeliefDistribution belief =
        model.is<CommonBelief>() ? model.as<CommonBelief>().belief : BeliefDistribution::point_mass_zero();
    auto law = belief_expectation(
        belief, size,
        [n](double zeta, std::span<double> out) {
            const auto w = binomial::pmf_window(n, 0.5 * (1.0 + zeta));
            for (std::size_t i = 0; i < w.pmf.size(); ++i) out[static_cast<std::size_t>(w.k_lo) + i] = w.pmf[i];
        },
        resolution_for(n));
    for (std::size_t k = 0; k < size / 2; ++k) {
        const double avg = 0.5 * (law[k] + law[size - 1 - k]);
        law[k] = law[size - 1 - k] = avg;
    }
    return MagnetizationPmf(n, std::move(law));
}

ModelSampler::ModelSampler(VotingModel model, Population n) : model_(std::move(model)), n_(n) {
    if (n < 1) throw DomainError("sampler needs N >= 1");
    if (model_.is<MeanField>()) {
        const auto pmf = magnetization_pmf(model_.as<MeanField>().coupling, n);
        cdf_.resize(pmf.by_yes_count().size());
        std::partial_sum(pmf.by_yes_count().begin(), pmf.by_yes_count().end(), cdf_.begin());
        cdf_.back() = 1.0;
    }
}

double ModelSampler::draw_belief(RngStream& rng) const {
    if (model_.is<CommonBelief>()) return sample_belief(model_.as<CommonBelief>().belief, rng);
    return 0.0;
}

std::int64_t ModelSampler::draw_yes_count(RngStream& rng) const {
    if (model_.is<MeanField>()) {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::int64_t>(it - cdf_.begin(), n_);
    }
    const double p = 0.5 * (1.0 + draw_belief(rng));
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n_;
    std::binomial_distribution<std::int64_t> bin(n_, p);
    return bin(rng);
}

std::int64_t ModelSampler::draw_total(RngStream& rng) const { return 2 * draw_yes_count(rng) - n_; }

Outcome ModelSampler::draw_outcome(RngStream& rng) const {
    const auto n = static_cast<std::size_t>(n_);
    std::vector<Spin> votes(n, Spin{-1});
    if (model_.is<MeanField>()) {
        const auto k = static_cast<std::size_t>(draw_yes_count(rng));
        if (2 * k <= n) {
            // Partial Fisher-Yates over indices choosing k yes-voters.
            std::vector<std::uint32_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0u);
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                std::swap(idx[i], idx[j]);
                votes[idx[i]] = Spin{1};
            }
        } else {
            std::fill(votes.begin(), votes.end(), Spin{1});
            std::vector<std::uint32_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0u);
            for (std::size_t i = 0; i < n - k; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                std::swap(idx[i], idx[j]);
                votes[idx[i]] = Spin{-1};
            }
        }
    } else if (model_.is<Independent>()) {
        for (std::size_t i = 0; i < n; i += 64) {
            const std::uint64_t bits = rng();
            const std::size_t len = std::min<std::size_t>(64, n - i);
            for (std::size_t b = 0; b < len; ++b) votes[i + b] = ((bits >> b) & 1u) ? Spin{1} : Spin{-1};
        }
    } else {
        const double p = 0.5 * (1.0 + draw_belief(rng));
        for (auto& v : votes) v = rng.uniform01() < p ? Spin{1} : Spin{-1};
    }
    return Outcome(std::move(votes));
}

Outcome sample(const VotingModel& model, Population n, RngStream& rng) {
    return ModelSampler(model, n).draw_outcome(rng);
}

double field_to_belief(double h) {
    if (std::isnan(h)) throw DomainError("field h must not be NaN");
    return std::tanh(h);
}

double belief_to_field(double zeta) {
    if (!(std::abs(zeta) < 1.0)) throw DomainError("belief_to_field needs |zeta| < 1");
    return std::atanh(zeta);
}

double sample_belief(const BeliefDistribution& belief, RngStream& rng) {
    return std::visit(
        [&rng](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BeliefDistribution::PointMassZero>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, BeliefDistribution::UniformSymmetric>) {
                return s.a * (2.0 * rng.uniform01() - 1.0);
            } else if constexpr (std::is_same_v<T, BeliefDistribution::DiscreteSymmetric>) {
                const double u = rng.uniform01();
                double c = 0.0;
                for (const auto& at : s.atoms) {
                    c += at.weight;
                    if (u < c) return at.zeta;
                }
                return s.atoms.back().zeta;
            } else {
                // Inverse CDF of the piecewise-linear density.
                const auto& x = s.nodes;
                const auto& d = s.densities;
                double u = rng.uniform01();
                for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                    const double width = x[i + 1] - x[i];
                    const double mass = 0.5 * (d[i] + d[i + 1]) * width;
                    if (u >= mass && i + 2 < x.size()) {
                        u -= mass;
                        continue;
                    }
                    const double slope = (d[i + 1] - d[i]) / width;
                    double t;
                    if (std::abs(slope) < 1e-14) {
                        t = d[i] > 0.0 ? u / d[i] : 0.5 * width;
                    } else {
                        const double disc = std::max(0.0, d[i] * d[i] + 2.0 * slope * u);
                        t = (-d[i] + std::sqrt(disc)) / slope;
                    }
                    return x[i] + std::clamp(t, 0.0, width);
                }
                return x.back();
            }
        },
        belief.shape());
}

}  // namespace fairvote
