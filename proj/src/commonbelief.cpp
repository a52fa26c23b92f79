#include "fairvote/commonbelief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fairvote/binomial.hpp"
#include "fairvote/measures.hpp"
#include "fairvote/meanfield.hpp"
#include "fairvote/parallel.hpp"
#include "fairvote/quadrature.hpp"

namespace fairvote {
namespace {

double resolution_for(Population n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

// Integral over t in [0, 1] of |poly(t)| where poly(t) = c0 + c1 t + c2 t^2.
double abs_quadratic_integral(double c0, double c1, double c2) {
    std::vector<double> cuts{0.0, 1.0};
    if (std::abs(c2) > 1e-300) {
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc > 0.0) {
            const double sq = std::sqrt(disc);
            // Numerically stable roots.
            const double q = -0.5 * (c1 + std::copysign(sq, c1));
            for (double r : {q / c2, q != 0.0 ? c0 / q : std::numeric_limits<double>::quiet_NaN()})
                if (r > 0.0 && r < 1.0) cuts.push_back(r);
        }
    } else if (std::abs(c1) > 1e-300) {
        const double r = -c0 / c1;
        if (r > 0.0 && r < 1.0) cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    auto antideriv = [&](double t) { return c0 * t + 0.5 * c1 * t * t + c2 * t * t * t / 3.0; };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += std::abs(antideriv(cuts[i + 1]) - antideriv(cuts[i]));
    return total;
}

}  // namespace

BeliefFamily::BeliefFamily(double c_, double beta_) : c(c_), beta(beta_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("belief family needs c > 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("belief family needs beta >= 0");
}

double BeliefFamily::half_width(Population n) const {
    if (n < 1) throw DomainError("belief family needs N >= 1");
    const double a = c * std::pow(static_cast<double>(n), -beta);
    return std::clamp(a, std::numeric_limits<double>::min(), 1.0);
}

double mu_bar(const BeliefDistribution& belief) {
    if (const auto* u = std::get_if<BeliefDistribution::UniformSymmetric>(&belief.shape())) return 0.5 * u->a;
    return belief_expectation(belief, [](double z) { return std::abs(z); }, 1.0);
}

double second_moment(const BeliefDistribution& belief) {
    if (const auto* u = std::get_if<BeliefDistribution::UniformSymmetric>(&belief.shape())) return u->a * u->a / 3.0;
    return belief_expectation(belief, [](double z) { return z * z; }, 1.0);
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Linear: return "linear";
        case Regime::SquareRoot: return "square_root";
        case Regime::Boundary: return "boundary";
    }
    return "unknown";
}

RegimeReport classify_regime(const BeliefFamily& family, double epsilon, const std::vector<Population>& grid,
                             double bound_constant) {
    if (!(epsilon > 0.0)) throw DomainError("regime classification needs epsilon > 0");
    if (grid.empty()) throw DomainError("regime classification needs a non-empty N grid");
    RegimeReport rep;
    for (Population n : grid) rep.mu_bar_by_n.emplace_back(n, mu_bar(family.at(n)));

    std::vector<std::pair<Population, double>> pts = rep.mu_bar_by_n;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](auto& l, auto& r) { return l.first == r.first; }), pts.end());
    if (pts.size() >= 2) {
        rep.slope = fit_power_law(pts).exponent;
    } else {
        rep.slope = -family.beta;
    }

    if (rep.slope >= -0.5 + epsilon) {
        rep.regime = Regime::Linear;
        rep.predicted_exponent = 1.0 + rep.slope;
        rep.bound_holds = std::all_of(pts.begin(), pts.end(), [&](const auto& p) {
            return p.second >= bound_constant * std::pow(static_cast<double>(p.first), -0.5 + epsilon);
        });
    } else if (rep.slope <= -0.5 - epsilon) {
        rep.regime = Regime::SquareRoot;
        rep.predicted_exponent = 0.5;
        rep.bound_holds = std::all_of(pts.begin(), pts.end(), [&](const auto& p) {
            return p.second <= bound_constant * std::pow(static_cast<double>(p.first), -0.5 - epsilon);
        });
    } else {
        rep.regime = Regime::Boundary;
        rep.predicted_exponent = std::numeric_limits<double>::quiet_NaN();
        rep.bound_holds = false;
    }
    return rep;
}

MarginBoundReport margin_bound_check(const BeliefDistribution& belief, Population n, BoundMode mode,
                                     std::int64_t samples, const McOptions& mc) {
    if (n < 1) throw DomainError("margin bound check needs N >= 1");
    MarginBoundReport rep;
    const auto dn = static_cast<double>(n);
    rep.n = n;
    rep.mu_bar = mu_bar(belief);
    rep.bound = 1.0 / std::sqrt(dn);
    if (mode == BoundMode::Exact) {
        rep.mean_abs_over_n = expected_margin_exact(VotingModel::common_belief(belief), n).value / dn;
        rep.coupling_gap =
            belief_expectation(
                belief, [n](double z) { return 2.0 * binomial::mean_abs_deviation(n, 0.5 * (1.0 + z)); },
                resolution_for(n)) /
            dn;
    } else {
        if (samples < 2) throw DomainError("Monte Carlo bound check needs at least 2 samples");
        struct Acc {
            RunningStats margin, coupling;
        };
        const ModelSampler sampler(VotingModel::common_belief(belief), n);
        const auto parts = run_partitioned<Acc>(samples, mc.seed, mc.workers, [&](std::int64_t share, RngStream& rng) {
            Acc acc;
            for (std::int64_t i = 0; i < share; ++i) {
                const double z = sampler.draw_belief(rng);
                const double p = 0.5 * (1.0 + z);
                std::int64_t k = 0;
                if (p >= 1.0) {
                    k = n;
                } else if (p > 0.0) {
                    std::binomial_distribution<std::int64_t> bin(n, p);
                    k = bin(rng);
                }
                const double s = 2.0 * static_cast<double>(k) - dn;
                acc.margin.add(std::abs(s) / dn);
                acc.coupling.add(std::abs(s - dn * z) / dn);
            }
            return acc;
        });
        Acc total;
        for (const auto& p : parts) {
            total.margin.merge(p.margin);
            total.coupling.merge(p.coupling);
        }
        rep.mean_abs_over_n = total.margin.mean;
        rep.coupling_gap = total.coupling.mean;
        rep.std_error = total.margin.std_error();
    }
    rep.gap = std::abs(rep.mean_abs_over_n - rep.mu_bar);
    rep.margin_bound_ok = rep.gap <= rep.bound;
    rep.coupling_bound_ok = rep.coupling_gap <= rep.bound;
    return rep;
}

std::vector<double> mean_vote_law(const BeliefDistribution& belief, Population n) {
    return total_spin_pmf(VotingModel::common_belief(belief), n).by_yes_count();
}

double wasserstein1(const std::vector<double>& law, const BeliefDistribution& belief) {
    if (law.size() < 2) throw DomainError("lattice law needs N >= 1");
    const auto n = static_cast<double>(law.size() - 1);
    const auto& shape = belief.shape();
    const bool piecewise_constant = std::holds_alternative<BeliefDistribution::PointMassZero>(shape) ||
                                    std::holds_alternative<BeliefDistribution::DiscreteSymmetric>(shape);

    std::vector<double> cuts;
    cuts.reserve(law.size() + 8);
    for (std::size_t k = 0; k < law.size(); ++k) cuts.push_back((2.0 * static_cast<double>(k) - n) / n);
    std::visit(
        [&cuts](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BeliefDistribution::PointMassZero>) {
                cuts.push_back(0.0);
            } else if constexpr (std::is_same_v<T, BeliefDistribution::UniformSymmetric>) {
                cuts.push_back(-s.a);
                cuts.push_back(s.a);
            } else if constexpr (std::is_same_v<T, BeliefDistribution::DiscreteSymmetric>) {
                for (const auto& at : s.atoms) cuts.push_back(at.zeta);
            } else {
                cuts.insert(cuts.end(), s.nodes.begin(), s.nodes.end());
            }
        },
        shape);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Lattice CDF is right-continuous with jumps at (2k - N)/N.
    double total = 0.0;
    std::size_t next_atom = 0;
    double lattice_cdf = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double l = cuts[i], r = cuts[i + 1];
        while (next_atom < law.size() && (2.0 * static_cast<double>(next_atom) - n) / n <= l) {
            lattice_cdf += law[next_atom];
            ++next_atom;
        }
        const double width = r - l;
        if (width <= 0.0) continue;
        if (piecewise_constant) {
            total += std::abs(lattice_cdf - belief.cdf(0.5 * (l + r))) * width;
            continue;
        }
        // Belief CDF is at most quadratic between cuts: interpolate through l, mid, r.
        const double f0 = belief.cdf(l) - lattice_cdf;
        const double fm = belief.cdf(0.5 * (l + r)) - lattice_cdf;
        const double f1 = belief.cdf(r) - lattice_cdf;
        const double c2 = 2.0 * f1 - 4.0 * fm + 2.0 * f0;
        const double c1 = 4.0 * fm - f1 - 3.0 * f0;
        total += abs_quadratic_integral(f0, c1, c2) * width;
    }
    return total;
}

double distribution_distance(const BeliefDistribution& belief, Population n) {
    if (n < 1) throw DomainError("distribution distance needs N >= 1");
    return wasserstein1(mean_vote_law(belief, n), belief);
}

}  // namespace fairvote
