#include "fairvote/council.hpp"

#include <cmath>

#include "fairvote/measures.hpp"
#include "fairvote/parallel.hpp"

namespace fairvote {

Spin state_delegate_vote(const Outcome& state_outcome) noexcept {
    return majority_sign(static_cast<double>(state_outcome.total()));
}

Decision council_decision(const std::vector<Spin>& delegate_votes, const WeightVector& weights, const Quota& quota) {
    if (delegate_votes.size() != weights.size())
        throw DomainError("delegate votes and weights must have the same length");
    double vote = 0.0, total_weight = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        vote += weights[i] * delegate_votes[i];
        total_weight += weights[i];
    }
    if (!quota.q) return vote > 0.0 ? Decision::Accept : Decision::Reject;
    return vote >= (2.0 * *quota.q - 1.0) * total_weight ? Decision::Accept : Decision::Reject;
}

namespace {

struct SimAccumulator {
    RunningStats sq_gap;
    RunningStats disagree;
    RunningStats abs_popular;
    std::vector<RunningStats> yes;
    std::vector<double> cross;  // sum xi_i xi_j
};

}  // namespace

SimulationResult simulate(const CouncilSpec& council, const WeightVector& weights, std::int64_t trials,
                          const McOptions& mc) {
    council.validate();
    weights.validate(council.size());
    if (trials < 1) throw DomainError("simulation needs at least 1 trial");
    const std::size_t m = council.size();
    std::vector<ModelSampler> samplers;
    for (const auto& s : council.states) samplers.emplace_back(s.model, s.population);

    const auto parts = run_partitioned<SimAccumulator>(trials, mc.seed, mc.workers, [&](std::int64_t share, RngStream& rng) {
        SimAccumulator acc;
        acc.yes.resize(m);
        acc.cross.assign(m * m, 0.0);
        std::vector<Spin> xi(m);
        for (std::int64_t t = 0; t < share; ++t) {
            double pop = 0.0, cv = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const auto s = static_cast<double>(samplers[i].draw_total(rng));
                xi[i] = majority_sign(s);
                pop += s;
                cv += weights[i] * xi[i];
            }
            acc.sq_gap.add((pop - cv) * (pop - cv));
            const bool accepted = council_decision(xi, weights, council.quota) == Decision::Accept;
            acc.disagree.add(accepted != (majority_sign(pop) > 0) ? 1.0 : 0.0);
            acc.abs_popular.add(std::abs(pop));
            for (std::size_t i = 0; i < m; ++i) {
                acc.yes[i].add(xi[i] > 0 ? 1.0 : 0.0);
                for (std::size_t j = 0; j < m; ++j) acc.cross[i * m + j] += static_cast<double>(xi[i] * xi[j]);
            }
        }
        return acc;
    });

    SimAccumulator total;
    total.yes.resize(m);
    total.cross.assign(m * m, 0.0);
    for (const auto& p : parts) {
        total.sq_gap.merge(p.sq_gap);
        total.disagree.merge(p.disagree);
        total.abs_popular.merge(p.abs_popular);
        for (std::size_t i = 0; i < m; ++i) total.yes[i].merge(p.yes[i]);
        if (!p.cross.empty())
            for (std::size_t k = 0; k < m * m; ++k) total.cross[k] += p.cross[k];
    }

    SimulationResult r;
    r.trials = trials;
    r.delta = {total.sq_gap.mean, DeltaMode::MonteCarlo, total.sq_gap.std_error()};
    r.disagreement_rate = total.disagree.mean;
    r.disagreement_std_error = total.disagree.std_error();
    r.mean_popular_margin = total.abs_popular.mean;
    const auto dt = static_cast<double>(trials);
    r.delegate_covariance.resize(m * m);
    r.delegate_covariance_std_error.resize(m * m);
    for (std::size_t i = 0; i < m; ++i) r.per_state_yes_rates.push_back(total.yes[i].mean);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double mi = 2.0 * total.yes[i].mean - 1.0, mj = 2.0 * total.yes[j].mean - 1.0;
            const double cov = total.cross[i * m + j] / dt - mi * mj;
            r.delegate_covariance[i * m + j] = cov;
            // xi are +-1, so Var(xi_i xi_j) <= 1; use the plug-in variance of the product.
            const double prod_mean = total.cross[i * m + j] / dt;
            r.delegate_covariance_std_error[i * m + j] = std::sqrt(std::max(0.0, 1.0 - prod_mean * prod_mean) / dt);
        }
    }
    return r;
}

double ray_scale(const std::vector<StateMoments>& moments, const std::vector<double>& u) {
    // Delta(c u) = A - 2 c B + c^2 Q.
    double b = 0.0, uu = 0.0, tie = 0.0, tie_sq = 0.0;
    for (std::size_t i = 0; i < moments.size(); ++i) {
        b += u[i] * moments[i].expected_margin;
        uu += u[i] * u[i];
        const double t = u[i] * moments[i].tie_probability;
        tie += t;
        tie_sq += t * t;
    }
    const double q = uu + tie * tie - tie_sq;
    return q > 0.0 ? b / q : 0.0;
}

std::vector<RuleComparison> compare_weight_rules(const CouncilSpec& council, std::int64_t trials, const McOptions& mc) {
    council.validate();
    std::vector<StateMoments> moments;
    for (const auto& s : council.states) moments.push_back(state_moments(s.model, s.population));

    std::vector<std::pair<std::string, std::vector<double>>> rules;
    {
        std::vector<double> opt, root, lin, eq;
        for (std::size_t i = 0; i < council.size(); ++i) {
            const auto n = static_cast<double>(council.states[i].population);
            opt.push_back(0.5 * moments[i].expected_margin);
            root.push_back(std::sqrt(n));
            lin.push_back(n);
            eq.push_back(1.0);
        }
        rules = {{"optimal", opt}, {"sqrt_population", root}, {"population", lin}, {"equal", eq}};
    }

    std::vector<RuleComparison> out;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        RuleComparison cmp;
        cmp.rule = rules[r].first;
        cmp.scale = ray_scale(moments, rules[r].second);
        for (double u : rules[r].second) cmp.weights.values.push_back(cmp.scale * u);
        cmp.delta_semi_exact = delta_from_moments(moments, cmp.weights);
        // Same seed for every rule: common random numbers sharpen the comparison.
        cmp.simulation = simulate(council, cmp.weights, trials, mc);
        out.push_back(std::move(cmp));
    }
    return out;
}

}  // namespace fairvote
