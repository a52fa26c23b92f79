#include "fairvote/weights.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairvote/measures.hpp"
#include "fairvote/parallel.hpp"

namespace fairvote {

Quota Quota::qualified(double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("council quota q must lie in (0, 1)");
    return Quota{q};
}

void CouncilSpec::validate() const {
    if (states.empty()) throw DomainError("council needs at least one state");
    std::set<std::string> names;
    for (const auto& s : states) {
        if (s.name.empty()) throw DomainError("state names must be non-empty");
        if (!names.insert(s.name).second) throw DomainError("duplicate state name: " + s.name);
        if (s.population < 1) throw DomainError("state " + s.name + " needs population >= 1");
    }
    if (quota.q && !(*quota.q > 0.0 && *quota.q < 1.0)) throw DomainError("council quota q must lie in (0, 1)");
}

Population CouncilSpec::total_population() const {
    Population t = 0;
    for (const auto& s : states) t += s.population;
    return t;
}

WeightVector WeightVector::normalized() const {
    WeightVector out = *this;
    const double mx = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    if (mx > 0.0)
        for (auto& v : out.values) v /= mx;
    return out;
}

void WeightVector::validate(std::size_t expected) const {
    if (values.size() != expected) throw DomainError("weight vector length must equal the number of states");
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0) throw DomainError("weights must be finite and >= 0");
}

std::string to_string(DeltaMode m) {
    switch (m) {
        case DeltaMode::Exact: return "exact";
        case DeltaMode::SemiExact: return "semiexact";
        case DeltaMode::MonteCarlo: return "montecarlo";
    }
    return "unknown";
}

OptimalWeights optimal_weights(const CouncilSpec& council, Population exact_budget, std::int64_t mc_samples,
                               const McOptions& mc) {
    council.validate();
    OptimalWeights out;
    for (std::size_t i = 0; i < council.states.size(); ++i) {
        const auto& s = council.states[i];
        MarginEstimate m;
        if (s.population <= exact_budget) {
            m = expected_margin_exact(s.model, s.population, exact_budget);
        } else {
            McOptions opts = mc;
            opts.seed = mc.seed + i;
            m = expected_margin_mc(s.model, s.population, mc_samples, opts);
        }
        out.expected_margins.push_back(m);
        out.raw.values.push_back(0.5 * m.value);
    }
    out.normalized = out.raw.normalized();
    return out;
}

WeightVector deficit_minimizing_weights(const CouncilSpec& council) {
    council.validate();
    // Normal equations: (I - diag(p^2) + p p^T) w = b, solved by Sherman-Morrison.
    const std::size_t m = council.states.size();
    std::vector<double> b(m), p(m), d(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto mom = state_moments(council.states[i].model, council.states[i].population);
        b[i] = mom.expected_margin;
        p[i] = mom.tie_probability;
        d[i] = 1.0 - p[i] * p[i];
    }
    double ptdb = 0.0, ptdp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        ptdb += p[i] * b[i] / d[i];
        ptdp += p[i] * p[i] / d[i];
    }
    WeightVector w;
    w.values.resize(m);
    for (std::size_t i = 0; i < m; ++i) w.values[i] = (b[i] - p[i] * ptdb / (1.0 + ptdp)) / d[i];
    return w;
}

double delta_from_moments(const std::vector<StateMoments>& moments, const WeightVector& weights) {
    double diag = 0.0, tie_sum = 0.0, tie_sq = 0.0;
    for (std::size_t i = 0; i < moments.size(); ++i) {
        const auto& mo = moments[i];
        const double w = weights[i];
        diag += mo.second_moment - 2.0 * w * mo.expected_margin + w * w;
        // E(S - w chi(S)) = w P(S = 0) since E S = 0 and E chi(S) = -P(S = 0).
        const double mean = w * mo.tie_probability;
        tie_sum += mean;
        tie_sq += mean * mean;
    }
    return diag + tie_sum * tie_sum - tie_sq;
}

namespace {

DeltaEstimate delta_exact(const CouncilSpec& council, const WeightVector& w) {
    if (council.total_population() > kDeltaEnumerationCap)
        throw DomainError("exact deficit enumeration is limited to total population <= 20");
    struct StateTable {
        std::vector<double> prob;
        std::vector<std::int64_t> total;
    };
    std::vector<StateTable> tables;
    for (const auto& s : council.states) {
        const int n = static_cast<int>(s.population);
        StateTable t;
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            const auto o = Outcome::from_bits(mask, n);
            t.prob.push_back(pmf_exact(s.model, o));
            t.total.push_back(o.total());
        }
        tables.push_back(std::move(t));
    }
    // Mixed-radix walk over every joint outcome.
    std::vector<std::size_t> idx(tables.size(), 0);
    double sum = 0.0;
    while (true) {
        double prob = 1.0, pop = 0.0, council_vote = 0.0;
        for (std::size_t i = 0; i < tables.size(); ++i) {
            prob *= tables[i].prob[idx[i]];
            const auto s = static_cast<double>(tables[i].total[idx[i]]);
            pop += s;
            council_vote += w[i] * majority_sign(s);
        }
        sum += prob * (pop - council_vote) * (pop - council_vote);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == tables[k].prob.size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return {sum, DeltaMode::Exact, 0.0};
}

DeltaEstimate delta_mc(const CouncilSpec& council, const WeightVector& w, const DeltaBudget& budget) {
    if (budget.trials < 2) throw DomainError("Monte Carlo deficit needs at least 2 trials");
    std::vector<ModelSampler> samplers;
    for (const auto& s : council.states) samplers.emplace_back(s.model, s.population);
    const auto parts = run_partitioned<RunningStats>(budget.trials, budget.mc.seed, budget.mc.workers,
                                                     [&](std::int64_t share, RngStream& rng) {
                                                         RunningStats st;
                                                         for (std::int64_t t = 0; t < share; ++t) {
                                                             double pop = 0.0, cv = 0.0;
                                                             for (std::size_t i = 0; i < samplers.size(); ++i) {
                                                                 const auto s = static_cast<double>(samplers[i].draw_total(rng));
                                                                 pop += s;
                                                                 cv += w[i] * majority_sign(s);
                                                             }
                                                             st.add((pop - cv) * (pop - cv));
                                                         }
                                                         return st;
                                                     });
    RunningStats total;
    for (const auto& p : parts) total.merge(p);
    return {total.mean, DeltaMode::MonteCarlo, total.std_error()};
}

}  // namespace

DeltaEstimate delta(const CouncilSpec& council, const WeightVector& weights, DeltaMode mode, const DeltaBudget& budget) {
    council.validate();
    weights.validate(council.size());
    switch (mode) {
        case DeltaMode::Exact: return delta_exact(council, weights);
        case DeltaMode::MonteCarlo: return delta_mc(council, weights, budget);
        case DeltaMode::SemiExact: break;
    }
    std::vector<StateMoments> moments;
    for (const auto& s : council.states) moments.push_back(state_moments(s.model, s.population));
    return {delta_from_moments(moments, weights), DeltaMode::SemiExact, 0.0};
}

bool MinimizerReport::all_perturbations_increase() const {
    return std::all_of(coordinates.begin(), coordinates.end(), [](const auto& c) { return c.perturbations_increase; });
}

bool MinimizerReport::all_vertices_match() const {
    return std::all_of(coordinates.begin(), coordinates.end(), [](const auto& c) { return c.vertex_matches; });
}

MinimizerReport verify_minimizer(const CouncilSpec& council, const WeightVector& w_star, double step) {
    if (!(step > 0.0)) throw DomainError("minimizer check needs step > 0");
    council.validate();
    w_star.validate(council.size());
    MinimizerReport rep;
    rep.step = step;
    rep.method = council.total_population() <= kDeltaEnumerationCap ? DeltaMode::Exact : DeltaMode::SemiExact;

    std::vector<StateMoments> moments;
    for (const auto& s : council.states) moments.push_back(state_moments(s.model, s.population));
    auto eval = [&](const WeightVector& w) {
        return rep.method == DeltaMode::Exact ? delta(council, w, DeltaMode::Exact).value : delta_from_moments(moments, w);
    };

    const double center = eval(w_star);
    for (std::size_t i = 0; i < council.size(); ++i) {
        CoordinateCheck c;
        c.state = i;
        c.delta_center = center;
        WeightVector wm = w_star, wp = w_star;
        wm.values[i] = std::max(0.0, wm.values[i] - step);
        wp.values[i] += step;
        c.delta_minus = eval(wm);
        c.delta_plus = eval(wp);
        c.perturbations_increase = c.delta_minus > center && c.delta_plus > center;
        // Along coordinate i, Delta is quadratic with unit leading coefficient:
        // dDelta/dw_i = 2 (w_i - b_i + p_i sum_{j != i} p_j w_j).
        double cross = 0.0;
        for (std::size_t j = 0; j < council.size(); ++j)
            if (j != i) cross += moments[j].tie_probability * w_star[j];
        c.vertex = moments[i].expected_margin - moments[i].tie_probability * cross;
        c.vertex_matches = std::abs(c.vertex - w_star[i]) <= 1e-9;
        rep.coordinates.push_back(c);
    }
    return rep;
}

}  // namespace fairvote
