// fairvote: batch runner for fair council weights.
//
// Every subcommand resolves a single JSON config (file given by --config,
// then overridden by flags), computes one table and writes it as CSV or JSON
// lines. The resolved config and wall-clock timestamps go to a separate
// metadata document so that data outputs are byte-identical across reruns.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fairvote/commonbelief.hpp"
#include "fairvote/config.hpp"
#include "fairvote/council.hpp"
#include "fairvote/estimators.hpp"
#include "fairvote/meanfield.hpp"
#include "fairvote/measures.hpp"
#include "fairvote/rng.hpp"
#include "fairvote/weights.hpp"

namespace {

using namespace fairvote;
using config::ConfigError;
using config::json;
using config::Table;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitSelftest = 3;

constexpr const char* kDefaultScalingGrid = "256:16384:x2";
constexpr const char* kDefaultDistributionGrid = "100,1000,10000";

// ---------------------------------------------------------------- config access

bool has(const json& cfg, const std::string& key) { return cfg.contains(key) && !cfg.at(key).is_null(); }

double number(const json& cfg, const std::string& key) {
    if (!has(cfg, key)) throw ConfigError("missing required value '" + key + "' (flag --" + key + " or config key)");
    if (!cfg.at(key).is_number()) throw ConfigError("'" + key + "' must be a number");
    return cfg.at(key).get<double>();
}

double number_or(const json& cfg, const std::string& key, double fallback) {
    return has(cfg, key) ? number(cfg, key) : fallback;
}

std::int64_t integer(const json& cfg, const std::string& key) {
    const double v = number(cfg, key);
    if (v != std::floor(v)) throw ConfigError("'" + key + "' must be an integer");
    return static_cast<std::int64_t>(v);
}

std::int64_t integer_or(const json& cfg, const std::string& key, std::int64_t fallback) {
    return has(cfg, key) ? integer(cfg, key) : fallback;
}

std::string text_or(const json& cfg, const std::string& key, const std::string& fallback) {
    if (!has(cfg, key)) return fallback;
    if (!cfg.at(key).is_string()) throw ConfigError("'" + key + "' must be a string");
    return cfg.at(key).get<std::string>();
}

McOptions mc_options(const json& cfg) {
    return {cfg.at("seed").get<std::uint64_t>(), cfg.at("workers").get<unsigned>()};
}

std::int64_t trials(const json& cfg, std::int64_t fallback) {
    const auto t = integer_or(cfg, "trials", fallback);
    if (t < 1) throw ConfigError("--trials must be at least 1");
    return t;
}

std::vector<Population> grid_of(const json& cfg, const std::string& fallback) {
    if (has(cfg, "grid") && cfg.at("grid").is_array()) return cfg.at("grid").get<std::vector<Population>>();
    return config::parse_grid(text_or(cfg, "grid", fallback));
}

CouncilSpec council_of(const json& cfg) {
    if (!has(cfg, "states")) throw ConfigError("this subcommand needs a council config with 'states' (--config)");
    auto council = config::council_from_json(cfg);
    council.validate();
    return council;
}

// Model named by --model (or a model object in the config).
VotingModel model_of(const json& cfg) {
    if (has(cfg, "model") && cfg.at("model").is_object()) return config::model_from_json(cfg.at("model"));
    const std::string kind = text_or(cfg, "model", has(cfg, "J") ? "meanfield" : "independent");
    if (kind == "independent") return VotingModel::independent();
    if (kind == "meanfield") return VotingModel::mean_field(number(cfg, "J"));
    if (kind == "commonbelief") {
        if (has(cfg, "belief")) return VotingModel::common_belief(config::belief_from_json(cfg.at("belief")));
        return VotingModel::common_belief(BeliefDistribution::uniform(number_or(cfg, "a", 1.0)));
    }
    throw ConfigError("--model must be independent, meanfield, commonbelief or straffin (got '" + kind + "')");
}

std::optional<BeliefFamily> family_of(const json& cfg) {
    if (has(cfg, "family")) return config::family_from_json(cfg.at("family"));
    if (text_or(cfg, "model", "") == "straffin") return BeliefFamily(number_or(cfg, "c", 1.0), number(cfg, "beta"));
    return std::nullopt;
}

ModelFamily model_family_of(const json& cfg) {
    if (auto fam = family_of(cfg)) {
        return [f = *fam](Population n) { return VotingModel::common_belief(f.at(n)); };
    }
    const auto model = model_of(cfg);
    return [model](Population) { return model; };
}

std::string join_weights(const WeightVector& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) out += (i ? ";" : "") + config::format_number(w[i]);
    return out;
}

// Weight vector named by --weights: a rule name or an explicit list.
WeightVector weights_of(const json& cfg, const CouncilSpec& council, std::string* label) {
    if (has(cfg, "weights") && cfg.at("weights").is_array()) {
        WeightVector w{cfg.at("weights").get<std::vector<double>>()};
        w.validate(council.size());
        if (label) *label = join_weights(w);
        return w;
    }
    const std::string rule = text_or(cfg, "weights", "optimal");
    if (label) *label = rule;
    if (rule == "optimal") return optimal_weights(council, kExactBudget, trials(cfg, 100'000), mc_options(cfg)).raw;
    if (rule == "minimizer") return deficit_minimizing_weights(council);
    WeightVector w;
    if (rule == "sqrt_population" || rule == "population" || rule == "equal") {
        for (const auto& s : council.states) {
            const auto n = static_cast<double>(s.population);
            w.values.push_back(rule == "equal" ? 1.0 : rule == "population" ? n : std::sqrt(n));
        }
        return w;
    }
    std::stringstream ss(rule);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            w.values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("--weights must be optimal, minimizer, sqrt_population, population, equal or a list "
                              "of numbers (got '" + rule + "')");
        }
    }
    w.validate(council.size());
    return w;
}

// ---------------------------------------------------------------- subcommands

Table cmd_weights(const json& cfg) {
    const auto council = council_of(cfg);
    const auto w = optimal_weights(council, kExactBudget, trials(cfg, 100'000), mc_options(cfg));
    Table t({"state", "population", "model", "expected_margin", "weight_raw", "weight_normalized"});
    for (std::size_t i = 0; i < council.size(); ++i) {
        const auto& s = council.states[i];
        t.add_row({s.name, s.population, s.model.describe(), w.expected_margins[i].value, w.raw[i], w.normalized[i]});
    }
    return t;
}

Table cmd_margin(const json& cfg) {
    const auto family = model_family_of(cfg);
    const std::string method = text_or(cfg, "method", "exact");
    std::vector<Population> ns;
    if (has(cfg, "N")) ns.push_back(integer(cfg, "N"));
    else if (has(cfg, "grid")) ns = grid_of(cfg, "");
    else throw ConfigError("margin needs --N or --grid");
    Table t({"model", "N", "method", "expected_margin", "std_error", "samples", "weight"});
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto model = family(ns[i]);
        MarginEstimate e;
        if (method == "exact") {
            e = expected_margin_exact(model, ns[i]);
        } else if (method == "montecarlo") {
            auto mc = mc_options(cfg);
            mc.seed += i;
            e = expected_margin_mc(model, ns[i], trials(cfg, 100'000), mc);
        } else if (method == "asymptotic") {
            e = expected_margin_asymptotic(model, ns[i]);
        } else {
            throw ConfigError("--method must be exact, montecarlo or asymptotic (got '" + method + "')");
        }
        t.add_row({model.describe(), ns[i], to_string(e.method), e.value, e.std_error, e.samples, 0.5 * e.value});
    }
    return t;
}

Table cmd_delta(const json& cfg) {
    const auto council = council_of(cfg);
    std::string label;
    const auto w = weights_of(cfg, council, &label);
    if (has(cfg, "step")) {
        const auto report = verify_minimizer(council, w, number(cfg, "step"));
        Table t({"state", "weight", "method", "delta_minus", "delta_center", "delta_plus", "vertex",
                 "perturbations_increase", "vertex_matches"});
        for (const auto& c : report.coordinates) {
            t.add_row({council.states[c.state].name, w[c.state], to_string(report.method), c.delta_minus,
                       c.delta_center, c.delta_plus, c.vertex, c.perturbations_increase, c.vertex_matches});
        }
        return t;
    }
    const std::string method = text_or(cfg, "method", "semiexact");
    std::vector<DeltaMode> modes;
    if (method == "exact") modes = {DeltaMode::Exact};
    else if (method == "semiexact") modes = {DeltaMode::SemiExact};
    else if (method == "montecarlo") modes = {DeltaMode::MonteCarlo};
    else if (method == "all") {
        if (council.total_population() <= kDeltaEnumerationCap) modes.push_back(DeltaMode::Exact);
        modes.push_back(DeltaMode::SemiExact);
        modes.push_back(DeltaMode::MonteCarlo);
    } else {
        throw ConfigError("--method must be exact, semiexact, montecarlo or all (got '" + method + "')");
    }
    Table t({"weights", "method", "delta", "std_error"});
    for (auto m : modes) {
        const auto d = delta(council, w, m, {trials(cfg, 100'000), mc_options(cfg)});
        t.add_row({label, to_string(d.method), d.value, d.std_error});
    }
    return t;
}

Table cmd_scaling(const json& cfg) {
    const auto family = model_family_of(cfg);
    const auto grid = grid_of(cfg, kDefaultScalingGrid);
    ScalingOptions opts;
    const std::string method = text_or(cfg, "method", "exact");
    if (method == "montecarlo") opts.mode = EstimatorMode::MonteCarlo;
    else if (method != "exact") throw ConfigError("--method must be exact or montecarlo (got '" + method + "')");
    opts.samples = trials(cfg, 100'000);
    opts.mc = mc_options(cfg);
    const auto fit = scaling_fit(family, grid, opts);
    Table t({"N", "model", "expected_margin", "weight", "exponent", "prefactor", "r_squared"});
    for (const auto& [n, e] : fit.grid)
        t.add_row({n, family(n).describe(), e, 0.5 * e, fit.exponent, fit.prefactor(), fit.r_squared});
    return t;
}

Table cmd_solve_cj(const json& cfg) {
    const double j = number(cfg, "J");
    const auto c = solve_cj(j);
    Table t({"J", "C", "residual", "iterations"});
    t.add_row({j, c.value, c.residual, std::int64_t{c.iterations}});
    return t;
}

Table cmd_regime(const json& cfg) {
    const BeliefFamily family = family_of(cfg).value_or(BeliefFamily(number_or(cfg, "c", 1.0), number(cfg, "beta")));
    const auto grid = grid_of(cfg, kDefaultScalingGrid);
    const auto rep = classify_regime(family, number_or(cfg, "epsilon", 0.1), grid, number_or(cfg, "bound_constant", 1.0));
    Table t({"N", "half_width", "mu_bar", "regime", "slope", "predicted_exponent", "bound_holds"});
    for (const auto& [n, mb] : rep.mu_bar_by_n)
        t.add_row({n, family.half_width(n), mb, to_string(rep.regime), rep.slope, rep.predicted_exponent, rep.bound_holds});
    return t;
}

Table cmd_distribution(const json& cfg) {
    const auto grid = grid_of(cfg, kDefaultDistributionGrid);
    const auto family = family_of(cfg);
    std::optional<BeliefDistribution> fixed;
    if (!family) {
        if (has(cfg, "belief")) fixed = config::belief_from_json(cfg.at("belief"));
        else fixed = BeliefDistribution::uniform(number_or(cfg, "a", 1.0));
    }
    const std::string method = text_or(cfg, "method", "exact");
    BoundMode mode = BoundMode::Exact;
    if (method == "montecarlo") mode = BoundMode::MonteCarlo;
    else if (method != "exact") throw ConfigError("--method must be exact or montecarlo (got '" + method + "')");
    Table t({"N", "belief", "mean_abs_over_n", "mu_bar", "gap", "coupling_gap", "distance", "bound", "std_error",
             "margin_bound_ok", "coupling_bound_ok", "distance_ok"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Population n = grid[i];
        const auto belief = family ? family->at(n) : *fixed;
        auto mc = mc_options(cfg);
        mc.seed += i;
        const auto r = margin_bound_check(belief, n, mode, trials(cfg, 100'000), mc);
        const double dist = distribution_distance(belief, n);
        t.add_row({n, belief.describe(), r.mean_abs_over_n, r.mu_bar, r.gap, r.coupling_gap, dist, r.bound,
                   r.std_error, r.margin_bound_ok, r.coupling_bound_ok, dist <= r.bound});
    }
    return t;
}

Table cmd_council_sim(const json& cfg) {
    const auto council = council_of(cfg);
    const auto w = weights_of(cfg, council, nullptr);
    const auto r = simulate(council, w, trials(cfg, 100'000), mc_options(cfg));
    Table t({"metric", "state", "value", "std_error"});
    t.add_row({std::string("delta"), std::string(""), r.delta.value, r.delta.std_error});
    t.add_row({std::string("disagreement_rate"), std::string(""), r.disagreement_rate, r.disagreement_std_error});
    t.add_row({std::string("mean_popular_margin"), std::string(""), r.mean_popular_margin, 0.0});
    const std::size_t m = council.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double p = r.per_state_yes_rates[i];
        t.add_row({std::string("weight"), council.states[i].name, w[i], 0.0});
        t.add_row({std::string("yes_rate"), council.states[i].name, p,
                   std::sqrt(p * (1 - p) / static_cast<double>(r.trials))});
    }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            t.add_row({std::string("delegate_covariance"), council.states[a].name + "|" + council.states[b].name,
                       r.delegate_covariance[a * m + b], r.delegate_covariance_std_error[a * m + b]});
    return t;
}

Table cmd_compare_rules(const json& cfg) {
    const auto council = council_of(cfg);
    const auto rows = compare_weight_rules(council, trials(cfg, 100'000), mc_options(cfg));
    Table t({"rule", "scale", "weights", "delta_semi_exact", "delta_simulated", "delta_std_error", "disagreement_rate",
             "disagreement_std_error"});
    for (const auto& r : rows) {
        t.add_row({r.rule, r.scale, join_weights(r.weights), r.delta_semi_exact, r.simulation.delta.value,
                   r.simulation.delta.std_error, r.simulation.disagreement_rate, r.simulation.disagreement_std_error});
    }
    return t;
}

// ---------------------------------------------------------------- selftest

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

CouncilSpec independent_council(std::vector<Population> pops) {
    CouncilSpec c;
    for (std::size_t i = 0; i < pops.size(); ++i) c.states.push_back({"s" + std::to_string(i), pops[i], VotingModel::independent()});
    return c;
}

std::vector<Check> run_selftest(const json& cfg) {
    std::vector<Check> out;
    auto record = [&](const std::string& name, bool ok, const std::string& detail) { out.push_back({name, ok, detail}); };
    auto fmt = [](double v) { return config::format_number(v); };
    const auto mc = mc_options(cfg);

    {
        const auto r = philox4x32_10({0, 0, 0, 0}, {0, 0});
        record("rng.philox_known_answer", r == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}, "");
        RngStream a(mc.seed, 0), b(mc.seed, 0);
        bool same = true;
        for (int i = 0; i < 1000; ++i) same = same && a() == b();
        record("rng.stream_reproducible", same, "");
    }

    const std::vector<VotingModel> zoo = {
        VotingModel::independent(),
        VotingModel::common_belief(BeliefDistribution::uniform(1.0)),
        VotingModel::common_belief(BeliefDistribution::symmetric_pairs({{0.4, 1.0}})),
        VotingModel::mean_field(0.5),
        VotingModel::mean_field(1.5),
    };
    for (const auto& m : zoo) {
        const int n = 8;
        double total = 0.0, asym = 0.0, margin_sum = 0.0;
        for (std::uint64_t k = 0; k < (1u << n); ++k) {
            const auto o = Outcome::from_bits(k, n);
            const double p = pmf_exact(m, o);
            total += p;
            asym = std::max(asym, std::abs(p - pmf_exact(m, o.flipped())));
            margin_sum += p * static_cast<double>(margin(o));
        }
        record("measures.normalized[" + m.describe() + "]", std::abs(total - 1.0) <= 1e-12, "sum=" + fmt(total));
        record("measures.flip_symmetric[" + m.describe() + "]", asym <= 1e-14, "max_gap=" + fmt(asym));
        const double e = expected_margin_exact(m, n).value;
        record("estimators.exact_vs_enumeration[" + m.describe() + "]", std::abs(e - margin_sum) <= 1e-9,
               fmt(e) + " vs " + fmt(margin_sum));
        const auto est = expected_margin_mc(m, 101, 20000, mc);
        const double ex = expected_margin_exact(m, 101).value;
        record("estimators.mc_within_4se[" + m.describe() + "]", std::abs(est.value - ex) <= 4 * est.std_error,
               fmt(est.value) + " vs " + fmt(ex) + " se=" + fmt(est.std_error));
    }

    {
        const double r = expected_margin_exact(VotingModel::independent(), 10000).value / 100.0;
        record("estimators.square_root_constant", std::abs(r / std::sqrt(2.0 / M_PI) - 1.0) <= 0.005, fmt(r));
        const double sub = expected_margin_exact(VotingModel::mean_field(0.5), 10000).value / 100.0;
        record("meanfield.subcritical_constant", std::abs(sub / (std::sqrt(2.0 / M_PI) / std::sqrt(0.5)) - 1.0) <= 0.02, fmt(sub));
        const double sup = expected_margin_exact(VotingModel::mean_field(1.5), 10000).value / 10000.0;
        record("meanfield.supercritical_constant", std::abs(sup / solve_cj(1.5).value - 1.0) <= 0.02, fmt(sup));
    }

    {
        double prev = 0.0, worst = 0.0;
        bool increasing = true;
        for (double j : {1.01, 1.1, 1.5, 2.0, 5.0, 10.0}) {
            const auto c = solve_cj(j);
            worst = std::max(worst, std::abs(std::tanh(j * c.value) - c.value));
            increasing = increasing && c.value > prev;
            prev = c.value;
        }
        record("meanfield.solve_cj_residual", worst <= 1e-12, "max_residual=" + fmt(worst));
        record("meanfield.solve_cj_increasing", increasing, "");
        const auto grid = geometric_grid(256, 16384, 2);
        const double a09 = scaling_fit([](Population) { return VotingModel::mean_field(0.9); }, grid).exponent;
        const double a11 = scaling_fit([](Population) { return VotingModel::mean_field(1.1); }, grid).exponent;
        record("meanfield.phase_transition", std::abs(a09 - 0.5) <= 0.05 && std::abs(a11 - 1.0) <= 0.05,
               "alpha(0.9)=" + fmt(a09) + " alpha(1.1)=" + fmt(a11));
    }

    {
        const std::vector<BeliefDistribution> beliefs = {BeliefDistribution::point_mass_zero(), BeliefDistribution::uniform(1.0),
                                                         BeliefDistribution::symmetric_pairs({{0.4, 1.0}})};
        for (const auto& b : beliefs) {
            const auto m = VotingModel::common_belief(b);
            double cov = 0.0;
            for (std::uint64_t k = 0; k < 256; ++k) {
                const auto o = Outcome::from_bits(k, 8);
                cov += pmf_exact(m, o) * o[0] * o[1];
            }
            record("commonbelief.covariance[" + b.describe() + "]", std::abs(cov - second_moment(b)) <= 1e-9,
                   fmt(cov) + " vs " + fmt(second_moment(b)));
            for (Population n : {100, 1000}) {
                const auto r = margin_bound_check(b, n);
                const double d = distribution_distance(b, n);
                record("commonbelief.bounds[" + b.describe() + ",N=" + std::to_string(n) + "]",
                       r.margin_bound_ok && r.coupling_bound_ok && d <= r.bound,
                       "gap=" + fmt(r.gap) + " distance=" + fmt(d) + " bound=" + fmt(r.bound));
            }
        }
        const auto u = BeliefDistribution::uniform(1.0);
        const double d2 = distribution_distance(u, 100), d3 = distribution_distance(u, 1000), d4 = distribution_distance(u, 10000);
        record("commonbelief.distance_decreasing", d2 > d3 && d3 > d4, fmt(d2) + " > " + fmt(d3) + " > " + fmt(d4));
    }

    {
        const auto c = independent_council({1, 3, 5});
        const auto half = optimal_weights(c).raw;
        const double ex = delta(c, half, DeltaMode::Exact).value;
        const double se = delta(c, half, DeltaMode::SemiExact).value;
        record("weights.semi_exact_matches_enumeration", std::abs(ex - se) <= 1e-10, fmt(ex) + " vs " + fmt(se));
        const auto best = verify_minimizer(c, deficit_minimizing_weights(c), 0.1);
        record("weights.deficit_minimizer", best.all_perturbations_increase() && best.all_vertices_match(), "");
        const auto rep = verify_minimizer(c, half, 0.1);
        std::string vertices;
        for (const auto& cc : rep.coordinates) vertices += (vertices.empty() ? "" : ";") + fmt(cc.vertex);
        record("weights.optimal_weights_minimize_delta", rep.all_perturbations_increase(), "coordinate vertices=" + vertices);

        const auto sim = simulate(c, half, 200000, mc);
        record("council.simulation_matches_exact", std::abs(sim.delta.value - ex) <= 4 * sim.delta.std_error,
               fmt(sim.delta.value) + " vs " + fmt(ex));
        bool indep = true;
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = a + 1; b < 3; ++b)
                indep = indep && std::abs(sim.delegate_covariance[a * 3 + b]) <= 4 * sim.delegate_covariance_std_error[a * 3 + b];
        record("council.interstate_independence", indep, "");
    }
    return out;
}

// ---------------------------------------------------------------- output

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_table(const Table& table, const std::string& format, std::ostream& os) {
    if (format == "jsonl") table.write_jsonl(os);
    else table.write_csv(os);
}

void emit(const Table& table, const json& cfg, const std::string& command, const std::string& started) {
    const std::string format = cfg.at("format").get<std::string>();
    const std::string out = text_or(cfg, "out", "");
    json meta{{"command", command},
              {"config", cfg},
              {"seed", cfg.at("seed")},
              {"workers", cfg.at("workers")},
              {"format", format},
              {"rows", table.rows()},
              {"started_at", started},
              {"finished_at", utc_now()}};
    if (out.empty()) {
        write_table(table, format, std::cout);
        std::cout.flush();
        std::cerr << meta.dump() << '\n';
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw ConfigError("cannot open --out path '" + out + "' for writing");
    write_table(table, format, file);
    std::ofstream meta_file(out + ".meta.json", std::ios::binary);
    if (!meta_file) throw ConfigError("cannot write metadata next to '" + out + "'");
    meta_file << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------- flags

struct Flags {
    std::string config, out, format, grid, model, method, weights;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::int64_t trials = 0, n = 0;
    double j = 0, quota = 0, epsilon = 0, a = 0, c = 0, beta = 0, step = 0, bound_constant = 0;
};

// Options set on the command line, recorded as (config key, setter).
using Override = std::function<void(json&)>;

struct Registered {
    CLI::Option* option;
    Override apply;
};

template <class T>
Registered add(CLI::App* app, const std::string& flag, const std::string& key, T& target, const std::string& help) {
    auto* opt = app->add_option(flag, target, help);
    return {opt, [key, &target](json& cfg) { cfg[key] = target; }};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fair council weights under independent, common-belief and mean-field voter models"};
    app.require_subcommand(1);
    Flags f;
    std::map<CLI::App*, std::vector<Registered>> registry;

    auto common = [&](CLI::App* sub) {
        auto& r = registry[sub];
        sub->add_option("--config", f.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
        r.push_back(add(sub, "--seed", "seed", f.seed, "Random seed (default 0)"));
        r.push_back(add(sub, "--workers", "workers", f.workers, "Worker threads; part of the reproducibility key (default 1)"));
        r.push_back(add(sub, "--out", "out", f.out, "Output file (default stdout); metadata goes to OUT.meta.json"));
        auto fmt = add(sub, "--format", "format", f.format, "csv or jsonl (default csv)");
        fmt.option->check(CLI::IsMember({"csv", "jsonl"}));
        r.push_back(fmt);
    };
    auto opt = [&](CLI::App* sub, auto... regs) { (registry[sub].push_back(regs), ...); };

    struct Sub {
        const char* name;
        const char* help;
        Table (*run)(const json&);
    };
    const std::vector<Sub> subs = {
        {"weights", "Per-state weights E|S|/2 for a council config", cmd_weights},
        {"margin", "Expected margin E|S| of one state", cmd_margin},
        {"delta", "Democracy deficit for a council and weight vector", cmd_delta},
        {"scaling", "Power-law fit of E|S_N| over an N grid", cmd_scaling},
        {"solve-cj", "Positive root of tanh(J C) = C for J > 1", cmd_solve_cj},
        {"regime", "Classify a uniform belief family by the decay of mu_bar", cmd_regime},
        {"distribution", "Margin and Wasserstein bounds for a common-belief state", cmd_distribution},
        {"council-sim", "Monte Carlo simulation of a council", cmd_council_sim},
        {"compare-rules", "Compare ray-scaled weight rules on a council", cmd_compare_rules},
        {"selftest", "Run the invariant suite; exit 3 on any violation", nullptr},
    };
    std::map<CLI::App*, const Sub*> by_app;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        common(sub);
        by_app[sub] = &s;
        const std::string name = s.name;
        if (name != "solve-cj" && name != "regime") opt(sub, add(sub, "--trials", "trials", f.trials, "Monte Carlo trials or samples"));
        if (name == "margin" || name == "scaling" || name == "solve-cj") opt(sub, add(sub, "--J", "J", f.j, "Mean-field coupling J"));
        if (name == "margin") opt(sub, add(sub, "--N", "N", f.n, "Population"));
        if (name == "margin" || name == "scaling" || name == "regime" || name == "distribution")
            opt(sub, add(sub, "--grid", "grid", f.grid, "Population grid lo:hi:xSTEP, lo:hi:+STEP or n1,n2,..."));
        if (name == "margin" || name == "scaling") {
            auto m = add(sub, "--model", "model", f.model, "independent, meanfield, commonbelief or straffin");
            m.option->check(CLI::IsMember({"independent", "meanfield", "commonbelief", "straffin"}));
            opt(sub, m);
        }
        if (name == "margin" || name == "scaling" || name == "distribution")
            opt(sub, add(sub, "--a", "a", f.a, "Half-width of a uniform common belief"));
        if (name == "margin" || name == "scaling" || name == "regime" || name == "distribution") {
            opt(sub, add(sub, "--c", "c", f.c, "Straffin family prefactor c in a_N = c N^-beta"));
            opt(sub, add(sub, "--beta", "beta", f.beta, "Straffin family exponent beta"));
        }
        if (name == "margin" || name == "delta" || name == "scaling" || name == "distribution")
            opt(sub, add(sub, "--method", "method", f.method, "Estimator route"));
        if (name == "delta" || name == "council-sim")
            opt(sub, add(sub, "--weights", "weights", f.weights,
                         "optimal, minimizer, sqrt_population, population, equal or w1,w2,..."));
        if (name == "delta") opt(sub, add(sub, "--step", "step", f.step, "Check the minimizer with +-step coordinate probes"));
        if (name == "weights" || name == "delta" || name == "council-sim" || name == "compare-rules")
            opt(sub, add(sub, "--quota", "quota", f.quota, "Council quota q in (0, 1); default simple majority"));
        if (name == "regime") {
            opt(sub, add(sub, "--epsilon", "epsilon", f.epsilon, "Width of the boundary band around N^-1/2 (default 0.1)"));
            opt(sub, add(sub, "--bound-constant", "bound_constant", f.bound_constant, "Constant C in C N^(-1/2 -+ eps)"));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const Sub& sub = *by_app.at(chosen);
    const std::string started = utc_now();
    try {
        json cfg = f.config.empty() ? json::object() : config::load_json_file(f.config);
        if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
        for (const auto& r : registry[chosen])
            if (r.option->count() > 0) r.apply(cfg);
        if (!has(cfg, "seed")) cfg["seed"] = std::uint64_t{0};
        if (!has(cfg, "workers")) cfg["workers"] = 1u;
        if (!has(cfg, "format")) cfg["format"] = "csv";
        if (!cfg.at("seed").is_number_unsigned() && !(cfg.at("seed").is_number_integer() && cfg.at("seed").get<std::int64_t>() >= 0))
            throw ConfigError("'seed' must be a non-negative integer");
        if (integer(cfg, "workers") < 1) throw ConfigError("'workers' must be at least 1");
        const auto format = text_or(cfg, "format", "csv");
        if (format != "csv" && format != "jsonl") throw ConfigError("'format' must be csv or jsonl");

        if (sub.run) {
            emit(sub.run(cfg), cfg, sub.name, started);
            return kExitOk;
        }
        const auto checks = run_selftest(cfg);
        Table t({"check", "status", "detail"});
        bool all = true;
        for (const auto& c : checks) {
            t.add_row({c.name, std::string(c.passed ? "pass" : "FAIL"), c.detail});
            all = all && c.passed;
        }
        emit(t, cfg, sub.name, started);
        return all ? kExitOk : kExitSelftest;
    } catch (const ConfigError& e) {
        std::cerr << "fairvote " << sub.name << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "fairvote " << sub.name << ": config: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "fairvote " << sub.name << ": " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "fairvote " << sub.name << ": " << e.what() << '\n';
        return kExitDomain;
    }
}
