#include "fairvote/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fairvote/meanfield.hpp"

namespace fairvote::config {
namespace {

const json& require(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string(where) + ": missing field '" + key + "'");
    return j.at(key);
}

double number(const json& j, const char* key, const char* where) {
    const auto& v = require(j, key, where);
    if (!v.is_number()) throw ConfigError(std::string(where) + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::string type_of(const json& j, const char* where) {
    const auto& t = require(j, "type", where);
    if (!t.is_string()) throw ConfigError(std::string(where) + ": 'type' must be a string");
    return t.get<std::string>();
}

std::vector<double> number_array(const json& j, const char* key, const char* where) {
    const auto& v = require(j, key, where);
    if (!v.is_array()) throw ConfigError(std::string(where) + ": field '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(std::string(where) + ": '" + key + "' entries must be numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Population parse_population(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("grid: cannot parse '" + s + "'");
    }
    if (pos != s.size() || v < 1 || v != std::floor(v)) throw ConfigError("grid: '" + s + "' is not a positive integer");
    return static_cast<Population>(v);
}

}  // namespace

BeliefDistribution belief_from_json(const json& j) {
    const auto type = type_of(j, "belief");
    if (type == "point_mass_zero") return BeliefDistribution::point_mass_zero();
    if (type == "uniform") return BeliefDistribution::uniform(number(j, "a", "belief"));
    if (type == "atoms") {
        const auto& arr = require(j, "atoms", "belief");
        if (!arr.is_array()) throw ConfigError("belief: 'atoms' must be an array of [zeta, weight]");
        std::vector<BeliefDistribution::Atom> atoms;
        for (const auto& a : arr) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                throw ConfigError("belief: each atom must be [zeta, weight]");
            atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
        return BeliefDistribution::atoms(std::move(atoms));
    }
    if (type == "grid") return BeliefDistribution::grid(number_array(j, "nodes", "belief"), number_array(j, "densities", "belief"));
    throw ConfigError("belief: unknown type '" + type + "'");
}

json to_json(const BeliefDistribution& b) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BeliefDistribution::PointMassZero>) {
                return {{"type", "point_mass_zero"}};
            } else if constexpr (std::is_same_v<T, BeliefDistribution::UniformSymmetric>) {
                return {{"type", "uniform"}, {"a", s.a}};
            } else if constexpr (std::is_same_v<T, BeliefDistribution::DiscreteSymmetric>) {
                json atoms = json::array();
                for (const auto& a : s.atoms) atoms.push_back({a.zeta, a.weight});
                return {{"type", "atoms"}, {"atoms", atoms}};
            } else {
                return {{"type", "grid"}, {"nodes", s.nodes}, {"densities", s.densities}};
            }
        },
        b.shape());
}

VotingModel model_from_json(const json& j) {
    const auto type = type_of(j, "model");
    if (type == "independent") return VotingModel::independent();
    const json params = j.contains("params") ? j.at("params") : json::object();
    if (type == "meanfield") return VotingModel::mean_field(number(params, "J", "model.params"));
    if (type == "commonbelief") return VotingModel::common_belief(belief_from_json(require(params, "belief", "model.params")));
    throw ConfigError("model: unknown type '" + type + "'");
}

json to_json(const VotingModel& m) {
    if (m.is<Independent>()) return {{"type", "independent"}};
    if (m.is<MeanField>()) return {{"type", "meanfield"}, {"params", {{"J", m.as<MeanField>().coupling}}}};
    return {{"type", "commonbelief"}, {"params", {{"belief", to_json(m.as<CommonBelief>().belief)}}}};
}

CouncilSpec council_from_json(const json& j) {
    const auto& states = require(j, "states", "council");
    if (!states.is_array()) throw ConfigError("council: 'states' must be an array");
    CouncilSpec c;
    for (const auto& s : states) {
        StateSpec st;
        const auto& name = require(s, "name", "state");
        if (!name.is_string()) throw ConfigError("state: 'name' must be a string");
        st.name = name.get<std::string>();
        const auto& pop = require(s, "population", "state");
        if (!pop.is_number_integer()) throw ConfigError("state: 'population' must be an integer");
        st.population = pop.get<Population>();
        st.model = s.contains("model") ? model_from_json(s.at("model")) : VotingModel::independent();
        c.states.push_back(std::move(st));
    }
    if (j.contains("quota") && !j.at("quota").is_null()) c.quota = Quota::qualified(number(j, "quota", "council"));
    c.validate();
    return c;
}

json to_json(const CouncilSpec& c) {
    json states = json::array();
    for (const auto& s : c.states) states.push_back({{"name", s.name}, {"population", s.population}, {"model", to_json(s.model)}});
    json out{{"states", states}};
    out["quota"] = c.quota.q ? json(*c.quota.q) : json(nullptr);
    return out;
}

BeliefFamily family_from_json(const json& j) {
    const auto type = type_of(j, "family");
    if (type != "straffin") throw ConfigError("family: unknown type '" + type + "'");
    return BeliefFamily(number(j, "c", "family"), number(j, "beta", "family"));
}

json to_json(const BeliefFamily& f) { return {{"type", "straffin"}, {"c", f.c}, {"beta", f.beta}}; }

std::vector<Population> parse_grid(const std::string& spec) {
    if (spec.find(':') == std::string::npos) {
        std::vector<Population> out;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_population(item));
        if (out.empty()) throw ConfigError("grid: empty list");
        return out;
    }
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3 || parts[2].size() < 2 || (parts[2][0] != 'x' && parts[2][0] != '+'))
        throw ConfigError("grid: expected lo:hi:xSTEP or lo:hi:+STEP, got '" + spec + "'");
    const Population lo = parse_population(parts[0]);
    const Population hi = parse_population(parts[1]);
    if (hi < lo) throw ConfigError("grid: hi must be >= lo");
    double step;
    try {
        step = std::stod(parts[2].substr(1));
    } catch (const std::exception&) {
        throw ConfigError("grid: bad step '" + parts[2] + "'");
    }
    if (parts[2][0] == 'x') {
        if (!(step > 1.0)) throw ConfigError("grid: geometric step must exceed 1");
        return geometric_grid(lo, hi, step);
    }
    if (!(step >= 1.0) || step != std::floor(step)) throw ConfigError("grid: arithmetic step must be a positive integer");
    std::vector<Population> out;
    for (Population n = lo; n <= hi; n += static_cast<Population>(step)) out.push_back(n);
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << v;
    return os.str();
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table row width does not match column count");
    rows_.push_back(std::move(row));
}

namespace {

std::string cell_text(const Table::Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, double>) {
                return format_number(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return std::to_string(v);
            }
        },
        c);
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_escape(columns_[i]);
    os << "\r\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
        os << "\r\n";
    }
}

void Table::write_jsonl(std::ostream& os) const {
    for (const auto& row : rows_) {
        // Hand-assembled to keep column order and 12-digit numbers.
        os << '{';
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << json(columns_[i]).dump() << ':';
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::string>) {
                        os << json(v).dump();
                    } else if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) {
                            os << format_number(v);
                        } else {
                            os << "null";
                        }
                    } else if constexpr (std::is_same_v<T, bool>) {
                        os << (v ? "true" : "false");
                    } else {
                        os << v;
                    }
                },
                row[i]);
        }
        os << "}\n";
    }
}

}  // namespace fairvote::config
