#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fairvote/commonbelief.hpp"
#include "fairvote/core.hpp"
#include "fairvote/weights.hpp"

namespace fairvote::config {

using nlohmann::json;

/// Structural problem in a config document or flag value (exit code 1).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// {type:"uniform", a} | {type:"atoms", atoms:[[zeta, w], ...]} |
// {type:"point_mass_zero"} | {type:"grid", nodes, densities}
BeliefDistribution belief_from_json(const json& j);
json to_json(const BeliefDistribution& b);

// {type:"independent"} | {type:"commonbelief", params:{belief}} |
// {type:"meanfield", params:{J}}
VotingModel model_from_json(const json& j);
json to_json(const VotingModel& m);

// {states:[{name, population, model}], quota?: q}
CouncilSpec council_from_json(const json& j);
json to_json(const CouncilSpec& c);

// {type:"straffin", c, beta}
BeliefFamily family_from_json(const json& j);
json to_json(const BeliefFamily& f);

/// "lo:hi:xSTEP" (geometric), "lo:hi:+STEP" (arithmetic) or "n1,n2,...".
std::vector<Population> parse_grid(const std::string& spec);

json load_json_file(const std::string& path);

/// Numbers rendered with 12 significant digits.
std::string format_number(double v);

/// Column-ordered output table written as RFC-4180 CSV or JSON lines.
class Table {
public:
    using Cell = std::variant<std::string, double, std::int64_t, bool>;

    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row);
    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t rows() const { return rows_.size(); }

    void write_csv(std::ostream& os) const;
    void write_jsonl(std::ostream& os) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string csv_escape(const std::string& field);

}  // namespace fairvote::config
