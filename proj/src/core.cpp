#include "fairvote/core.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace fairvote {

Outcome::Outcome(std::vector<Spin> votes) : votes_(std::move(votes)) {
    if (votes_.empty()) throw DomainError("outcome must contain at least one vote");
    for (Spin v : votes_) {
        if (v != 1 && v != -1) throw DomainError("outcome entries must be exactly -1 or +1");
    }
}

Outcome Outcome::from_bits(std::uint64_t mask, int n) {
    if (n < 1 || n > 64) throw DomainError("from_bits needs 1 <= n <= 64");
    std::vector<Spin> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = ((mask >> i) & 1u) ? Spin{1} : Spin{-1};
    Outcome out;
    out.votes_ = std::move(v);
    return out;
}

std::int64_t Outcome::total() const noexcept {
    return std::accumulate(votes_.begin(), votes_.end(), std::int64_t{0},
                           [](std::int64_t acc, Spin s) { return acc + s; });
}

Outcome Outcome::flipped() const {
    Outcome out = *this;
    for (auto& v : out.votes_) v = static_cast<Spin>(-v);
    return out;
}

VotingModel::VotingModel(MeanField m) : v_(m) {
    if (!std::isfinite(m.coupling) || m.coupling < 0.0)
        throw DomainError("mean-field coupling J must be finite and >= 0");
}

std::string VotingModel::describe() const {
    std::ostringstream os;
    os.precision(12);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Independent>) {
                os << "independent";
            } else if constexpr (std::is_same_v<T, CommonBelief>) {
                os << "commonbelief(" << m.belief.describe() << ")";
            } else {
                os << "meanfield(J=" << m.coupling << ")";
            }
        },
        v_);
    return os.str();
}

std::string to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::Exact: return "exact";
        case EstimateMethod::MonteCarlo: return "montecarlo";
        case EstimateMethod::Asymptotic: return "asymptotic";
    }
    return "unknown";
}

std::int64_t margin(const Outcome& outcome) noexcept { return std::llabs(outcome.total()); }

double q_margin(const Outcome& outcome, double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("quota q must lie in (0, 1)");
    const double threshold = (2.0 * q - 1.0) * static_cast<double>(outcome.size());
    return std::abs(static_cast<double>(outcome.total()) - threshold);
}

std::int64_t affirmative_count(const Outcome& outcome) noexcept { return (outcome.total() + outcome.size()) / 2; }

}  // namespace fairvote
