#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairvote/belief.hpp"
#include "fairvote/error.hpp"

namespace fairvote {

using Spin = std::int8_t;
using Population = std::int64_t;

/// One voting result: a +-1 entry per voter.
class Outcome {
public:
    Outcome() = default;
    /// Throws DomainError if any entry is not exactly -1 or +1 or if empty.
    explicit Outcome(std::vector<Spin> votes);

    /// Builds the outcome whose i-th vote is +1 iff bit i of `mask` is set.
    static Outcome from_bits(std::uint64_t mask, int n);

    Population size() const noexcept { return static_cast<Population>(votes_.size()); }
    std::span<const Spin> votes() const noexcept { return votes_; }
    Spin operator[](std::size_t i) const { return votes_[i]; }

    /// Sum of the votes, S = sum X_i.
    std::int64_t total() const noexcept;

    Outcome flipped() const;

private:
    std::vector<Spin> votes_;
};

/// Voter-correlation model for one state.
struct Independent {
    friend bool operator==(const Independent&, const Independent&) = default;
};
struct CommonBelief {
    BeliefDistribution belief;
    friend bool operator==(const CommonBelief&, const CommonBelief&) = default;
};
struct MeanField {
    double coupling;  // J >= 0
    friend bool operator==(const MeanField&, const MeanField&) = default;
};

class VotingModel {
public:
    using Variant = std::variant<Independent, CommonBelief, MeanField>;

    VotingModel() : v_(Independent{}) {}
    VotingModel(Independent m) : v_(m) {}
    VotingModel(CommonBelief m) : v_(std::move(m)) {}
    /// Throws DomainError for negative or non-finite J.
    VotingModel(MeanField m);

    static VotingModel independent() { return VotingModel{Independent{}}; }
    static VotingModel common_belief(BeliefDistribution belief) { return VotingModel{CommonBelief{std::move(belief)}}; }
    static VotingModel mean_field(double coupling) { return VotingModel{MeanField{coupling}}; }

    const Variant& variant() const noexcept { return v_; }

    template <class T>
    bool is() const noexcept {
        return std::holds_alternative<T>(v_);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(v_);
    }

    /// "independent", "commonbelief(uniform(a=1))", "meanfield(J=1.5)".
    std::string describe() const;

    friend bool operator==(const VotingModel&, const VotingModel&) = default;

private:
    Variant v_;
};

enum class EstimateMethod { Exact, MonteCarlo, Asymptotic };

std::string to_string(EstimateMethod m);

/// Expected margin E|S| with provenance.
struct MarginEstimate {
    double value = 0.0;
    double std_error = 0.0;
    EstimateMethod method = EstimateMethod::Exact;
    std::int64_t samples = 0;

    static MarginEstimate exact(double value) { return {value, 0.0, EstimateMethod::Exact, 0}; }
    static MarginEstimate asymptotic(double value) { return {value, 0.0, EstimateMethod::Asymptotic, 0}; }
};

/// |S|.
std::int64_t margin(const Outcome& outcome) noexcept;

/// |S - (2q - 1) N|; q must lie in (0, 1).
double q_margin(const Outcome& outcome, double q);

/// Number of +1 votes, (S + N) / 2.
std::int64_t affirmative_count(const Outcome& outcome) noexcept;

/// chi(x): +1 for x > 0, -1 for x <= 0 (ties vote "no").
constexpr Spin majority_sign(double x) noexcept { return x > 0 ? Spin{1} : Spin{-1}; }

}  // namespace fairvote
