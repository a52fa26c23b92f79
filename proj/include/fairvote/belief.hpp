#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fairvote {

/// Symmetric law of the common-belief variable Z on [-1, 1].
///
/// Four shapes are supported. Construction validates total mass, symmetry
/// and support; nothing is symmetrized or renormalized silently except by the
/// explicit `normalized_grid` factory.
class BeliefDistribution {
public:
    struct PointMassZero {};
    struct UniformSymmetric {
        double a;  // support [-a, a], 0 < a <= 1
    };
    struct Atom {
        double zeta;
        double weight;
    };
    struct DiscreteSymmetric {
        std::vector<Atom> atoms;
    };
    /// Piecewise-linear density on an ascending grid; its mass is the
    /// trapezoid rule on its own nodes.
    struct GriddedDensity {
        std::vector<double> nodes;
        std::vector<double> densities;
    };

    using Shape = std::variant<PointMassZero, UniformSymmetric, DiscreteSymmetric, GriddedDensity>;

    BeliefDistribution() : shape_(PointMassZero{}) {}

    static BeliefDistribution point_mass_zero() { return BeliefDistribution{}; }
    static BeliefDistribution uniform(double a);
    /// Atoms must come in +-zeta pairs of equal weight; zeta = 0 may stand alone.
    static BeliefDistribution atoms(std::vector<Atom> atoms);
    /// Convenience: mass w/2 at each of +-zeta for every (zeta, w) given.
    static BeliefDistribution symmetric_pairs(const std::vector<std::pair<double, double>>& pairs);
    static BeliefDistribution grid(std::vector<double> nodes, std::vector<double> densities);
    /// Rescales densities so the trapezoid mass is exactly 1 before validating.
    static BeliefDistribution normalized_grid(std::vector<double> nodes, std::vector<double> densities);

    const Shape& shape() const noexcept { return shape_; }

    bool is_point_mass_zero() const noexcept { return std::holds_alternative<PointMassZero>(shape_); }

    /// P(Z <= x).
    double cdf(double x) const;

    /// Short human-readable tag, e.g. "uniform(a=0.5)".
    std::string describe() const;

    friend bool operator==(const BeliefDistribution& lhs, const BeliefDistribution& rhs);

private:
    explicit BeliefDistribution(Shape shape) : shape_(std::move(shape)) {}

    Shape shape_;
};

bool operator==(const BeliefDistribution::Atom& lhs, const BeliefDistribution::Atom& rhs);

}  // namespace fairvote
