#include "fairvote/belief.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fairvote/error.hpp"

namespace fairvote {
namespace {

constexpr double kMassTol = 1e-12;
constexpr double kSymTol = 1e-12;

double trapezoid_mass(const std::vector<double>& x, const std::vector<double>& d) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) m += 0.5 * (d[i] + d[i + 1]) * (x[i + 1] - x[i]);
    return m;
}

void validate_grid_shape(const std::vector<double>& x, const std::vector<double>& d) {
    if (x.size() < 2 || x.size() != d.size())
        throw DomainError("grid belief needs >= 2 nodes and one density per node");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || std::abs(x[i]) > 1.0) throw DomainError("grid belief nodes must lie in [-1, 1]");
        if (!std::isfinite(d[i]) || d[i] < 0.0) throw DomainError("grid belief densities must be finite and >= 0");
        if (i > 0 && !(x[i] > x[i - 1])) throw DomainError("grid belief nodes must be strictly ascending");
    }
}

}  // namespace

BeliefDistribution BeliefDistribution::uniform(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("uniform belief needs 0 < a <= 1");
    return BeliefDistribution{UniformSymmetric{a}};
}

BeliefDistribution BeliefDistribution::atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw DomainError("atom belief needs at least one atom");
    double total = 0.0;
    std::map<double, double> mass;
    for (const auto& at : atoms) {
        if (!std::isfinite(at.zeta) || std::abs(at.zeta) > 1.0) throw DomainError("belief atoms must lie in [-1, 1]");
        if (!std::isfinite(at.weight) || at.weight < 0.0) throw DomainError("belief atom weights must be >= 0");
        total += at.weight;
        mass[at.zeta == 0.0 ? 0.0 : at.zeta] += at.weight;
    }
    if (std::abs(total - 1.0) > kMassTol) throw DomainError("belief atom weights must sum to 1");
    for (const auto& [z, w] : mass) {
        if (z <= 0.0) continue;
        const auto it = mass.find(-z);
        const double mirrored = it == mass.end() ? 0.0 : it->second;
        if (std::abs(mirrored - w) > kSymTol)
            throw DomainError("belief atoms must come in +-zeta pairs of equal weight");
    }
    for (const auto& [z, w] : mass) {
        if (z < 0.0 && w > kSymTol && mass.find(-z) == mass.end())
            throw DomainError("belief atoms must come in +-zeta pairs of equal weight");
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.zeta < r.zeta; });
    return BeliefDistribution{DiscreteSymmetric{std::move(atoms)}};
}

BeliefDistribution BeliefDistribution::symmetric_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Atom> out;
    for (const auto& [z, w] : pairs) {
        if (z == 0.0) {
            out.push_back({0.0, w});
        } else {
            out.push_back({-std::abs(z), 0.5 * w});
            out.push_back({std::abs(z), 0.5 * w});
        }
    }
    return atoms(std::move(out));
}

BeliefDistribution BeliefDistribution::grid(std::vector<double> nodes, std::vector<double> densities) {
    validate_grid_shape(nodes, densities);
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        if (std::abs(nodes[i] + nodes[j]) > kSymTol || std::abs(densities[i] - densities[j]) > kSymTol)
            throw DomainError("grid belief must be symmetric: mirrored nodes with equal densities");
    }
    if (std::abs(trapezoid_mass(nodes, densities) - 1.0) > kMassTol)
        throw DomainError("grid belief density must integrate to 1 under the trapezoid rule");
    return BeliefDistribution{GriddedDensity{std::move(nodes), std::move(densities)}};
}

BeliefDistribution BeliefDistribution::normalized_grid(std::vector<double> nodes, std::vector<double> densities) {
    validate_grid_shape(nodes, densities);
    const double m = trapezoid_mass(nodes, densities);
    if (!(m > 0.0)) throw DomainError("grid belief density has zero mass");
    for (auto& d : densities) d /= m;
    return grid(std::move(nodes), std::move(densities));
}

double BeliefDistribution::cdf(double x) const {
    return std::visit(
        [x](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassZero>) {
                return x >= 0.0 ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, UniformSymmetric>) {
                return std::clamp((x + s.a) / (2.0 * s.a), 0.0, 1.0);
            } else if constexpr (std::is_same_v<T, DiscreteSymmetric>) {
                double c = 0.0;
                for (const auto& at : s.atoms)
                    if (at.zeta <= x) c += at.weight;
                return std::min(c, 1.0);
            } else {
                const auto& xs = s.nodes;
                const auto& ds = s.densities;
                if (x < xs.front()) return 0.0;
                double c = 0.0;
                for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                    const double l = xs[i], r = xs[i + 1];
                    if (x >= r) {
                        c += 0.5 * (ds[i] + ds[i + 1]) * (r - l);
                        continue;
                    }
                    const double t = x - l;
                    const double slope = (ds[i + 1] - ds[i]) / (r - l);
                    c += ds[i] * t + 0.5 * slope * t * t;
                    break;
                }
                return std::clamp(c, 0.0, 1.0);
            }
        },
        shape_);
}

std::string BeliefDistribution::describe() const {
    std::ostringstream os;
    os.precision(12);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PointMassZero>) {
                os << "point_mass_zero";
            } else if constexpr (std::is_same_v<T, UniformSymmetric>) {
                os << "uniform(a=" << s.a << ")";
            } else if constexpr (std::is_same_v<T, DiscreteSymmetric>) {
                os << "atoms(";
                for (std::size_t i = 0; i < s.atoms.size(); ++i)
                    os << (i ? ";" : "") << s.atoms[i].zeta << ":" << s.atoms[i].weight;
                os << ")";
            } else {
                os << "grid(" << s.nodes.size() << " nodes)";
            }
        },
        shape_);
    return os.str();
}

bool operator==(const BeliefDistribution::Atom& lhs, const BeliefDistribution::Atom& rhs) {
    return lhs.zeta == rhs.zeta && lhs.weight == rhs.weight;
}

bool operator==(const BeliefDistribution& lhs, const BeliefDistribution& rhs) {
    if (lhs.shape_.index() != rhs.shape_.index()) return false;
    return std::visit(
        [&](const auto& l) -> bool {
            using T = std::decay_t<decltype(l)>;
            const auto& r = std::get<T>(rhs.shape_);
            if constexpr (std::is_same_v<T, BeliefDistribution::PointMassZero>) {
                return true;
            } else if constexpr (std::is_same_v<T, BeliefDistribution::UniformSymmetric>) {
                return l.a == r.a;
            } else if constexpr (std::is_same_v<T, BeliefDistribution::DiscreteSymmetric>) {
                return l.atoms == r.atoms;
            } else {
                return l.nodes == r.nodes && l.densities == r.densities;
            }
        },
        lhs.shape_);
}

}  // namespace fairvote
