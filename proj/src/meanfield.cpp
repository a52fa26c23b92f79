#include "fairvote/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>

namespace fairvote {

CjSolution solve_cj(double coupling) {
    if (!std::isfinite(coupling) || !(coupling > 1.0))
        throw SubcriticalCoupling("tanh(J C) = C has no positive solution for J <= 1");
    auto g = [coupling](double c) { return std::tanh(coupling * c) - c; };
    double lo = 1e-8, hi = 1.0;  // g(lo) > 0 > g(hi)
    CjSolution sol;
    for (sol.iterations = 1; sol.iterations <= 200; ++sol.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        sol.value = mid;
        sol.residual = std::abs(gm);
        if ((sol.residual <= 1e-12 && hi - lo <= 1e-14) || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon())
            break;
    }
    return sol;
}

MarginEstimate asymptotic_weight_meanfield(double coupling, Population n) {
    if (!std::isfinite(coupling) || coupling < 0.0) throw DomainError("mean-field coupling J must be >= 0");
    if (coupling == 1.0) throw DomainError("no asymptotic law at the critical point J = 1");
    if (n < 1) throw DomainError("asymptotic weight needs N >= 1");
    const auto dn = static_cast<double>(n);
    if (coupling < 1.0) return MarginEstimate::asymptotic(std::sqrt(2.0 / std::numbers::pi) * std::sqrt(dn / (1.0 - coupling)));
    return MarginEstimate::asymptotic(solve_cj(coupling).value * dn);
}

double ScalingFit::prefactor() const { return std::exp(log_prefactor); }

ScalingFit fit_power_law(std::vector<std::pair<Population, double>> points) {
    std::set<Population> distinct;
    for (const auto& [n, v] : points) {
        if (n < 1 || !(v > 0.0)) throw DomainError("power-law fit needs N >= 1 and positive values");
        distinct.insert(n);
    }
    if (distinct.size() < 2) throw DomainError("power-law fit needs at least two distinct N");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const auto m = static_cast<double>(points.size());
    for (const auto& [n, v] : points) {
        const double x = std::log(static_cast<double>(n)), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double vxx = sxx - sx * sx / m;
    const double vxy = sxy - sx * sy / m;
    const double vyy = syy - sy * sy / m;
    ScalingFit fit;
    fit.exponent = vxy / vxx;
    fit.log_prefactor = (sy - fit.exponent * sx) / m;
    fit.r_squared = vyy > 0.0 ? std::clamp(vxy * vxy / (vxx * vyy), 0.0, 1.0) : 1.0;
    fit.grid = std::move(points);
    return fit;
}

ScalingFit scaling_fit(const ModelFamily& family, const std::vector<Population>& grid, const ScalingOptions& opts) {
    if (std::set<Population>(grid.begin(), grid.end()).size() < 3)
        throw DomainError("scaling fit needs at least 3 distinct N");
    std::vector<std::pair<Population, double>> pts;
    pts.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Population n = grid[i];
        const VotingModel model = family(n);
        double v;
        if (opts.mode == EstimatorMode::Exact) {
            v = expected_margin_exact(model, n).value;
        } else {
            // Distinct seed per grid point keeps the points independent.
            McOptions mc = opts.mc;
            mc.seed = opts.mc.seed + 0x9E3779B97F4A7C15ull * (i + 1);
            v = expected_margin_mc(model, n, opts.samples, mc).value;
        }
        pts.emplace_back(n, v);
    }
    return fit_power_law(std::move(pts));
}

std::vector<Population> geometric_grid(Population lo, Population hi, double step) {
    if (lo < 1 || hi < lo) throw DomainError("grid needs 1 <= lo <= hi");
    if (!(step > 1.0)) throw DomainError("geometric grid step must exceed 1");
    std::vector<Population> out;
    double x = static_cast<double>(lo);
    while (true) {
        const auto n = static_cast<Population>(std::llround(x));
        if (n > hi) break;
        if (out.empty() || out.back() != n) out.push_back(n);
        x *= step;
    }
    return out;
}

}  // namespace fairvote
