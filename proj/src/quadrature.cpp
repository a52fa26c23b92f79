#include "fairvote/quadrature.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "fairvote/error.hpp"

namespace fairvote {
namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

// Integrates f over [l, r] against the linear density running from dl at l
// to dr at r, accumulating into `acc`.
void panel_rule(double l, double r, double dl, double dr, int n, std::size_t dim, const VectorIntegrand& f,
                std::vector<double>& acc, std::vector<double>& scratch) {
    const auto& rule = gauss_legendre(n);
    const double mid = 0.5 * (l + r), half = 0.5 * (r - l);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        std::fill(scratch.begin(), scratch.end(), 0.0);
        const double t = rule.nodes[j];
        f(mid + half * t, scratch);
        const double dens = 0.5 * ((1.0 - t) * dl + (1.0 + t) * dr);
        const double w = rule.weights[j] * half * dens;
        for (std::size_t k = 0; k < dim; ++k) acc[k] += w * scratch[k];
    }
}

struct Panel {
    double l, r, dl, dr;
};

// Breakpoints 0, +-h, +-2h, +-4h, ... clipped to (lo, hi), merged with `knots`.
std::vector<double> refined_breaks(double lo, double hi, double h, std::vector<double> knots) {
    knots.push_back(lo);
    knots.push_back(hi);
    if (0.0 > lo && 0.0 < hi) knots.push_back(0.0);
    for (double b = h; b < std::max(-lo, hi); b *= 2.0) {
        if (b < hi) knots.push_back(b);
        if (-b > lo) knots.push_back(-b);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return knots;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(n));
    return *slot;
}

std::vector<double> belief_expectation(const BeliefDistribution& belief, std::size_t dim, const VectorIntegrand& f,
                                       double resolution, const QuadratureOptions& opts) {
    std::vector<double> result(dim, 0.0);
    std::vector<double> scratch(dim, 0.0);
    const auto& shape = belief.shape();

    if (std::holds_alternative<BeliefDistribution::PointMassZero>(shape)) {
        f(0.0, result);
        return result;
    }
    if (const auto* d = std::get_if<BeliefDistribution::DiscreteSymmetric>(&shape)) {
        for (const auto& at : d->atoms) {
            if (at.weight == 0.0) continue;
            std::fill(scratch.begin(), scratch.end(), 0.0);
            f(at.zeta, scratch);
            for (std::size_t k = 0; k < dim; ++k) result[k] += at.weight * scratch[k];
        }
        return result;
    }
    std::vector<Panel> panels;
    if (const auto* g = std::get_if<BeliefDistribution::GriddedDensity>(&shape)) {
        // The density is linear between nodes; its trapezoid mass is exact.
        const auto& x = g->nodes;
        const auto& d = g->densities;
        const double h = std::clamp(resolution, 1e-12, x.back() - x.front());
        const auto breaks = refined_breaks(x.front(), x.back(), h, x);
        std::size_t cell = 0;
        auto density_at = [&](double z) {
            while (cell + 2 < x.size() && z > x[cell + 1]) ++cell;
            const double t = (z - x[cell]) / (x[cell + 1] - x[cell]);
            return (1.0 - t) * d[cell] + t * d[cell + 1];
        };
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double l = breaks[i], r = breaks[i + 1];
            const double dl = density_at(l), dr = density_at(r);
            if (dl == 0.0 && dr == 0.0) continue;
            panels.push_back({l, r, dl, dr});
        }
    } else {
        const double a = std::get<BeliefDistribution::UniformSymmetric>(shape).a;
        const double dens = 1.0 / (2.0 * a);
        const double h = std::clamp(resolution, 1e-12, a);
        const auto breaks = refined_breaks(-a, a, h, {});
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) panels.push_back({breaks[i], breaks[i + 1], dens, dens});
    }

    std::vector<double> coarse(dim), fine(dim);
    for (const auto& p : panels) {
        int n = opts.initial_nodes;
        std::fill(coarse.begin(), coarse.end(), 0.0);
        panel_rule(p.l, p.r, p.dl, p.dr, n, dim, f, coarse, scratch);
        while (true) {
            const int next = 2 * n;
            std::fill(fine.begin(), fine.end(), 0.0);
            panel_rule(p.l, p.r, p.dl, p.dr, next, dim, f, fine, scratch);
            double diff = 0.0;
            for (std::size_t k = 0; k < dim; ++k) diff = std::max(diff, std::abs(fine[k] - coarse[k]));
            coarse.swap(fine);
            n = next;
            if (diff <= opts.tolerance * std::max(1.0, max_abs(coarse)) || 2 * n > opts.max_nodes) break;
        }
        for (std::size_t k = 0; k < dim; ++k) result[k] += coarse[k];
    }
    return result;
}

double belief_expectation(const BeliefDistribution& belief, const std::function<double(double)>& f, double resolution,
                          const QuadratureOptions& opts) {
    const auto v = belief_expectation(
        belief, 1, [&](double z, std::span<double> out) { out[0] = f(z); }, resolution, opts);
    return v[0];
}

}  // namespace fairvote
