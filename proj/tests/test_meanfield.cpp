#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "fairvote/meanfield.hpp"

using namespace fairvote;

TEST_CASE("solve_cj residual and known roots") {
    double prev = 0.0;
    for (double j : {1.01, 1.1, 1.5, 2.0, 5.0, 10.0}) {
        CAPTURE(j);
        const auto c = solve_cj(j);
        CHECK(std::abs(std::tanh(j * c.value) - c.value) <= 1e-12);
        CHECK(c.residual <= 1e-12);
        CHECK(c.value > prev);
        prev = c.value;
    }
    CHECK(solve_cj(2.0).value == doctest::Approx(0.957504).epsilon(1e-5));
    CHECK(solve_cj(1.5).value == doctest::Approx(0.858560).epsilon(1e-5));
    CHECK(solve_cj(1.01).value < 0.2);
    CHECK(solve_cj(50.0).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(solve_cj(1.0), SubcriticalCoupling);
    CHECK_THROWS_AS(solve_cj(0.5), SubcriticalCoupling);
}

TEST_CASE("asymptotic weight across the transition") {
    CHECK(asymptotic_weight_meanfield(0.0, 10000).value == doctest::Approx(79.788).epsilon(1e-4));
    CHECK(asymptotic_weight_meanfield(0.75, 10000).value == doctest::Approx(159.577).epsilon(1e-4));
    CHECK(asymptotic_weight_meanfield(2.0, 1000).value == doctest::Approx(957.5).epsilon(1e-4));
    CHECK(asymptotic_weight_meanfield(2.0, 1000).method == EstimateMethod::Asymptotic);
    CHECK_THROWS_AS(asymptotic_weight_meanfield(1.0, 1000), DomainError);
}

TEST_CASE("exact margins at N = 10^4 track the asymptotics") {
    const auto t0 = std::chrono::steady_clock::now();
    const double sub = expected_margin_exact(VotingModel::mean_field(0.5), 10000).value / 100.0;
    CHECK(sub == doctest::Approx(std::sqrt(2.0 / std::numbers::pi) / std::sqrt(0.5)).epsilon(0.02));
    const double sup = expected_margin_exact(VotingModel::mean_field(1.5), 10000).value / 10000.0;
    CHECK(sup == doctest::Approx(solve_cj(1.5).value).epsilon(0.02));
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
}

TEST_CASE("exact to asymptotic ratio approaches one") {
    for (double j : {0.5, 1.5}) {
        CAPTURE(j);
        double prev = 1e9;
        for (Population n : {1000, 10000, 100000}) {
            const double ratio = expected_margin_exact(VotingModel::mean_field(j), n).value /
                                 asymptotic_weight_meanfield(j, n).value;
            CHECK(std::abs(ratio - 1.0) < prev);
            prev = std::abs(ratio - 1.0);
        }
        CHECK(prev < 0.01);
    }
}

TEST_CASE("phase transition in the fitted exponent") {
    const auto grid = geometric_grid(256, 16384, 2);
    REQUIRE(grid.size() == 7);
    auto alpha = [&](double j) {
        return scaling_fit([j](Population) { return VotingModel::mean_field(j); }, grid).exponent;
    };
    CHECK(alpha(0.9) == doctest::Approx(0.5).epsilon(0.1));
    CHECK(alpha(1.1) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(alpha(0.5) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(alpha(1.5) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(scaling_fit([](Population) { return VotingModel::independent(); }, grid).exponent ==
          doctest::Approx(0.5).epsilon(0.04));
    // J = 1 is computable even though it has no asymptotic formula.
    CHECK_NOTHROW(alpha(1.0));
}

TEST_CASE("power law fit") {
    const auto f = fit_power_law({{10, 3 * std::pow(10, 0.7)}, {100, 3 * std::pow(100, 0.7)}, {1000, 3 * std::pow(1000, 0.7)}});
    CHECK(f.exponent == doctest::Approx(0.7));
    CHECK(f.prefactor() == doctest::Approx(3.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_power_law({{10, 1}, {10, 2}, {10, 3}}), DomainError);
    CHECK_THROWS_AS(fit_power_law({{10, 1}, {20, 0}}), DomainError);
    CHECK_THROWS_AS(scaling_fit([](Population) { return VotingModel::independent(); }, {10, 10, 100}), DomainError);
    CHECK_THROWS_AS(geometric_grid(10, 5, 2), DomainError);
    CHECK(geometric_grid(256, 16384, 2).back() == 16384);
}

TEST_CASE("Monte Carlo scaling fit is reproducible") {
    ScalingOptions opts{EstimatorMode::MonteCarlo, 4000, {8, 2}};
    const auto grid = geometric_grid(64, 1024, 2);
    auto fam = [](Population) { return VotingModel::mean_field(1.5); };
    const auto a = scaling_fit(fam, grid, opts);
    const auto b = scaling_fit(fam, grid, opts);
    CHECK(a.exponent == b.exponent);
    CHECK(a.exponent == doctest::Approx(1.0).epsilon(0.1));
}
