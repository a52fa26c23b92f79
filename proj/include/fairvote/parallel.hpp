#pragma once

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "fairvote/rng.hpp"

namespace fairvote {

/// Streaming mean/variance with an associative merge (Chan et al.).
struct RunningStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) noexcept {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(count + o.count);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.count) / n;
        m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
    }

    /// Sample variance (n - 1 denominator).
    double variance() const noexcept { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double std_error() const noexcept { return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

/// Splits `total` work items over `workers` threads. Worker w handles a
/// contiguous share and owns RngStream(seed, w). Returns per-worker results in
/// worker order so callers merge deterministically.
template <class Result, class Fn>
std::vector<Result> run_partitioned(std::int64_t total, std::uint64_t seed, unsigned workers, Fn fn) {
    if (workers == 0) workers = 1;
    std::vector<Result> results(workers);
    const std::int64_t base = total / workers;
    const std::int64_t extra = total % workers;
    auto job = [&](unsigned w) {
        const std::int64_t share = base + (static_cast<std::int64_t>(w) < extra ? 1 : 0);
        RngStream rng(seed, w);
        results[w] = fn(share, rng);
    };
    if (workers == 1) {
        job(0);
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace fairvote
