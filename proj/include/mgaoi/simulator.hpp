#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mgaoi/model.hpp"

namespace mgaoi {

struct SimConfig {
    double horizon = 1e6;
    double warmup_fraction = 0.1;
    int replications = 10;
    std::uint64_t seed = 1;
    // Ascending AoI values at which the time-average CDF is recorded. May be empty.
    std::vector<double> cdf_grid;
    // Worker threads for replications; 0 picks the hardware concurrency.
    int threads = 0;

    void check() const;
};

// Replication mean with a 95% Student-t half-width (NaN for a single replication).
struct Estimate {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
};

struct ClassStatistics {
    Estimate mean_aoi;  // time average of the sawtooth
    Estimate mean_delay;
    Estimate mean_peak_aoi;
    Estimate mean_intergeneration;
    Estimate throughput;  // delivered packets per unit time
    std::vector<double> aoi_cdf;
    std::vector<double> aoi_cdf_halfwidth;
    std::uint64_t updates = 0;  // monitor updates after warmup, summed over replications
};

namespace detail {
// NaN half-widths (single replication) compare equal to themselves.
inline bool same_bits(double x, double y) { return x == y || (x != x && y != y); }
}  // namespace detail

inline bool operator==(const Estimate& a, const Estimate& b) {
    return detail::same_bits(a.mean, b.mean) && detail::same_bits(a.ci_halfwidth, b.ci_halfwidth);
}

inline bool operator==(const ClassStatistics& a, const ClassStatistics& b) {
    auto same_vec = [](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!detail::same_bits(x[i], y[i])) return false;
        return true;
    };
    return a.mean_aoi == b.mean_aoi && a.mean_delay == b.mean_delay && a.mean_peak_aoi == b.mean_peak_aoi &&
           a.mean_intergeneration == b.mean_intergeneration && a.throughput == b.throughput &&
           same_vec(a.aoi_cdf, b.aoi_cdf) && same_vec(a.aoi_cdf_halfwidth, b.aoi_cdf_halfwidth) &&
           a.updates == b.updates;
}

struct SimulationResult {
    std::vector<ClassStatistics> classes;
    Estimate busy_fraction;
    std::vector<double> cdf_grid;
    std::uint64_t base_seed = 0;
    int replications = 0;

    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Event-driven FCFS single-server simulation with one Poisson stream per
/// class. Per-class AoI sawtooth paths are integrated exactly between
/// monitor updates. Every delivered packet is checked for FCFS order and for
/// peak = delay + inter-generation gap; a violation throws SimulationError.
///
/// Random streams are derived from (seed, replication, class, purpose), so
/// results do not depend on the number of worker threads.
SimulationResult simulate(const SystemModel& model, const SimConfig& cfg);

/// Fraction-of-time AoI CDF for one class at points of the recorded grid.
/// Throws SimulationError if the class saw fewer than 1000 updates, and
/// DomainError if a requested point is not on the recorded grid.
std::vector<double> empirical_aoi_cdf(const SimulationResult& result, std::size_t cls, std::span<const double> x);

/// Exact occupation-time accumulator for a piecewise-linear age path.
/// Each segment grows with unit slope from start_age for `duration`.
class AgeOccupancy {
public:
    explicit AgeOccupancy(std::vector<double> grid);

    void add_segment(double start_age, double duration);

    // Fraction of observed time with age <= x, per grid point.
    std::vector<double> cdf() const;
    double observed_time() const noexcept { return observed_; }

private:
    std::vector<double> grid_;
    std::vector<double> slope_;     // difference array of the coefficient on x_i
    std::vector<double> constant_;  // difference array of the constant term
    double observed_ = 0.0;
};

}  // namespace mgaoi
