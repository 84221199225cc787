#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mgaoi/analysis.hpp"
#include "mgaoi/error.hpp"
#include "mgaoi/simulator.hpp"
#include "support.hpp"

using namespace mgaoi;
using doctest::Approx;

namespace {

SimConfig short_config(double horizon = 2e5, int reps = 4) {
    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.replications = reps;
    cfg.seed = 11;
    return cfg;
}

bool within(const Estimate& e, double target, double k = 3.0) {
    return std::abs(e.mean - target) <= k * e.ci_halfwidth;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("config validation") {
    auto m = testing::single_mm1();
    SimConfig cfg = short_config();
    cfg.horizon = 0.0;
    CHECK_THROWS_AS(simulate(m, cfg), ConfigError);
    cfg = short_config();
    cfg.replications = 0;
    CHECK_THROWS_AS(simulate(m, cfg), ConfigError);
    cfg = short_config();
    cfg.warmup_fraction = 1.0;
    CHECK_THROWS_AS(simulate(m, cfg), ConfigError);
    cfg = short_config();
    cfg.cdf_grid = {1.0, 0.5};
    CHECK_THROWS_AS(simulate(m, cfg), ConfigError);
}

TEST_CASE("horizon too short") {
    // At this rate an arrival inside a unit horizon has probability about 1e-6.
    auto m = testing::make_model({{1e-6, ServiceDistribution::exponential(1.0)}});
    SimConfig cfg = short_config(1.0, 1);
    CHECK_THROWS_AS(simulate(m, cfg), SimulationError);
}

TEST_CASE("determinism across runs and thread counts") {
    auto m = testing::heterogeneous();
    SimConfig cfg = short_config(5e4, 3);
    cfg.cdf_grid = {0.5, 1.0, 2.0, 4.0, 8.0};
    cfg.threads = 1;
    auto a = simulate(m, cfg);
    auto b = simulate(m, cfg);
    cfg.threads = 3;
    auto c = simulate(m, cfg);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.base_seed == 11);
    cfg.seed = 12;
    CHECK_FALSE(simulate(m, cfg) == a);
}

TEST_CASE("single replication has no interval") {
    auto r = simulate(testing::single_mm1(), short_config(2e4, 1));
    CHECK(std::isnan(r.classes[0].mean_aoi.ci_halfwidth));
    CHECK(r == r);
}

TEST_CASE("occupancy accumulator matches per-segment clamping") {
    std::vector<double> grid{0.0, 0.3, 1.0, 1.7, 2.5, 4.0, 9.0};
    AgeOccupancy occ(grid);
    std::vector<double> inside(grid.size(), 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    double total = 0.0;
    for (int i = 0; i < 2000; ++i) {
        double a = u(rng), d = u(rng);
        occ.add_segment(a, d);
        total += d;
        for (std::size_t j = 0; j < grid.size(); ++j) inside[j] += std::clamp(grid[j] - a, 0.0, d);
    }
    auto cdf = occ.cdf();
    CHECK(occ.observed_time() == Approx(total).epsilon(1e-13));
    for (std::size_t j = 0; j < grid.size(); ++j) CHECK(cdf[j] == Approx(inside[j] / total).epsilon(1e-12));
    CHECK(cdf.front() == 0.0);
    CHECK(cdf.back() == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("single class mean AoI") {
    auto r = simulate(testing::single_mm1(), short_config(1e6, 4));
    const auto& c = r.classes[0];
    CHECK(c.mean_aoi.mean == Approx(3.5).epsilon(0.01));
    CHECK(within(c.mean_delay, 2.0));
    CHECK(within(c.mean_peak_aoi, 4.0));
    CHECK(within(c.mean_intergeneration, 2.0));
}

TEST_CASE("sanity invariants") {
    for (const auto& m : {testing::two_class_mm1(), testing::deterministic_mixed(), testing::heterogeneous()}) {
        auto r = simulate(m, short_config(2e5, 6));
        CHECK(within(r.busy_fraction, m.total_load()));
        for (std::size_t k = 0; k < m.size(); ++k) {
            const auto& c = r.classes[k];
            CAPTURE(k);
            CHECK(within(c.throughput, m[k].arrival_rate));
            double slack = c.mean_delay.ci_halfwidth + c.mean_intergeneration.ci_halfwidth;
            CHECK(std::abs(c.mean_peak_aoi.mean - c.mean_delay.mean - c.mean_intergeneration.mean) <=
                  3.0 * (c.mean_peak_aoi.ci_halfwidth + slack));
            CHECK(c.mean_aoi.mean >= c.mean_delay.mean - 3.0 * c.mean_delay.ci_halfwidth);
            CHECK(c.mean_aoi.mean > 0.0);
            auto a = mean_metrics(make_tagged_view(m, k));
            CHECK(within(c.mean_aoi, a.mean_aoi, 4.0));
            CHECK(within(c.mean_delay, a.mean_delay, 4.0));
        }
    }
}

TEST_CASE("empirical cdf") {
    SimConfig cfg = short_config(2e5, 2);
    cfg.cdf_grid = {0.0, 1.0, 2.0, 5.0, 10.0, 175.0};
    auto r = simulate(testing::single_mm1(), cfg);
    auto all = empirical_aoi_cdf(r, 0, cfg.cdf_grid);
    CHECK(all[0] == 0.0);
    CHECK(all.back() >= 0.999);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i] >= all[i - 1]);
    const std::vector<double> some{2.0, 10.0};
    auto part = empirical_aoi_cdf(r, 0, some);
    CHECK(part[0] == all[2]);
    CHECK(part[1] == all[4]);

    const std::vector<double> off{3.0};
    CHECK_THROWS_AS(empirical_aoi_cdf(r, 0, off), DomainError);
    CHECK_THROWS_AS(empirical_aoi_cdf(r, 1, some), DomainError);

    SimConfig tiny = cfg;
    tiny.horizon = 200.0;
    auto t = simulate(testing::single_mm1(), tiny);
    CHECK_THROWS_AS(empirical_aoi_cdf(t, 0, some), SimulationError);
}

}  // TEST_SUITE
