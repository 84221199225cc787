#include <cmath>

#include "doctest.h"
#include "mgaoi/error.hpp"
#include "mgaoi/model.hpp"
#include "support.hpp"

using namespace mgaoi;
using doctest::Approx;

TEST_SUITE("model") {

TEST_CASE("validate computes totals") {
    auto m = testing::two_class_mm1();
    CHECK(m.size() == 2);
    CHECK(m.total_load() == Approx(0.5).epsilon(1e-15));
    CHECK(m.total_rate() == Approx(0.5).epsilon(1e-15));
    CHECK(m.class_load(1) == 0.25);
}

TEST_CASE("validate rejects unstable and nonpositive input") {
    auto e = ServiceDistribution::exponential(1.0);
    try {
        validate({SourceClass{1.0, e}});
        FAIL("expected instability error");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("rho_all = 1") != std::string::npos);
    }
    try {
        validate({SourceClass{0.2, e}, SourceClass{0.0, e}});
        FAIL("expected rate error");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("class 1") != std::string::npos);
    }
    CHECK_THROWS_AS(validate({SourceClass{-0.1, e}}), ValidationError);
    CHECK_THROWS_AS(validate({}), ValidationError);
    // Just inside the strict margin.
    CHECK_THROWS_AS(validate({SourceClass{1.0 - 1e-13, e}}), ValidationError);
    CHECK_NOTHROW(validate({SourceClass{1.0 - 1e-9, e}}));
}

TEST_CASE("aggregate_background examples") {
    SUBCASE("two identical classes") {
        auto bg = aggregate_background(testing::two_class_mm1(), 0);
        CHECK(bg.rate == 0.25);
        CHECK(bg.load == 0.25);
        CHECK(bg.service.family() == Family::exponential);
        CHECK(bg.service.lst(0.7) == Approx(1.0 / 1.7).epsilon(1e-15));
    }
    SUBCASE("three classes give rate-proportional weights") {
        auto e = ServiceDistribution::exponential(1.0);
        auto d = ServiceDistribution::deterministic(0.5);
        auto m = testing::make_model({{0.1, e}, {0.2, e}, {0.2, d}});
        auto bg = aggregate_background(m, 0);
        CHECK(bg.rate == Approx(0.4).epsilon(1e-15));
        REQUIRE(bg.service.family() == Family::mixture);
        const auto& mix = std::get<ServiceDistribution::Mixture>(bg.service.params());
        CHECK(mix.weights[0] == Approx(0.5).epsilon(1e-15));
        CHECK(mix.weights[1] == Approx(0.5).epsilon(1e-15));
        CHECK(bg.load == Approx(0.2 + 0.1).epsilon(1e-15));
    }
    SUBCASE("single class has an empty background") {
        auto bg = aggregate_background(testing::single_mm1(), 0);
        CHECK(bg.rate == 0.0);
        CHECK(bg.load == 0.0);
        CHECK(bg.empty());
    }
    CHECK_THROWS_AS(aggregate_background(testing::two_class_mm1(), 2), DomainError);
}

TEST_CASE("per-tagged-class totals are conserved") {
    for (const auto& m : {testing::two_class_mm1(), testing::heterogeneous(), testing::gamma_uniform(),
                          testing::single_mm1()}) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            auto bg = aggregate_background(m, k);
            CHECK(std::abs(bg.rate + m[k].arrival_rate - m.total_rate()) <= 1e-14);
            CHECK(std::abs(bg.load + m.class_load(k) - m.total_load()) <= 1e-14);
            if (!bg.empty()) CHECK(bg.load == Approx(bg.rate * bg.service.mean()).epsilon(1e-14));
        }
    }
}

TEST_CASE("aggregate service splits into tagged and background parts") {
    for (const auto& m : {testing::heterogeneous(), testing::gamma_uniform(), testing::deterministic_mixed()}) {
        const auto all = m.aggregate_service();
        for (std::size_t k = 0; k < m.size(); ++k) {
            auto bg = aggregate_background(m, k);
            for (int i = 0; i < 20; ++i) {
                cplx s(0.1 * i, 0.37 * i - 2.0);
                cplx split = (m[k].arrival_rate * m[k].service.lst(s) + bg.rate * bg.service.lst(s)) / m.total_rate();
                CHECK(std::abs(all.lst(s) - split) <= 1e-12);
            }
        }
    }
}

}  // TEST_SUITE
