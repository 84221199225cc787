#include <cmath>
#include <random>

#include "doctest.h"
#include "mgaoi/distributions.hpp"
#include "mgaoi/error.hpp"
#include "support.hpp"

using namespace mgaoi;
using doctest::Approx;

namespace {

std::vector<ServiceDistribution> all_families() {
    return {
        ServiceDistribution::exponential(1.3),
        ServiceDistribution::deterministic(0.7),
        ServiceDistribution::erlang(3, 2.5),
        ServiceDistribution::hyperexponential({0.3, 0.7}, {0.5, 3.0}),
        ServiceDistribution::gamma(0.6, 1.1),
        ServiceDistribution::uniform(0.2, 1.4),
        ServiceDistribution::mixture({0.25, 0.75}, {ServiceDistribution::deterministic(2.0),
                                                    ServiceDistribution::erlang(2, 4.0)}),
    };
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("closed-form values") {
    CHECK(ServiceDistribution::exponential(1.0).lst(0.5) == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ServiceDistribution::deterministic(2.0).lst(1.0) == Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(ServiceDistribution::exponential(1.0).lst_deriv(0.0) == 1.0);
    CHECK(ServiceDistribution::exponential(1.0).lst_deriv(1.0) == Approx(0.25).epsilon(1e-15));
    CHECK(ServiceDistribution::deterministic(3.5).lst_deriv(0.0) == 3.5);
    CHECK(ServiceDistribution::exponential(1.0).moment(2) == 2.0);
    CHECK(ServiceDistribution::deterministic(3.0).moment(2) == 9.0);
    CHECK(ServiceDistribution::erlang(2, 2.0).moment(1) == 1.0);
}

TEST_CASE("normalization at the origin is exact") {
    for (const auto& d : all_families()) {
        CAPTURE(d.describe());
        CHECK(d.lst(0.0) == 1.0);
        CHECK(d.lst(cplx(0.0, 0.0)) == cplx(1.0, 0.0));
        CHECK(d.lst_deriv(0.0) == Approx(d.moment(1)).epsilon(1e-14));
        CHECK(d.moment(1) > 0.0);
        CHECK(d.moment(2) >= d.moment(1) * d.moment(1));
    }
}

TEST_CASE("real argument gives real values in (0, 1], strictly decreasing") {
    for (const auto& d : all_families()) {
        CAPTURE(d.describe());
        double prev = 1.0;
        for (int i = 1; i <= 50; ++i) {
            double s = 10.0 * i / 50.0;
            cplx v = d.lst(cplx(s, 0.0));
            CHECK(v.imag() == 0.0);
            CHECK(v.real() > 0.0);
            CHECK(v.real() <= 1.0);
            CHECK(v.real() < prev);
            prev = v.real();
            CHECK(d.lst_deriv(s) >= 0.0);
        }
    }
}

TEST_CASE("derivative matches central finite differences") {
    for (const auto& d : all_families()) {
        CAPTURE(d.describe());
        for (double s : {0.1, 0.5, 1.0, 3.0, 7.5}) {
            double h = 1e-5 * std::max(1.0, s);
            double fd = testing::central_difference([&](double x) { return d.lst(x); }, s, h);
            CHECK(-fd == Approx(d.lst_deriv(s)).epsilon(1e-6));
        }
    }
}

TEST_CASE("moments recovered from one-sided derivatives at 0+") {
    for (const auto& d : all_families()) {
        CAPTURE(d.describe());
        const double m1 = d.moment(1);
        auto f = [&](double s) { return d.lst(s); };
        auto f1 = [&](double s) { return d.lst_deriv(s); };
        CHECK(-testing::right_derivative(f, 0.0, 1e-2 / std::max(1.0, m1)) == Approx(m1).epsilon(1e-6));
        // second moment: -d/ds of E[Y e^{-sY}]
        CHECK(-testing::right_derivative(f1, 0.0, 1e-2 / std::max(1.0, m1)) == Approx(d.moment(2)).epsilon(1e-4));
    }
}

TEST_CASE("complex-argument LSTs agree with quadrature of the density") {
    const cplx s(0.7, 2.3);
    auto check = [&](const ServiceDistribution& d, auto density, double lo, double hi) {
        auto integrand = [&](double y) { return density(y) * std::exp(-s * y); };
        cplx q = testing::simpson(integrand, lo, hi, 20000);
        auto integrand1 = [&](double y) { return y * density(y) * std::exp(-s * y); };
        cplx q1 = testing::simpson(integrand1, lo, hi, 20000);
        CHECK(std::abs(d.lst(s) - q) < 1e-9);
        CHECK(std::abs(d.lst_deriv(s) - q1) < 1e-9);
    };
    check(ServiceDistribution::exponential(1.5), [](double y) { return 1.5 * std::exp(-1.5 * y); }, 0.0, 40.0);
    check(ServiceDistribution::erlang(3, 2.0),
          [](double y) { return 8.0 * y * y * std::exp(-2.0 * y) / 2.0; }, 0.0, 60.0);
    check(ServiceDistribution::uniform(0.5, 2.0), [](double) { return 1.0 / 1.5; }, 0.5, 2.0);

    // Gamma density has a y^{1.5} cusp at 0; integrate in u = sqrt(y).
    auto g = ServiceDistribution::gamma(2.5, 1.5);
    auto density = [](double y) { return std::pow(1.5, 2.5) * std::pow(y, 1.5) * std::exp(-1.5 * y) / std::tgamma(2.5); };
    cplx q = testing::simpson([&](double u) { return 2.0 * u * density(u * u) * std::exp(-s * (u * u)); }, 0.0, 9.0, 20000);
    cplx q1 = testing::simpson(
        [&](double u) { return 2.0 * u * u * u * density(u * u) * std::exp(-s * (u * u)); }, 0.0, 9.0, 20000);
    CHECK(std::abs(g.lst(s) - q) < 1e-9);
    CHECK(std::abs(g.lst_deriv(s) - q1) < 1e-9);
}

TEST_CASE("uniform series branch joins the closed form") {
    auto d = ServiceDistribution::uniform(0.0, 1.0);
    for (double r : {0.49, 0.5, 0.51}) {
        cplx s = std::polar(r, 0.3);
        auto closed = (1.0 - std::exp(-s)) / s;
        CHECK(std::abs(d.lst(s) - closed) < 1e-14);
        auto closed_d = -(std::exp(-s) * (1.0 + s) - 1.0) / (s * s);
        CHECK(std::abs(d.lst_deriv(s) - closed_d) < 1e-14);
    }
}

TEST_CASE("magnitude bounded by one on the right half-plane") {
    for (const auto& d : all_families()) {
        for (double re : {0.0, 0.3, 2.0})
            for (double im : {-40.0, -1.0, 0.5, 13.0}) CHECK(std::abs(d.lst(cplx(re, im))) <= 1.0 + 1e-15);
    }
}

TEST_CASE("domain and parameter errors") {
    auto e = ServiceDistribution::exponential(1.0);
    CHECK_THROWS_AS(e.lst(cplx(-0.1, 0.0)), DomainError);
    CHECK_THROWS_AS(e.lst_deriv(cplx(-1e-9, 3.0)), DomainError);
    CHECK_THROWS_AS(e.moment(3), DomainError);
    CHECK_THROWS_AS(ServiceDistribution::exponential(0.0), ValidationError);
    CHECK_THROWS_AS(ServiceDistribution::deterministic(-1.0), ValidationError);
    CHECK_THROWS_AS(ServiceDistribution::erlang(0, 1.0), ValidationError);
    CHECK_THROWS_AS(ServiceDistribution::uniform(1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(ServiceDistribution::hyperexponential({0.5, 0.6}, {1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(ServiceDistribution::mixture({0.5, 0.5 + 1e-11}, {e, e}), ValidationError);
    CHECK_NOTHROW(ServiceDistribution::mixture({0.5, 0.5 + 1e-13}, {e, e}));
    CHECK_THROWS_AS(ServiceDistribution::mixture({1.2, -0.2}, {e, e}), ValidationError);
}

TEST_CASE("sampling") {
    RandomStream rng(7);
    CHECK(ServiceDistribution::deterministic(2.0).sample(rng) == 2.0);

    auto degenerate = ServiceDistribution::mixture({1.0, 0.0}, {ServiceDistribution::deterministic(1.0),
                                                                 ServiceDistribution::deterministic(5.0)});
    for (int i = 0; i < 1000; ++i) REQUIRE(degenerate.sample(rng) == 1.0);

    SUBCASE("exponential sample mean within 0.5%") {
        RandomStream r(12345);
        auto d = ServiceDistribution::exponential(1.0);
        double sum = 0.0;
        for (int i = 0; i < 1'000'000; ++i) sum += d.sample(r);
        CHECK(sum / 1e6 == Approx(1.0).epsilon(0.005));
    }

    SUBCASE("first two moments within three standard errors") {
        for (const auto& d : all_families()) {
            CAPTURE(d.describe());
            RandomStream r(2024);
            const int n = 1'000'000;
            double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
            for (int i = 0; i < n; ++i) {
                double y = d.sample(r);
                REQUIRE(y >= 0.0);
                double y2 = y * y;
                s1 += y;
                s2 += y2;
                s3 += y2 * y;
                s4 += y2 * y2;
            }
            double m1 = s1 / n, m2 = s2 / n;
            double se1 = std::sqrt((m2 - m1 * m1) / n);
            double se2 = std::sqrt((s4 / n - m2 * m2) / n);
            CHECK(std::abs(m1 - d.moment(1)) <= 3.0 * se1 + 1e-12);
            CHECK(std::abs(m2 - d.moment(2)) <= 3.0 * se2 + 1e-12);
        }
    }

    SUBCASE("reproducible given stream state") {
        auto d = ServiceDistribution::gamma(0.8, 1.0);
        RandomStream a(99), b(99);
        for (int i = 0; i < 100; ++i) REQUIRE(d.sample(a) == d.sample(b));
    }
}

}  // TEST_SUITE
