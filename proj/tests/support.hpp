#pragma once

// Test-only oracles and fixtures. Nothing here calls into the code paths it
// is used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "mgaoi/model.hpp"

namespace mgaoi::testing {

inline SystemModel make_model(std::vector<std::pair<double, ServiceDistribution>> classes) {
    std::vector<SourceClass> src;
    for (auto& [rate, dist] : classes) src.push_back(SourceClass{rate, dist});
    return validate(std::move(src));
}

inline SystemModel two_class_mm1() {
    auto e = ServiceDistribution::exponential(1.0);
    return make_model({{0.25, e}, {0.25, e}});
}

inline SystemModel single_mm1(double rate = 0.5) {
    return make_model({{rate, ServiceDistribution::exponential(1.0)}});
}

// Tagged deterministic(1) at 0.3 with exponential(1) background at 0.4.
inline SystemModel deterministic_mixed() {
    return make_model({{0.3, ServiceDistribution::deterministic(1.0)}, {0.4, ServiceDistribution::exponential(1.0)}});
}

// Deterministic tagged class with Erlang and hyperexponential background.
inline SystemModel heterogeneous() {
    return make_model({{0.2, ServiceDistribution::deterministic(1.0)},
                       {0.15, ServiceDistribution::erlang(2, 2.0)},
                       {0.1, ServiceDistribution::hyperexponential({0.4, 0.6}, {0.5, 2.0})}});
}

inline SystemModel gamma_uniform() {
    return make_model({{0.3, ServiceDistribution::gamma(1.5, 2.0)}, {0.2, ServiceDistribution::uniform(0.5, 1.5)},
                       {0.1, ServiceDistribution::exponential(2.0)}});
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
auto simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    auto sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * (h / 3.0);
}

// One-sided Richardson-extrapolated derivative of a real function at x0 from the right.
inline double right_derivative(const std::function<double(double)>& f, double x0, double h) {
    double t[5][5];
    for (int j = 0; j < 5; ++j) {
        double hj = h / std::pow(2.0, j);
        t[j][0] = (f(x0 + hj) - f(x0)) / hj;
        for (int k = 1; k <= j; ++k) t[j][k] = t[j][k - 1] + (t[j][k - 1] - t[j - 1][k - 1]) / (std::pow(2.0, k) - 1.0);
    }
    return t[4][4];
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace mgaoi::testing
