#pragma once

#include <cstddef>
#include <vector>

#include "mgaoi/distributions.hpp"

namespace mgaoi {

struct SourceClass {
    double arrival_rate;
    ServiceDistribution service;

    double load() const { return arrival_rate * service.mean(); }
};

/// K Poisson sources sharing one FCFS server. Only obtainable through
/// validate(), so every instance is stable with positive rates.
class SystemModel {
public:
    std::size_t size() const noexcept { return classes_.size(); }
    const SourceClass& operator[](std::size_t k) const { return classes_.at(k); }
    const std::vector<SourceClass>& classes() const noexcept { return classes_; }

    double class_load(std::size_t k) const { return loads_.at(k); }
    double total_rate() const noexcept { return total_rate_; }
    double total_load() const noexcept { return total_load_; }

    // Service law of an arbitrary packet: rate-weighted mixture of all classes.
    ServiceDistribution aggregate_service() const;

private:
    friend SystemModel validate(std::vector<SourceClass> classes);
    SystemModel() = default;

    std::vector<SourceClass> classes_;
    std::vector<double> loads_;
    double total_rate_ = 0.0;
    double total_load_ = 0.0;
};

// Loads must satisfy rho_all < 1 - kStabilityMargin.
inline constexpr double kStabilityMargin = 1e-12;

/// Throws ValidationError naming the class for nonpositive rates, and
/// reporting the computed total load when the system is unstable.
SystemModel validate(std::vector<SourceClass> classes);

/// Superposition of every class except the tagged one.
struct BackgroundProcess {
    double rate = 0.0;  // lambda+
    ServiceDistribution service = ServiceDistribution::exponential(1.0);  // placeholder when rate == 0
    double load = 0.0;  // rho+

    bool empty() const noexcept { return rate == 0.0; }
};

BackgroundProcess aggregate_background(const SystemModel& model, std::size_t tagged);

}  // namespace mgaoi
