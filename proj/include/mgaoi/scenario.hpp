#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mgaoi/distributions.hpp"
#include "mgaoi/inversion.hpp"
#include "mgaoi/model.hpp"
#include "mgaoi/simulator.hpp"

namespace mgaoi {

struct ClassSpec {
    std::string name;  // optional; empty when unnamed
    double arrival_rate;
    ServiceDistribution service;
};

struct AnalysisOptions {
    std::vector<std::size_t> tagged;  // empty: every class
    std::vector<double> s_grid;       // empty: derived from E[A]
    std::vector<double> x_grid;       // empty: derived from E[A]
    InversionConfig inversion;
};

/// Parsed and validated scenario file. See docs/scenario.md for the schema.
struct Scenario {
    std::vector<ClassSpec> classes;
    AnalysisOptions analysis;
    SimConfig simulation;
    double tolerance = 0.01;
    std::string output_dir;

    SystemModel model() const;
    std::vector<std::size_t> tagged_classes() const;
    std::string class_label(std::size_t k) const;
};

// Throws ConfigError for malformed input, ValidationError for unstable or
// nonpositive-rate models. Messages name the offending field and class.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

// Command-line values that take precedence over the file.
struct Overrides {
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> horizon;
    std::optional<int> replications;
    std::optional<double> tolerance;
};

void apply_overrides(Scenario& scenario, const Overrides& overrides);

}  // namespace mgaoi
