#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgaoi/analysis.hpp"
#include "mgaoi/scenario.hpp"
#include "mgaoi/simulator.hpp"

namespace mgaoi {

// CSV headers; column order is part of the file format.
inline constexpr const char* kAnalyzeHeader = "class,lambda,rho,gamma,mean_wait,mean_delay,mean_peak_aoi,mean_aoi";
inline constexpr const char* kDistHeader = "class,x,cdf,pdf";
inline constexpr const char* kSimulateHeader = "class,metric,estimate,ci_halfwidth,seed";
inline constexpr const char* kValidateHeader =
    "class,metric,analytic,simulated,ci_halfwidth,relative_gap,threshold,status";

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitNumeric = 3, kExitFail = 4 };

struct AnalyzeRow {
    std::size_t cls;
    double lambda;
    double rho;
    AoIMetrics metrics;

    friend bool operator==(const AnalyzeRow& a, const AnalyzeRow& b) {
        return a.cls == b.cls && a.lambda == b.lambda && a.rho == b.rho && a.metrics.gamma == b.metrics.gamma &&
               a.metrics.mean_wait == b.metrics.mean_wait && a.metrics.mean_delay == b.metrics.mean_delay &&
               a.metrics.mean_peak_aoi == b.metrics.mean_peak_aoi && a.metrics.mean_aoi == b.metrics.mean_aoi;
    }
};

struct DistRow {
    std::size_t cls;
    double x;
    double cdf;
    double pdf;

    friend bool operator==(const DistRow&, const DistRow&) = default;
};

// One line of the simulate CSV. `cls` is empty for system-wide metrics.
struct SimulateRow {
    std::string cls;
    std::string metric;
    double estimate;
    double ci_halfwidth;
    std::uint64_t seed;
};

struct ValidationCheck {
    std::string cls;
    std::string metric;
    double analytic;
    double simulated;
    double ci_halfwidth;
    double relative_gap;
    double threshold;
    bool pass;
    std::string cause;  // set when a sub-step failed
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
};

// Default AoI grid: 200 points spanning [0, 20 E[A]].
std::vector<double> default_x_grid(double mean_aoi);
// Default transform self-test grid: 20 log-spaced points in [0.05, 20] / E[A].
std::vector<double> default_s_grid(double mean_aoi);

std::vector<AnalyzeRow> run_analyze(const Scenario& sc);
std::vector<DistRow> run_dist(const Scenario& sc);
SimulationResult run_simulate(const Scenario& sc);
std::vector<SimulateRow> simulate_rows(const SimulationResult& result);

/// Analytic-vs-simulation comparison. Means pass when the relative gap is
/// within max(tolerance, 3 CI half-widths / analytic); the AoI CDF passes when
/// its sup-norm gap is within the tolerance; transform self-checks use a
/// fixed 1e-10. Sub-step errors become failed checks carrying the cause.
ValidationReport run_validate(const Scenario& sc);

std::string format_number(double v);

void write_analyze_csv(std::ostream& os, const std::vector<AnalyzeRow>& rows);
void write_dist_csv(std::ostream& os, const std::vector<DistRow>& rows);
void write_simulate_csv(std::ostream& os, const std::vector<SimulateRow>& rows);
void write_validate_csv(std::ostream& os, const ValidationReport& report);

std::vector<AnalyzeRow> read_analyze_csv(std::istream& is);
std::vector<DistRow> read_dist_csv(std::istream& is);

// Plain-text tables for the terminal.
void print_analyze_table(std::ostream& os, const Scenario& sc, const std::vector<AnalyzeRow>& rows);
void print_validate_report(std::ostream& os, const ValidationReport& report);

}  // namespace mgaoi
