#include "mgaoi/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mgaoi/error.hpp"
#include "mgaoi/inversion.hpp"

namespace mgaoi {

namespace {

constexpr double kTransformCheckTolerance = 1e-10;
constexpr int kDefaultGridPoints = 200;

Transform aoi_transform(const TaggedView& view) {
    return [&view](cplx s) { return aoi_lst(view, s); };
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ConfigError("CSV: cannot parse number '" + s + "'");
    return v;
}

std::size_t parse_index(const std::string& s) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw ConfigError("CSV: cannot parse class index '" + s + "'");
    return std::size_t(v);
}

template <class Row, class ParseRow>
std::vector<Row> read_csv(std::istream& is, const char* header, std::size_t columns, ParseRow parse_row) {
    std::string line;
    if (!std::getline(is, line) || line != header) {
        throw ConfigError(std::string("CSV: expected header '") + header + "'");
    }
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != columns) throw ConfigError("CSV: wrong number of columns in '" + line + "'");
        rows.push_back(parse_row(cells));
    }
    return rows;
}

ValidationCheck failed_check(std::string cls, std::string metric, const std::string& cause) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return ValidationCheck{std::move(cls), std::move(metric), nan, nan, nan, nan, nan, false, cause};
}

ValidationCheck mean_check(const std::string& cls, const char* metric, double analytic, const Estimate& sim,
                           double tolerance) {
    ValidationCheck c;
    c.cls = cls;
    c.metric = metric;
    c.analytic = analytic;
    c.simulated = sim.mean;
    c.ci_halfwidth = sim.ci_halfwidth;
    c.relative_gap = (sim.mean - analytic) / analytic;
    const double ci_allowance = std::isnan(sim.ci_halfwidth) ? 0.0 : 3.0 * sim.ci_halfwidth / std::abs(analytic);
    c.threshold = std::max(tolerance, ci_allowance);
    c.pass = std::abs(c.relative_gap) <= c.threshold;
    return c;
}

}  // namespace

bool ValidationReport::all_pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> default_x_grid(double mean_aoi) {
    std::vector<double> grid(kDefaultGridPoints);
    const double hi = 20.0 * mean_aoi;
    for (int i = 0; i < kDefaultGridPoints; ++i) grid[i] = hi * double(i) / double(kDefaultGridPoints - 1);
    return grid;
}

std::vector<double> default_s_grid(double mean_aoi) {
    constexpr int n = 20;
    std::vector<double> grid(n);
    const double lo = std::log(0.05), hi = std::log(20.0);
    for (int i = 0; i < n; ++i) grid[i] = std::exp(lo + (hi - lo) * double(i) / double(n - 1)) / mean_aoi;
    return grid;
}

std::vector<AnalyzeRow> run_analyze(const Scenario& sc) {
    const SystemModel model = sc.model();
    std::vector<AnalyzeRow> rows;
    for (std::size_t k : sc.tagged_classes()) {
        TaggedView view = make_tagged_view(model, k);
        rows.push_back(AnalyzeRow{k, view.rate, view.load, mean_metrics(view)});
    }
    return rows;
}

std::vector<DistRow> run_dist(const Scenario& sc) {
    const SystemModel model = sc.model();
    std::vector<DistRow> rows;
    for (std::size_t k : sc.tagged_classes()) {
        const TaggedView view = make_tagged_view(model, k);
        const AoIMetrics m = mean_metrics(view);
        const std::vector<double> grid = sc.analysis.x_grid.empty() ? default_x_grid(m.mean_aoi) : sc.analysis.x_grid;
        const Transform f = aoi_transform(view);
        const InvertedCdf cdf = invert_cdf(f, grid, sc.analysis.inversion);

        // AoI >= system delay > 0, so the density vanishes at the origin.
        std::vector<double> positive;
        for (double x : grid)
            if (x > 0.0) positive.push_back(x);
        const std::vector<double> pdf = invert_pdf(f, positive, sc.analysis.inversion);
        std::size_t p = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rows.push_back(DistRow{k, grid[i], cdf.values[i], grid[i] > 0.0 ? pdf[p++] : 0.0});
        }
    }
    return rows;
}

SimulationResult run_simulate(const Scenario& sc) {
    return simulate(sc.model(), sc.simulation);
}

std::vector<SimulateRow> simulate_rows(const SimulationResult& r) {
    std::vector<SimulateRow> rows;
    const std::uint64_t seed = r.base_seed;
    rows.push_back(SimulateRow{"all", "busy_fraction", r.busy_fraction.mean, r.busy_fraction.ci_halfwidth, seed});
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
        const auto& c = r.classes[k];
        const std::string cls = std::to_string(k);
        rows.push_back(SimulateRow{cls, "mean_aoi", c.mean_aoi.mean, c.mean_aoi.ci_halfwidth, seed});
        rows.push_back(SimulateRow{cls, "mean_delay", c.mean_delay.mean, c.mean_delay.ci_halfwidth, seed});
        rows.push_back(SimulateRow{cls, "mean_peak_aoi", c.mean_peak_aoi.mean, c.mean_peak_aoi.ci_halfwidth, seed});
        rows.push_back(SimulateRow{cls, "mean_intergeneration", c.mean_intergeneration.mean,
                                   c.mean_intergeneration.ci_halfwidth, seed});
        rows.push_back(SimulateRow{cls, "throughput", c.throughput.mean, c.throughput.ci_halfwidth, seed});
        rows.push_back(SimulateRow{cls, "updates", double(c.updates), std::numeric_limits<double>::quiet_NaN(), seed});
        for (std::size_t i = 0; i < r.cdf_grid.size(); ++i) {
            rows.push_back(SimulateRow{cls, "aoi_cdf@" + format_number(r.cdf_grid[i]), c.aoi_cdf[i],
                                       c.aoi_cdf_halfwidth[i], seed});
        }
    }
    return rows;
}

ValidationReport run_validate(const Scenario& sc) {
    ValidationReport report;
    const auto tagged = sc.tagged_classes();

    std::vector<TaggedView> views;
    std::vector<AoIMetrics> metrics;
    try {
        const SystemModel model = sc.model();
        for (std::size_t k : tagged) {
            views.push_back(make_tagged_view(model, k));
            metrics.push_back(mean_metrics(views.back()));
        }
    } catch (const Error& e) {
        report.checks.push_back(failed_check("all", "analyze", e.what()));
        return report;
    }

    double max_aoi = 0.0;
    for (const auto& m : metrics) max_aoi = std::max(max_aoi, m.mean_aoi);
    const std::vector<double> grid = sc.analysis.x_grid.empty() ? default_x_grid(max_aoi) : sc.analysis.x_grid;

    // Deterministic transform identities.
    for (std::size_t i = 0; i < views.size(); ++i) {
        const std::string cls = std::to_string(tagged[i]);
        const auto& v = views[i];
        try {
            const auto s_grid = sc.analysis.s_grid.empty() ? default_s_grid(metrics[i].mean_aoi) : sc.analysis.s_grid;
            double worst = 0.0;
            for (double s : s_grid) {
                for (cplx z : {cplx(s, 0.0), cplx(s, s)}) {
                    worst = std::max(worst, std::abs(aoi_lst(v, z) - aoi_lst_from_peak(v, z)));
                }
            }
            report.checks.push_back(ValidationCheck{cls, "transform_dual_path", 0.0, worst,
                                                    std::numeric_limits<double>::quiet_NaN(), worst,
                                                    kTransformCheckTolerance, worst <= kTransformCheckTolerance, ""});
            const double g = metrics[i].gamma;
            const double anchor = v.idle_fraction() * g / v.rate;
            const double got = delay_lst(v, cplx(g, 0.0)).real();
            const double gap = std::abs(got - anchor);
            report.checks.push_back(ValidationCheck{cls, "delay_lst_at_gamma", anchor, got,
                                                    std::numeric_limits<double>::quiet_NaN(), gap,
                                                    kTransformCheckTolerance, gap <= kTransformCheckTolerance, ""});
        } catch (const Error& e) {
            report.checks.push_back(failed_check(cls, "transform_dual_path", e.what()));
        }
    }

    SimulationResult sim;
    try {
        SimConfig cfg = sc.simulation;
        cfg.cdf_grid = grid;
        sim = simulate(sc.model(), cfg);
    } catch (const Error& e) {
        report.checks.push_back(failed_check("all", "simulate", e.what()));
        return report;
    }

    for (std::size_t i = 0; i < views.size(); ++i) {
        const std::size_t k = tagged[i];
        const std::string cls = std::to_string(k);
        const auto& m = metrics[i];
        const auto& s = sim.classes[k];
        report.checks.push_back(mean_check(cls, "mean_aoi", m.mean_aoi, s.mean_aoi, sc.tolerance));
        report.checks.push_back(mean_check(cls, "mean_peak_aoi", m.mean_peak_aoi, s.mean_peak_aoi, sc.tolerance));
        report.checks.push_back(mean_check(cls, "mean_delay", m.mean_delay, s.mean_delay, sc.tolerance));
        report.checks.push_back(mean_check(cls, "throughput", views[i].rate, s.throughput, sc.tolerance));

        try {
            const auto analytic = invert_cdf(aoi_transform(views[i]), grid, sc.analysis.inversion);
            const auto empirical = empirical_aoi_cdf(sim, k, grid);
            double sup = 0.0, widest = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                sup = std::max(sup, std::abs(analytic.values[j] - empirical[j]));
                if (!std::isnan(s.aoi_cdf_halfwidth[j])) widest = std::max(widest, s.aoi_cdf_halfwidth[j]);
            }
            report.checks.push_back(ValidationCheck{cls, "aoi_cdf_sup_gap", 0.0, sup, widest, sup, sc.tolerance,
                                                    sup <= sc.tolerance, ""});
        } catch (const Error& e) {
            report.checks.push_back(failed_check(cls, "aoi_cdf_sup_gap", e.what()));
        }
    }
    return report;
}

void write_analyze_csv(std::ostream& os, const std::vector<AnalyzeRow>& rows) {
    os << kAnalyzeHeader << '\n';
    for (const auto& r : rows) {
        os << r.cls << ',' << format_number(r.lambda) << ',' << format_number(r.rho) << ','
           << format_number(r.metrics.gamma) << ',' << format_number(r.metrics.mean_wait) << ','
           << format_number(r.metrics.mean_delay) << ',' << format_number(r.metrics.mean_peak_aoi) << ','
           << format_number(r.metrics.mean_aoi) << '\n';
    }
}

void write_dist_csv(std::ostream& os, const std::vector<DistRow>& rows) {
    os << kDistHeader << '\n';
    for (const auto& r : rows) {
        os << r.cls << ',' << format_number(r.x) << ',' << format_number(r.cdf) << ',' << format_number(r.pdf) << '\n';
    }
}

void write_simulate_csv(std::ostream& os, const std::vector<SimulateRow>& rows) {
    os << kSimulateHeader << '\n';
    for (const auto& r : rows) {
        os << r.cls << ',' << r.metric << ',' << format_number(r.estimate) << ',' << format_number(r.ci_halfwidth)
           << ',' << r.seed << '\n';
    }
}

void write_validate_csv(std::ostream& os, const ValidationReport& report) {
    os << kValidateHeader << '\n';
    for (const auto& c : report.checks) {
        os << c.cls << ',' << c.metric << ',' << format_number(c.analytic) << ',' << format_number(c.simulated) << ','
           << format_number(c.ci_halfwidth) << ',' << format_number(c.relative_gap) << ','
           << format_number(c.threshold) << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
    }
}

std::vector<AnalyzeRow> read_analyze_csv(std::istream& is) {
    return read_csv<AnalyzeRow>(is, kAnalyzeHeader, 8, [](const std::vector<std::string>& c) {
        AnalyzeRow r{};
        r.cls = parse_index(c[0]);
        r.lambda = parse_number(c[1]);
        r.rho = parse_number(c[2]);
        r.metrics.gamma = parse_number(c[3]);
        r.metrics.mean_wait = parse_number(c[4]);
        r.metrics.mean_delay = parse_number(c[5]);
        r.metrics.mean_peak_aoi = parse_number(c[6]);
        r.metrics.mean_aoi = parse_number(c[7]);
        return r;
    });
}

std::vector<DistRow> read_dist_csv(std::istream& is) {
    return read_csv<DistRow>(is, kDistHeader, 4, [](const std::vector<std::string>& c) {
        return DistRow{parse_index(c[0]), parse_number(c[1]), parse_number(c[2]), parse_number(c[3])};
    });
}

void print_analyze_table(std::ostream& os, const Scenario& sc, const std::vector<AnalyzeRow>& rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-16s %10s %10s %12s %12s %12s %12s %12s\n", "class", "lambda", "rho", "gamma",
                  "E[W]", "E[D]", "E[Apeak]", "E[A]");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-16s %10.6g %10.6g %12.8g %12.8g %12.8g %12.8g %12.8g\n",
                      sc.class_label(r.cls).c_str(), r.lambda, r.rho, r.metrics.gamma, r.metrics.mean_wait,
                      r.metrics.mean_delay, r.metrics.mean_peak_aoi, r.metrics.mean_aoi);
        os << buf;
    }
}

void print_validate_report(std::ostream& os, const ValidationReport& report) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-6s %-20s %14s %14s %12s %12s %10s  %s\n", "class", "metric", "analytic",
                  "simulated", "ci_half", "rel_gap", "threshold", "status");
    os << buf;
    for (const auto& c : report.checks) {
        std::snprintf(buf, sizeof buf, "%-6s %-20s %14.8g %14.8g %12.4g %12.4g %10.4g  %s", c.cls.c_str(),
                      c.metric.c_str(), c.analytic, c.simulated, c.ci_halfwidth, c.relative_gap, c.threshold,
                      c.pass ? "PASS" : "FAIL");
        os << buf;
        if (!c.cause.empty()) os << "  (" << c.cause << ")";
        os << '\n';
    }
    os << (report.all_pass() ? "RESULT: PASS" : "RESULT: FAIL") << '\n';
}

}  // namespace mgaoi
