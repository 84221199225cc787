// Command-line front end: analyze | dist | simulate | validate <scenario.yaml>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "mgaoi/commands.hpp"
#include "mgaoi/error.hpp"
#include "mgaoi/scenario.hpp"

namespace fs = std::filesystem;
using namespace mgaoi;

namespace {

struct Options {
    std::string scenario_path;
    Overrides overrides;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("file", opt.scenario_path, "Scenario file (YAML)")->required();
    cmd->add_option_function<std::string>("--out", [&](const std::string& v) { opt.overrides.output_dir = v; },
                                          "Output directory for CSV files");
    cmd->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { opt.overrides.seed = v; },
                                            "Base random seed");
    cmd->add_option_function<double>("--horizon", [&](const double& v) { opt.overrides.horizon = v; },
                                     "Simulated time per replication");
    cmd->add_option_function<int>("--reps", [&](const int& v) { opt.overrides.replications = v; },
                                  "Number of independent replications");
    cmd->add_option_function<double>("--tolerance", [&](const double& v) { opt.overrides.tolerance = v; },
                                     "Relative tolerance for validate (0.01 = 1%)");
}

// Writes CSV into <out>/<name> when an output directory is set; otherwise to stdout.
template <class Write>
bool emit_csv(const Scenario& sc, const std::string& name, Write write) {
    if (sc.output_dir.empty()) {
        write(std::cout);
        return false;
    }
    fs::create_directories(sc.output_dir);
    const fs::path path = fs::path(sc.output_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    write(out);
    std::cerr << "wrote " << path.string() << '\n';
    return true;
}

int run(const std::string& command, const Options& opt) {
    Scenario sc = parse_scenario(opt.scenario_path);
    apply_overrides(sc, opt.overrides);

    if (command == "analyze") {
        const auto rows = run_analyze(sc);
        if (emit_csv(sc, "analyze.csv", [&](std::ostream& os) { write_analyze_csv(os, rows); })) {
            print_analyze_table(std::cout, sc, rows);
        }
        return kExitOk;
    }
    if (command == "dist") {
        const auto rows = run_dist(sc);
        emit_csv(sc, "dist.csv", [&](std::ostream& os) { write_dist_csv(os, rows); });
        return kExitOk;
    }
    if (command == "simulate") {
        const auto rows = simulate_rows(run_simulate(sc));
        emit_csv(sc, "simulate.csv", [&](std::ostream& os) { write_simulate_csv(os, rows); });
        return kExitOk;
    }
    const auto report = run_validate(sc);
    print_validate_report(std::cout, report);
    if (!sc.output_dir.empty()) {
        emit_csv(sc, "validate.csv", [&](std::ostream& os) { write_validate_csv(os, report); });
    }
    return report.all_pass() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age of Information in multi-source FCFS M/GI/1 queues"};
    app.require_subcommand(1);

    Options opt;
    std::string command;
    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "Closed-form mean metrics per tagged class"},
        {"dist", "AoI CDF and density by numerical transform inversion"},
        {"simulate", "Discrete-event simulation with replication confidence intervals"},
        {"validate", "Compare analysis against simulation; exit 4 on any FAIL"},
    };
    for (const auto& [name, description] : commands) {
        auto* cmd = app.add_subcommand(name, description);
        add_common(cmd, opt);
        cmd->callback([&command, name = name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return run(command, opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
