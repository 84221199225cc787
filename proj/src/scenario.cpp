#include "mgaoi/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mgaoi/error.hpp"

namespace mgaoi {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void allow_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> keys) {
    if (!node.IsMap()) fail(where, "expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            fail(where, "unknown field '" + key + "'");
        }
    }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
    if (!node || !node.IsScalar()) fail(where, "missing or not a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(where, "cannot convert '" + node.Scalar() + "'");
    }
}

double number(const YAML::Node& node, const std::string& where) {
    double v = scalar<double>(node, where);
    if (!std::isfinite(v)) fail(where, "must be finite");
    return v;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& where) {
    if (!node.IsSequence()) fail(where, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// Wraps constructor validation errors so the message carries the field path.
template <class F>
ServiceDistribution build(const std::string& where, F&& make) {
    try {
        return make();
    } catch (const ValidationError& e) {
        fail(where, e.what());
    }
}

ServiceDistribution parse_service(const YAML::Node& node, const std::string& where) {
    if (!node || !node.IsMap()) fail(where, "expected a service mapping with a 'family' field");
    const auto family = scalar<std::string>(node["family"], where + ".family");
    if (family == "exponential") {
        allow_keys(node, where, {"family", "rate"});
        double rate = number(node["rate"], where + ".rate");
        return build(where, [&] { return ServiceDistribution::exponential(rate); });
    }
    if (family == "deterministic") {
        allow_keys(node, where, {"family", "value"});
        double value = number(node["value"], where + ".value");
        return build(where, [&] { return ServiceDistribution::deterministic(value); });
    }
    if (family == "erlang") {
        allow_keys(node, where, {"family", "shape", "rate"});
        int shape = scalar<int>(node["shape"], where + ".shape");
        double rate = number(node["rate"], where + ".rate");
        return build(where, [&] { return ServiceDistribution::erlang(shape, rate); });
    }
    if (family == "gamma") {
        allow_keys(node, where, {"family", "shape", "rate"});
        double shape = number(node["shape"], where + ".shape");
        double rate = number(node["rate"], where + ".rate");
        return build(where, [&] { return ServiceDistribution::gamma(shape, rate); });
    }
    if (family == "uniform") {
        allow_keys(node, where, {"family", "low", "high"});
        double low = number(node["low"], where + ".low");
        double high = number(node["high"], where + ".high");
        return build(where, [&] { return ServiceDistribution::uniform(low, high); });
    }
    if (family == "hyperexponential") {
        allow_keys(node, where, {"family", "probs", "rates"});
        auto probs = number_list(node["probs"], where + ".probs");
        auto rates = number_list(node["rates"], where + ".rates");
        return build(where, [&] { return ServiceDistribution::hyperexponential(probs, rates); });
    }
    if (family == "mixture") {
        allow_keys(node, where, {"family", "components"});
        const auto comps = node["components"];
        if (!comps || !comps.IsSequence() || comps.size() == 0) fail(where + ".components", "expected a non-empty list");
        std::vector<double> weights;
        std::vector<ServiceDistribution> dists;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string at = where + ".components[" + std::to_string(i) + "]";
            allow_keys(comps[i], at, {"weight", "service"});
            weights.push_back(number(comps[i]["weight"], at + ".weight"));
            dists.push_back(parse_service(comps[i]["service"], at + ".service"));
        }
        return build(where, [&] { return ServiceDistribution::mixture(weights, dists); });
    }
    fail(where + ".family", "unknown distribution family '" + family + "'");
}

InversionConfig parse_inversion(const YAML::Node& node, const std::string& where) {
    allow_keys(node, where, {"method", "nodes", "target_error"});
    InversionConfig cfg;
    if (node["method"]) {
        const auto m = scalar<std::string>(node["method"], where + ".method");
        if (m == "euler") cfg.method = InversionMethod::euler;
        else if (m == "talbot") cfg.method = InversionMethod::talbot;
        else fail(where + ".method", "unknown inversion method '" + m + "'");
    }
    if (node["nodes"]) cfg.nodes = scalar<int>(node["nodes"], where + ".nodes");
    if (node["target_error"]) cfg.target_error = number(node["target_error"], where + ".target_error");
    try {
        cfg.check();
    } catch (const ConfigError& e) {
        fail(where, e.what());
    }
    return cfg;
}

std::vector<double> parse_grid(const YAML::Node& node, const std::string& where, bool allow_zero) {
    std::vector<double> grid;
    if (node.IsSequence()) {
        grid = number_list(node, where);
    } else if (node.IsMap()) {
        allow_keys(node, where, {"min", "max", "points"});
        double lo = node["min"] ? number(node["min"], where + ".min") : 0.0;
        double hi = number(node["max"], where + ".max");
        int n = scalar<int>(node["points"], where + ".points");
        if (n < 2) fail(where + ".points", "must be >= 2");
        if (!(hi > lo)) fail(where, "max must exceed min");
        for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * double(i) / double(n - 1));
    } else {
        fail(where, "expected a list or a {min, max, points} mapping");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || (!allow_zero && grid[i] == 0.0)) {
            fail(where, allow_zero ? "values must be >= 0" : "values must be > 0");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) fail(where, "values must be strictly increasing");
    }
    return grid;
}

Scenario parse_root(const YAML::Node& root) {
    allow_keys(root, "scenario", {"classes", "analysis", "simulation", "validation", "output"});
    Scenario sc;

    const auto classes = root["classes"];
    if (!classes || !classes.IsSequence() || classes.size() == 0) fail("classes", "expected a non-empty list");
    std::set<std::string> names;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        std::string where = "classes[" + std::to_string(k) + "]";
        const auto c = classes[k];
        allow_keys(c, where, {"name", "arrival_rate", "service"});
        ClassSpec spec{"", 0.0, ServiceDistribution::exponential(1.0)};
        if (c["name"]) {
            spec.name = scalar<std::string>(c["name"], where + ".name");
            if (!names.insert(spec.name).second) fail(where + ".name", "duplicate class name '" + spec.name + "'");
            where += " (" + spec.name + ")";
        }
        spec.arrival_rate = number(c["arrival_rate"], where + ".arrival_rate");
        if (!(spec.arrival_rate > 0.0)) fail(where + ".arrival_rate", "must be > 0");
        spec.service = parse_service(c["service"], where + ".service");
        sc.classes.push_back(std::move(spec));
    }

    if (const auto a = root["analysis"]) {
        allow_keys(a, "analysis", {"tagged", "s_grid", "x_grid", "inversion"});
        if (const auto t = a["tagged"]) {
            if (!t.IsSequence()) fail("analysis.tagged", "expected a list of class indices or names");
            for (std::size_t i = 0; i < t.size(); ++i) {
                const std::string at = "analysis.tagged[" + std::to_string(i) + "]";
                const auto raw = scalar<std::string>(t[i], at);
                auto named = std::find_if(sc.classes.begin(), sc.classes.end(),
                                          [&](const ClassSpec& c) { return !c.name.empty() && c.name == raw; });
                std::size_t idx;
                if (named != sc.classes.end()) {
                    idx = std::size_t(named - sc.classes.begin());
                } else {
                    long long v = scalar<long long>(t[i], at);
                    if (v < 0 || std::size_t(v) >= sc.classes.size()) fail(at, "class index out of range");
                    idx = std::size_t(v);
                }
                sc.analysis.tagged.push_back(idx);
            }
        }
        if (a["s_grid"]) sc.analysis.s_grid = parse_grid(a["s_grid"], "analysis.s_grid", false);
        if (a["x_grid"]) sc.analysis.x_grid = parse_grid(a["x_grid"], "analysis.x_grid", true);
        if (a["inversion"]) sc.analysis.inversion = parse_inversion(a["inversion"], "analysis.inversion");
    }

    if (const auto s = root["simulation"]) {
        allow_keys(s, "simulation", {"horizon", "warmup_fraction", "replications", "seed", "threads", "cdf_grid"});
        if (s["horizon"]) sc.simulation.horizon = number(s["horizon"], "simulation.horizon");
        if (s["warmup_fraction"]) sc.simulation.warmup_fraction = number(s["warmup_fraction"], "simulation.warmup_fraction");
        if (s["replications"]) sc.simulation.replications = scalar<int>(s["replications"], "simulation.replications");
        if (s["seed"]) sc.simulation.seed = scalar<std::uint64_t>(s["seed"], "simulation.seed");
        if (s["threads"]) sc.simulation.threads = scalar<int>(s["threads"], "simulation.threads");
        if (s["cdf_grid"]) sc.simulation.cdf_grid = parse_grid(s["cdf_grid"], "simulation.cdf_grid", true);
        try {
            sc.simulation.check();
        } catch (const ConfigError& e) {
            fail("simulation", e.what());
        }
    }

    if (const auto v = root["validation"]) {
        allow_keys(v, "validation", {"tolerance"});
        if (v["tolerance"]) sc.tolerance = number(v["tolerance"], "validation.tolerance");
        if (sc.tolerance < 0.0) fail("validation.tolerance", "must be >= 0");
    }

    if (root["output"]) sc.output_dir = scalar<std::string>(root["output"], "output");

    sc.model();  // stability check
    return sc;
}

}  // namespace

SystemModel Scenario::model() const {
    std::vector<SourceClass> src;
    src.reserve(classes.size());
    for (const auto& c : classes) src.push_back(SourceClass{c.arrival_rate, c.service});
    return validate(std::move(src));
}

std::vector<std::size_t> Scenario::tagged_classes() const {
    if (!analysis.tagged.empty()) return analysis.tagged;
    std::vector<std::size_t> all(classes.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    return all;
}

std::string Scenario::class_label(std::size_t k) const {
    const auto& name = classes.at(k).name;
    return name.empty() ? std::to_string(k) : std::to_string(k) + " (" + name + ")";
}

Scenario parse_scenario_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }
    try {
        return parse_root(root);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

void apply_overrides(Scenario& sc, const Overrides& o) {
    if (o.output_dir) sc.output_dir = *o.output_dir;
    if (o.seed) sc.simulation.seed = *o.seed;
    if (o.horizon) sc.simulation.horizon = *o.horizon;
    if (o.replications) sc.simulation.replications = *o.replications;
    if (o.tolerance) {
        if (!(*o.tolerance >= 0.0)) throw ConfigError("--tolerance must be >= 0");
        sc.tolerance = *o.tolerance;
    }
    sc.simulation.check();
}

}  // namespace mgaoi
