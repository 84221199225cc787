#include "mgaoi/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "mgaoi/error.hpp"

namespace mgaoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Purpose : std::uint32_t { interarrival = 0, service = 1 };

RandomStream make_stream(std::uint64_t seed, int replication, std::size_t cls, Purpose purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(cls),
                      static_cast<std::uint32_t>(purpose)};
    return RandomStream(seq);
}

struct Packet {
    std::size_t cls;
    double generated;
    double service;
    std::uint64_t seq;
};

struct ClassTally {
    bool has_update = false;
    double last_generated = 0.0;  // eta: generation time of the freshest delivered packet
    double last_update = 0.0;
    double first_observed = kInf;
    double area = 0.0;
    double peak_sum = 0.0;
    double delay_sum = 0.0;
    double gap_sum = 0.0;
    std::uint64_t count = 0;
};

struct ReplicationOutput {
    std::vector<double> mean_aoi, mean_delay, mean_peak, mean_gap, throughput;
    std::vector<std::vector<double>> cdf;
    std::vector<std::uint64_t> updates;
    double busy_fraction = 0.0;
};

void check_time(double t) {
    if (!std::isfinite(t)) throw SimulationError("non-finite event time");
}

ReplicationOutput run_replication(const SystemModel& model, const SimConfig& cfg, int rep) {
    const std::size_t k_count = model.size();
    const double horizon = cfg.horizon;
    const double warmup = cfg.warmup_fraction * horizon;

    std::vector<RandomStream> arrival_rng, service_rng;
    std::vector<std::exponential_distribution<double>> interarrival;
    for (std::size_t k = 0; k < k_count; ++k) {
        arrival_rng.push_back(make_stream(cfg.seed, rep, k, Purpose::interarrival));
        service_rng.push_back(make_stream(cfg.seed, rep, k, Purpose::service));
        interarrival.emplace_back(model[k].arrival_rate);
    }

    std::vector<double> next_arrival(k_count);
    for (std::size_t k = 0; k < k_count; ++k) next_arrival[k] = interarrival[k](arrival_rng[k]);

    std::vector<ClassTally> tally(k_count);
    std::vector<AgeOccupancy> occupancy;
    for (std::size_t k = 0; k < k_count; ++k) occupancy.emplace_back(cfg.cdf_grid);

    // Age path of class k over [from, to], clipped to the observation window.
    auto integrate = [&](std::size_t k, double from, double to) {
        ClassTally& c = tally[k];
        if (to <= warmup) return;
        double start = std::max(from, warmup);
        double duration = to - start;
        if (duration <= 0.0) return;
        double age0 = start - c.last_generated;
        c.area += duration * age0 + 0.5 * duration * duration;
        occupancy[k].add_segment(age0, duration);
        c.first_observed = std::min(c.first_observed, start);
    };

    std::deque<Packet> queue;
    double departure = kInf;
    double busy = 0.0;
    std::uint64_t next_seq = 0, delivered_seq = 0;

    auto start_service = [&](double now, double service) {
        departure = now + service;
        check_time(departure);
        double lo = std::max(now, warmup), hi = std::min(departure, horizon);
        if (hi > lo) busy += hi - lo;
    };

    for (;;) {
        std::size_t next_cls = 0;
        for (std::size_t k = 1; k < k_count; ++k) {
            if (next_arrival[k] < next_arrival[next_cls]) next_cls = k;
        }
        const double arrival = next_arrival[next_cls];
        check_time(arrival);
        if (std::min(departure, arrival) >= horizon) break;

        if (departure <= arrival) {
            // Departures win ties.
            const Packet p = queue.front();
            queue.pop_front();
            if (p.seq != delivered_seq) throw SimulationError("FCFS order violated");
            ++delivered_seq;
            const double now = departure;
            ClassTally& c = tally[p.cls];
            if (c.has_update) {
                integrate(p.cls, c.last_update, now);
                if (now >= warmup) {
                    const double peak = now - c.last_generated;
                    const double delay = now - p.generated;
                    const double gap = p.generated - c.last_generated;
                    if (std::abs(peak - (delay + gap)) > 8.0 * std::numeric_limits<double>::epsilon() *
                                                             std::max(1.0, now)) {
                        throw SimulationError("peak AoI bookkeeping mismatch");
                    }
                    c.peak_sum += peak;
                    c.delay_sum += delay;
                    c.gap_sum += gap;
                    ++c.count;
                }
            }
            c.has_update = true;
            c.last_generated = p.generated;
            c.last_update = now;
            if (queue.empty()) {
                departure = kInf;
            } else {
                start_service(now, queue.front().service);
            }
        } else {
            const std::size_t k = next_cls;
            const double service = model[k].service.sample(service_rng[k]);
            queue.push_back(Packet{k, arrival, service, next_seq++});
            if (queue.size() == 1) start_service(arrival, service);
            next_arrival[k] = arrival + interarrival[k](arrival_rng[k]);
        }
    }

    ReplicationOutput out;
    const double window = horizon - warmup;
    out.busy_fraction = busy / window;
    for (std::size_t k = 0; k < k_count; ++k) {
        ClassTally& c = tally[k];
        if (c.has_update) integrate(k, c.last_update, horizon);
        if (c.count == 0) {
            std::ostringstream os;
            os << "horizon too short: class " << k << " delivered no packets after warmup";
            throw SimulationError(os.str());
        }
        const double observed = horizon - c.first_observed;
        const double n = double(c.count);
        out.mean_aoi.push_back(c.area / observed);
        out.mean_delay.push_back(c.delay_sum / n);
        out.mean_peak.push_back(c.peak_sum / n);
        out.mean_gap.push_back(c.gap_sum / n);
        out.throughput.push_back(n / window);
        out.cdf.push_back(occupancy[k].cdf());
        out.updates.push_back(c.count);
    }
    return out;
}

double t_quantile(int dof) {
    const boost::math::students_t dist{double(dof)};
    return boost::math::quantile(dist, 0.975);
}

template <class Get>
Estimate aggregate(const std::vector<ReplicationOutput>& reps, Get get) {
    const double n = double(reps.size());
    double sum = 0.0;
    for (const auto& r : reps) sum += get(r);
    Estimate e;
    e.mean = sum / n;
    if (reps.size() < 2) {
        e.ci_halfwidth = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    double ss = 0.0;
    for (const auto& r : reps) {
        double d = get(r) - e.mean;
        ss += d * d;
    }
    e.ci_halfwidth = t_quantile(int(reps.size()) - 1) * std::sqrt(ss / (n - 1.0) / n);
    return e;
}

}  // namespace

void SimConfig::check() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("simulation horizon must be finite and > 0");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
        throw ConfigError("simulation warmup_fraction must lie in [0, 1)");
    }
    if (replications < 1) throw ConfigError("simulation replications must be >= 1");
    if (threads < 0) throw ConfigError("simulation threads must be >= 0");
    for (std::size_t i = 0; i < cdf_grid.size(); ++i) {
        if (!std::isfinite(cdf_grid[i]) || cdf_grid[i] < 0.0) throw ConfigError("cdf grid values must be >= 0");
        if (i > 0 && !(cdf_grid[i] > cdf_grid[i - 1])) throw ConfigError("cdf grid must be strictly increasing");
    }
}

SimulationResult simulate(const SystemModel& model, const SimConfig& cfg) {
    cfg.check();
    const int reps = cfg.replications;
    std::vector<ReplicationOutput> outputs(reps);

    unsigned workers = cfg.threads > 0 ? unsigned(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(reps));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int r = next++; r < reps; r = next++) {
            try {
                outputs[r] = run_replication(model, cfg, r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = reps;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    SimulationResult result;
    result.base_seed = cfg.seed;
    result.replications = reps;
    result.cdf_grid = cfg.cdf_grid;
    result.busy_fraction = aggregate(outputs, [](const ReplicationOutput& r) { return r.busy_fraction; });
    for (std::size_t k = 0; k < model.size(); ++k) {
        ClassStatistics s;
        s.mean_aoi = aggregate(outputs, [k](const ReplicationOutput& r) { return r.mean_aoi[k]; });
        s.mean_delay = aggregate(outputs, [k](const ReplicationOutput& r) { return r.mean_delay[k]; });
        s.mean_peak_aoi = aggregate(outputs, [k](const ReplicationOutput& r) { return r.mean_peak[k]; });
        s.mean_intergeneration = aggregate(outputs, [k](const ReplicationOutput& r) { return r.mean_gap[k]; });
        s.throughput = aggregate(outputs, [k](const ReplicationOutput& r) { return r.throughput[k]; });
        for (std::size_t i = 0; i < cfg.cdf_grid.size(); ++i) {
            Estimate e = aggregate(outputs, [k, i](const ReplicationOutput& r) { return r.cdf[k][i]; });
            s.aoi_cdf.push_back(e.mean);
            s.aoi_cdf_halfwidth.push_back(e.ci_halfwidth);
        }
        for (const auto& r : outputs) s.updates += r.updates[k];
        result.classes.push_back(std::move(s));
    }
    return result;
}

std::vector<double> empirical_aoi_cdf(const SimulationResult& result, std::size_t cls, std::span<const double> x) {
    if (cls >= result.classes.size()) throw DomainError("class index out of range");
    const ClassStatistics& s = result.classes[cls];
    if (s.updates < 1000) {
        throw SimulationError("insufficient updates for class " + std::to_string(cls) + ": " +
                              std::to_string(s.updates) + " < 1000");
    }
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) {
        auto it = std::lower_bound(result.cdf_grid.begin(), result.cdf_grid.end(), v);
        if (it == result.cdf_grid.end() || *it != v) {
            std::ostringstream os;
            os << "AoI value " << v << " is not on the recorded simulation grid";
            throw DomainError(os.str());
        }
        out.push_back(s.aoi_cdf[std::size_t(it - result.cdf_grid.begin())]);
    }
    return out;
}

AgeOccupancy::AgeOccupancy(std::vector<double> grid)
    : grid_(std::move(grid)), slope_(grid_.size() + 1, 0.0), constant_(grid_.size() + 1, 0.0) {}

void AgeOccupancy::add_segment(double start_age, double duration) {
    observed_ += duration;
    if (grid_.empty()) return;
    const double end_age = start_age + duration;
    // Grid points strictly above start_age collect time; those at or above end_age collect all of it.
    const auto first = std::size_t(std::upper_bound(grid_.begin(), grid_.end(), start_age) - grid_.begin());
    const auto full = std::size_t(std::lower_bound(grid_.begin(), grid_.end(), end_age) - grid_.begin());
    if (first < full) {
        slope_[first] += 1.0;
        slope_[full] -= 1.0;
        constant_[first] -= start_age;
        constant_[full] += start_age;
    }
    constant_[std::max(first, full)] += duration;
}

std::vector<double> AgeOccupancy::cdf() const {
    std::vector<double> out(grid_.size());
    double slope = 0.0, constant = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        slope += slope_[i];
        constant += constant_[i];
        double time = slope * grid_[i] + constant;
        out[i] = observed_ > 0.0 ? std::clamp(time / observed_, 0.0, 1.0) : 0.0;
    }
    return out;
}

}  // namespace mgaoi
