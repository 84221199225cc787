#include "mgaoi/model.hpp"

#include <cmath>
#include <sstream>

#include "mgaoi/error.hpp"

namespace mgaoi {

SystemModel validate(std::vector<SourceClass> classes) {
    if (classes.empty()) throw ValidationError("model must contain at least one source class");

    SystemModel m;
    m.loads_.reserve(classes.size());
    for (std::size_t k = 0; k < classes.size(); ++k) {
        double lam = classes[k].arrival_rate;
        if (!(lam > 0.0) || !std::isfinite(lam)) {
            std::ostringstream os;
            os << "class " << k << ": arrival_rate must be finite and > 0, got " << lam;
            throw ValidationError(os.str());
        }
        double rho = classes[k].load();
        m.loads_.push_back(rho);
        m.total_rate_ += lam;
        m.total_load_ += rho;
    }
    if (!(m.total_load_ < 1.0 - kStabilityMargin)) {
        std::ostringstream os;
        os.precision(17);
        os << "unstable system: total load rho_all = " << m.total_load_ << " (must be < 1)";
        throw ValidationError(os.str());
    }
    m.classes_ = std::move(classes);
    return m;
}

ServiceDistribution SystemModel::aggregate_service() const {
    if (classes_.size() == 1) return classes_.front().service;
    std::vector<double> w;
    std::vector<ServiceDistribution> comps;
    for (const auto& c : classes_) {
        w.push_back(c.arrival_rate / total_rate_);
        comps.push_back(c.service);
    }
    return ServiceDistribution::mixture(std::move(w), std::move(comps));
}

BackgroundProcess aggregate_background(const SystemModel& model, std::size_t tagged) {
    if (tagged >= model.size()) {
        throw DomainError("tagged class index " + std::to_string(tagged) + " out of range [0, " +
                          std::to_string(model.size()) + ")");
    }
    BackgroundProcess bg;
    std::vector<double> rates;
    std::vector<ServiceDistribution> comps;
    for (std::size_t k = 0; k < model.size(); ++k) {
        if (k == tagged) continue;
        rates.push_back(model[k].arrival_rate);
        comps.push_back(model[k].service);
        bg.rate += model[k].arrival_rate;
        bg.load += model.class_load(k);
    }
    if (comps.empty()) return bg;
    if (comps.size() == 1) {
        bg.service = comps.front();
        return bg;
    }
    std::vector<double> w;
    w.reserve(rates.size());
    for (double r : rates) w.push_back(r / bg.rate);
    bg.service = ServiceDistribution::mixture(std::move(w), std::move(comps));
    return bg;
}

}  // namespace mgaoi
