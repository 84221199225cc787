#include "mgaoi/distributions.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "mgaoi/error.hpp"

namespace mgaoi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kWeightTolerance = 1e-12;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be finite and > 0, got " + std::to_string(v));
    }
}

void check_argument(cplx s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        throw DomainError("transform argument is not finite");
    }
    if (s.real() < 0.0) {
        std::ostringstream os;
        os << "transform argument must satisfy Re(s) >= 0, got s = " << s;
        throw DomainError(os.str());
    }
}

double check_weights(const std::vector<double>& w, const char* what) {
    if (w.empty()) throw ValidationError(std::string(what) + " must have at least one component");
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ValidationError(std::string(what) + " weights must be finite and nonnegative");
        }
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(total - 1.0) > kWeightTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << what << " weights sum to " << total << ", expected 1 within 1e-12";
        throw ValidationError(os.str());
    }
    return total;
}

// (1 - e^{-z}) / z and its derivative, with series near the removable point.
cplx one_minus_exp_over(cplx z) {
    if (std::abs(z) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int n = 1; n <= 24; ++n) {
            term *= -z / double(n + 1);
            sum += term;
        }
        return sum;
    }
    return (1.0 - std::exp(-z)) / z;
}

cplx one_minus_exp_over_deriv(cplx z) {
    if (std::abs(z) < 0.5) {
        // sum_{n>=1} n (-1)^n z^{n-1} / (n+1)!
        cplx zp = 1.0;  // z^{n-1}
        double fact = 2.0;  // (n+1)!
        cplx sum = 0.0;
        for (int n = 1; n <= 24; ++n) {
            double sign = (n % 2 == 0) ? 1.0 : -1.0;
            sum += sign * double(n) * zp / fact;
            zp *= z;
            fact *= double(n + 2);
        }
        return sum;
    }
    return (std::exp(-z) * (1.0 + z) - 1.0) / (z * z);
}

cplx int_pow(cplx base, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::exponential: return "exponential";
        case Family::deterministic: return "deterministic";
        case Family::erlang: return "erlang";
        case Family::hyperexponential: return "hyperexponential";
        case Family::gamma: return "gamma";
        case Family::uniform: return "uniform";
        case Family::mixture: return "mixture";
    }
    return "unknown";
}

ServiceDistribution ServiceDistribution::exponential(double rate) {
    require_positive(rate, "exponential rate");
    return ServiceDistribution(Exponential{rate});
}

ServiceDistribution ServiceDistribution::deterministic(double value) {
    require_positive(value, "deterministic value");
    return ServiceDistribution(Deterministic{value});
}

ServiceDistribution ServiceDistribution::erlang(int shape, double rate) {
    if (shape < 1) throw ValidationError("erlang shape must be an integer >= 1, got " + std::to_string(shape));
    require_positive(rate, "erlang rate");
    return ServiceDistribution(Erlang{shape, rate});
}

ServiceDistribution ServiceDistribution::hyperexponential(std::vector<double> probs, std::vector<double> rates) {
    if (probs.size() != rates.size()) {
        throw ValidationError("hyperexponential probs and rates must have the same length");
    }
    double total = check_weights(probs, "hyperexponential");
    for (double r : rates) require_positive(r, "hyperexponential rate");
    return ServiceDistribution(HyperExponential{std::move(probs), std::move(rates), total});
}

ServiceDistribution ServiceDistribution::gamma(double shape, double rate) {
    require_positive(shape, "gamma shape");
    require_positive(rate, "gamma rate");
    return ServiceDistribution(Gamma{shape, rate});
}

ServiceDistribution ServiceDistribution::uniform(double low, double high) {
    if (!(low >= 0.0) || !std::isfinite(low)) throw ValidationError("uniform low must be finite and >= 0");
    if (!(high > low) || !std::isfinite(high)) throw ValidationError("uniform high must be finite and > low");
    return ServiceDistribution(Uniform{low, high});
}

ServiceDistribution ServiceDistribution::mixture(std::vector<double> weights,
                                                 std::vector<ServiceDistribution> components) {
    if (weights.size() != components.size()) {
        throw ValidationError("mixture weights and components must have the same length");
    }
    double total = check_weights(weights, "mixture");
    auto comps = std::make_shared<const std::vector<ServiceDistribution>>(std::move(components));
    return ServiceDistribution(Mixture{std::move(weights), std::move(comps), total});
}

Family ServiceDistribution::family() const noexcept {
    return static_cast<Family>(params_.index());
}

cplx ServiceDistribution::lst(cplx s) const {
    check_argument(s);
    return std::visit(
        overloaded{
            [&](const Exponential& p) -> cplx { return p.rate / (p.rate + s); },
            [&](const Deterministic& p) -> cplx { return std::exp(-s * p.value); },
            [&](const Erlang& p) -> cplx { return int_pow(p.rate / (p.rate + s), p.shape); },
            [&](const HyperExponential& p) -> cplx {
                cplx sum = 0.0;
                for (std::size_t i = 0; i < p.probs.size(); ++i) sum += p.probs[i] * (p.rates[i] / (p.rates[i] + s));
                return sum / p.total;
            },
            [&](const Gamma& p) -> cplx { return std::exp(-p.shape * std::log((p.rate + s) / p.rate)); },
            [&](const Uniform& p) -> cplx {
                return std::exp(-s * p.low) * one_minus_exp_over(s * (p.high - p.low));
            },
            [&](const Mixture& p) -> cplx {
                cplx sum = 0.0;
                for (std::size_t i = 0; i < p.weights.size(); ++i) sum += p.weights[i] * (*p.components)[i].lst(s);
                return sum / p.total;
            },
        },
        params_);
}

double ServiceDistribution::lst(double s) const {
    return lst(cplx(s, 0.0)).real();
}

cplx ServiceDistribution::lst_deriv(cplx s) const {
    check_argument(s);
    return std::visit(
        overloaded{
            [&](const Exponential& p) -> cplx {
                cplx d = p.rate + s;
                return p.rate / (d * d);
            },
            [&](const Deterministic& p) -> cplx { return p.value * std::exp(-s * p.value); },
            [&](const Erlang& p) -> cplx {
                cplx r = p.rate / (p.rate + s);
                return double(p.shape) * int_pow(r, p.shape) / (p.rate + s);
            },
            [&](const HyperExponential& p) -> cplx {
                cplx sum = 0.0;
                for (std::size_t i = 0; i < p.probs.size(); ++i) {
                    cplx d = p.rates[i] + s;
                    sum += p.probs[i] * p.rates[i] / (d * d);
                }
                return sum / p.total;
            },
            [&](const Gamma& p) -> cplx {
                return p.shape * std::exp(-p.shape * std::log((p.rate + s) / p.rate)) / (p.rate + s);
            },
            [&](const Uniform& p) -> cplx {
                double w = p.high - p.low;
                cplx e = std::exp(-s * p.low);
                return p.low * e * one_minus_exp_over(s * w) - e * w * one_minus_exp_over_deriv(s * w);
            },
            [&](const Mixture& p) -> cplx {
                cplx sum = 0.0;
                for (std::size_t i = 0; i < p.weights.size(); ++i) {
                    sum += p.weights[i] * (*p.components)[i].lst_deriv(s);
                }
                return sum / p.total;
            },
        },
        params_);
}

double ServiceDistribution::lst_deriv(double s) const {
    return lst_deriv(cplx(s, 0.0)).real();
}

double ServiceDistribution::moment(int n) const {
    if (n != 1 && n != 2) throw DomainError("moment order must be 1 or 2, got " + std::to_string(n));
    return std::visit(
        overloaded{
            [&](const Exponential& p) { return n == 1 ? 1.0 / p.rate : 2.0 / (p.rate * p.rate); },
            [&](const Deterministic& p) { return n == 1 ? p.value : p.value * p.value; },
            [&](const Erlang& p) {
                double k = p.shape;
                return n == 1 ? k / p.rate : k * (k + 1.0) / (p.rate * p.rate);
            },
            [&](const HyperExponential& p) {
                double sum = 0.0;
                for (std::size_t i = 0; i < p.probs.size(); ++i) {
                    sum += p.probs[i] * (n == 1 ? 1.0 / p.rates[i] : 2.0 / (p.rates[i] * p.rates[i]));
                }
                return sum / p.total;
            },
            [&](const Gamma& p) {
                return n == 1 ? p.shape / p.rate : p.shape * (p.shape + 1.0) / (p.rate * p.rate);
            },
            [&](const Uniform& p) {
                return n == 1 ? 0.5 * (p.low + p.high)
                              : (p.low * p.low + p.low * p.high + p.high * p.high) / 3.0;
            },
            [&](const Mixture& p) {
                double sum = 0.0;
                for (std::size_t i = 0; i < p.weights.size(); ++i) sum += p.weights[i] * (*p.components)[i].moment(n);
                return sum / p.total;
            },
        },
        params_);
}

double ServiceDistribution::sample(RandomStream& rng) const {
    return std::visit(
        overloaded{
            [&](const Exponential& p) { return std::exponential_distribution<double>(p.rate)(rng); },
            [&](const Deterministic& p) { return p.value; },
            [&](const Erlang& p) {
                std::exponential_distribution<double> e(p.rate);
                double sum = 0.0;
                for (int i = 0; i < p.shape; ++i) sum += e(rng);
                return sum;
            },
            [&](const HyperExponential& p) {
                std::uniform_real_distribution<double> u(0.0, p.total);
                double x = u(rng), acc = 0.0;
                std::size_t i = 0;
                for (; i + 1 < p.probs.size(); ++i) {
                    acc += p.probs[i];
                    if (x < acc) break;
                }
                return std::exponential_distribution<double>(p.rates[i])(rng);
            },
            [&](const Gamma& p) { return std::gamma_distribution<double>(p.shape, 1.0 / p.rate)(rng); },
            [&](const Uniform& p) { return std::uniform_real_distribution<double>(p.low, p.high)(rng); },
            [&](const Mixture& p) {
                std::uniform_real_distribution<double> u(0.0, p.total);
                double x = u(rng), acc = 0.0;
                std::size_t i = 0;
                for (; i + 1 < p.weights.size(); ++i) {
                    acc += p.weights[i];
                    if (x < acc && p.weights[i] > 0.0) break;
                }
                // Skip trailing zero-weight components.
                while (p.weights[i] == 0.0 && i > 0) --i;
                return (*p.components)[i].sample(rng);
            },
        },
        params_);
}

std::string ServiceDistribution::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const Exponential& p) { os << "exponential(rate=" << p.rate << ")"; },
                   [&](const Deterministic& p) { os << "deterministic(value=" << p.value << ")"; },
                   [&](const Erlang& p) { os << "erlang(shape=" << p.shape << ", rate=" << p.rate << ")"; },
                   [&](const HyperExponential& p) {
                       os << "hyperexponential(";
                       for (std::size_t i = 0; i < p.probs.size(); ++i) {
                           os << (i ? ", " : "") << p.probs[i] << "@" << p.rates[i];
                       }
                       os << ")";
                   },
                   [&](const Gamma& p) { os << "gamma(shape=" << p.shape << ", rate=" << p.rate << ")"; },
                   [&](const Uniform& p) { os << "uniform(low=" << p.low << ", high=" << p.high << ")"; },
                   [&](const Mixture& p) {
                       os << "mixture(";
                       for (std::size_t i = 0; i < p.weights.size(); ++i) {
                           os << (i ? ", " : "") << p.weights[i] << "*" << (*p.components)[i].describe();
                       }
                       os << ")";
                   },
               },
               params_);
    return os.str();
}

}  // namespace mgaoi
