#pragma once

#include <complex>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mgaoi {

using cplx = std::complex<double>;

// Each consumer owns its stream; streams are never shared between threads.
using RandomStream = std::mt19937_64;

enum class Family { exponential, deterministic, erlang, hyperexponential, gamma, uniform, mixture };

std::string_view family_name(Family f);

/// Nonnegative service-time law with closed-form Laplace-Stieltjes transform.
///
/// Values are immutable once built and may be evaluated concurrently. The
/// family set is closed under finite mixtures, which is how superpositions of
/// compound Poisson sources are represented (weights proportional to rates).
///
/// All transform evaluations require Re(s) >= 0 and throw DomainError
/// otherwise.
class ServiceDistribution {
public:
    static ServiceDistribution exponential(double rate);
    static ServiceDistribution deterministic(double value);
    static ServiceDistribution erlang(int shape, double rate);
    static ServiceDistribution hyperexponential(std::vector<double> probs, std::vector<double> rates);
    static ServiceDistribution gamma(double shape, double rate);
    static ServiceDistribution uniform(double low, double high);
    // Weights must be nonnegative and sum to 1 within 1e-12.
    static ServiceDistribution mixture(std::vector<double> weights, std::vector<ServiceDistribution> components);

    Family family() const noexcept;

    // E[exp(-sY)]
    cplx lst(cplx s) const;
    double lst(double s) const;

    // E[Y exp(-sY)] = -d/ds lst(s)
    cplx lst_deriv(cplx s) const;
    double lst_deriv(double s) const;

    // E[Y^n] for n in {1, 2}.
    double moment(int n) const;
    double mean() const { return moment(1); }

    double sample(RandomStream& rng) const;

    // Human-readable form, e.g. "erlang(shape=2, rate=2)".
    std::string describe() const;

    struct Exponential {
        double rate;
    };
    struct Deterministic {
        double value;
    };
    struct Erlang {
        int shape;
        double rate;
    };
    struct HyperExponential {
        std::vector<double> probs;
        std::vector<double> rates;
        double total;
    };
    struct Gamma {
        double shape;
        double rate;
    };
    struct Uniform {
        double low;
        double high;
    };
    struct Mixture {
        std::vector<double> weights;
        std::shared_ptr<const std::vector<ServiceDistribution>> components;
        double total;
    };
    using Params = std::variant<Exponential, Deterministic, Erlang, HyperExponential, Gamma, Uniform, Mixture>;

    const Params& params() const noexcept { return params_; }

private:
    explicit ServiceDistribution(Params p) : params_(std::move(p)) {}

    Params params_;
};

}  // namespace mgaoi
