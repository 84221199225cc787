#include "mgaoi/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mgaoi/error.hpp"

namespace mgaoi {

namespace {

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite intermediate value");
    return v;
}

cplx evaluate(const Transform& f, cplx s) {
    cplx v = f(s);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "transform evaluated to a non-finite value at s = " << s;
        throw NumericError(os.str());
    }
    return v;
}

// Euler-summation weights for 2M+1 Bromwich terms: alternating partial sums,
// with binomial averaging over the last M of them.
std::vector<double> euler_weights(int m) {
    std::vector<double> xi(2 * m + 1, 1.0);
    xi[0] = 0.5;
    const double scale = std::ldexp(1.0, -m);
    xi[2 * m] = scale;
    double binom = 1.0;
    for (int j = 1; j < m; ++j) {
        binom = binom * double(m - j + 1) / double(j);
        xi[2 * m - j] = xi[2 * m - j + 1] + scale * binom;
    }
    std::vector<double> eta(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) eta[k] = (k % 2 == 0 ? 1.0 : -1.0) * xi[k];
    return eta;
}

// Real shift a = A/2 of the Bromwich line; the periodization error is about e^{-A}.
double euler_shift(double target_error) {
    return 0.5 * std::log(100.0 / target_error);
}

// Inverse Laplace transform of g at t > 0.
double euler_invert(const Transform& g, double t, const std::vector<double>& eta, double shift) {
    std::vector<double> terms(eta.size());
    for (std::size_t k = 0; k < eta.size(); ++k) {
        cplx s(shift / t, std::numbers::pi * double(k) / t);
        terms[k] = eta[k] * evaluate(g, s).real();
    }
    double sum = 0.0;
    for (double v : terms) sum += v;
    return finite_or_throw(std::exp(shift) / t * sum, "euler inversion");
}

double talbot_invert(const Transform& g, double t, int m) {
    const double r = 2.0 * m / (5.0 * t);
    double sum = 0.5 * (evaluate(g, cplx(r, 0.0)) * std::exp(r * t)).real();
    for (int k = 1; k < m; ++k) {
        double theta = double(k) * std::numbers::pi / double(m);
        double cot = std::cos(theta) / std::sin(theta);
        cplx s(r * theta * cot, r * theta);
        double sigma = theta + (theta * cot - 1.0) * cot;
        sum += (std::exp(t * s) * evaluate(g, s) * cplx(1.0, sigma)).real();
    }
    return finite_or_throw(r / double(m) * sum, "talbot inversion");
}

double invert_at(const Transform& g, double t, const InversionConfig& cfg) {
    if (cfg.method == InversionMethod::euler) {
        const int m = (cfg.nodes - 1) / 2;
        static thread_local std::vector<double> eta;
        static thread_local int cached_m = -1;
        if (cached_m != m) {
            eta = euler_weights(m);
            cached_m = m;
        }
        return euler_invert(g, t, eta, euler_shift(cfg.target_error));
    }
    return talbot_invert(g, t, cfg.nodes);
}

void check_grid(std::span<const double> x, bool strictly_positive) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || x[i] < 0.0 || (strictly_positive && x[i] == 0.0)) {
            throw DomainError(strictly_positive ? "density grid points must be finite and > 0"
                                                : "CDF grid points must be finite and >= 0");
        }
        if (i > 0 && x[i] < x[i - 1]) throw DomainError("inversion grid must be sorted ascending");
    }
}

}  // namespace

void InversionConfig::check() const {
    if (nodes < 8) throw ConfigError("inversion node count must be >= 8");
    if (!(target_error > 0.0)) throw ConfigError("inversion target error must be > 0");
}

InvertedCdf invert_cdf(const Transform& transform, std::span<const double> x, const InversionConfig& cfg) {
    cfg.check();
    check_grid(x, false);
    Transform over_s = [&transform](cplx s) { return transform(s) / s; };

    InvertedCdf out;
    out.values.reserve(x.size());
    const double xref = x.empty() ? 1.0 : std::max(1.0, x.back());
    for (double t : x) {
        double raw;
        if (t == 0.0) {
            // Atom at the origin.
            raw = evaluate(transform, cplx(1e3 / (cfg.target_error * xref), 0.0)).real();
        } else {
            raw = invert_at(over_s, t, cfg);
        }
        double clamped = std::clamp(raw, 0.0, 1.0);
        out.max_clamp = std::max(out.max_clamp, std::abs(raw - clamped));
        out.values.push_back(clamped);
    }
    out.clamp_flagged = out.max_clamp > 10.0 * cfg.target_error;
    return out;
}

std::vector<double> invert_pdf(const Transform& transform, std::span<const double> x, const InversionConfig& cfg) {
    cfg.check();
    check_grid(x, true);
    std::vector<double> out;
    out.reserve(x.size());
    for (double t : x) out.push_back(invert_at(transform, t, cfg));
    return out;
}

NumericalMoment numerical_moment(const Transform& transform, int order, double scale_hint) {
    if (order != 1 && order != 2) throw DomainError("numerical_moment order must be 1 or 2");
    constexpr int kLevels = 4;

    NumericalMoment out;
    const double h0 = 1e-2 / std::max(1.0, std::abs(scale_hint));
    const double f0 = evaluate(transform, 0.0).real();

    // table[j][k]: k-th Richardson refinement using steps h_{j-k} .. h_j.
    double table[kLevels][kLevels] = {};
    for (int j = 0; j < kLevels; ++j) {
        const double h = std::ldexp(h0, -j);
        double d;
        if (order == 1) {
            d = (f0 - evaluate(transform, h).real()) / h;
        } else {
            d = (f0 - 2.0 * evaluate(transform, h).real() + evaluate(transform, 2.0 * h).real()) / (h * h);
        }
        finite_or_throw(d, "numerical_moment");
        out.steps.push_back(h);
        out.estimates.push_back(d);
        table[j][0] = d;
        for (int k = 1; k <= j; ++k) {
            const double factor = std::ldexp(1.0, k) - 1.0;
            table[j][k] = table[j][k - 1] + (table[j][k - 1] - table[j - 1][k - 1]) / factor;
        }
    }
    out.value = table[kLevels - 1][kLevels - 1];

    // Successive diagonal entries should settle; growth means the estimates oscillate.
    const double last = std::abs(table[kLevels - 1][kLevels - 1] - table[kLevels - 2][kLevels - 2]);
    const double prev = std::abs(table[kLevels - 2][kLevels - 2] - table[kLevels - 3][kLevels - 3]);
    if (last > prev && last > 1e-8 * std::max(1.0, std::abs(out.value))) {
        std::ostringstream os;
        os << "numerical_moment: Richardson corrections are not decreasing (" << prev << " then " << last << ")";
        throw NumericError(os.str());
    }
    return out;
}

}  // namespace mgaoi
