#include "mgaoi/analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mgaoi/error.hpp"

namespace mgaoi {

namespace {

constexpr double kResidualTarget = 1e-13;
constexpr int kRealIterations = 200;
constexpr int kNewtonIterations = 60;
constexpr int kContinuationSteps = 8;
constexpr int kContractionIterations = 20000;

bool near_origin(const TaggedView& v, cplx s) {
    return std::abs(s) < kOriginThreshold * v.total_rate;
}

void require_finite(cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericError(std::string(what) + " evaluated to a non-finite value");
    }
}

// Newton on phi(z) = omega from z. Returns true on convergence; z holds the last iterate.
bool complex_newton(const BackgroundProcess& bg, cplx omega, cplx& z, double& residual) {
    const double scale = std::abs(omega);
    for (int it = 0; it < kNewtonIterations; ++it) {
        cplx g = phi(bg, z) - omega;
        residual = std::abs(g) / scale;
        if (residual <= kResidualTarget) return true;
        cplx step = g / phi_deriv(bg, z);
        cplx next = z - step;
        // Stay inside the half-plane where H+* is defined; the root has Re >= Re(omega).
        int halvings = 0;
        while (next.real() < 0.5 * omega.real() && halvings < 30) {
            step *= 0.5;
            next = z - step;
            ++halvings;
        }
        if (next.real() < 0.0 || !std::isfinite(next.real()) || !std::isfinite(next.imag())) return false;
        z = next;
    }
    residual = std::abs(phi(bg, z) - omega) / scale;
    return residual <= kResidualTarget;
}

}  // namespace

TaggedView make_tagged_view(const SystemModel& model, std::size_t tagged) {
    BackgroundProcess bg = aggregate_background(model, tagged);
    const SourceClass& c = model[tagged];
    return TaggedView{tagged,   c.arrival_rate,      c.service, model.class_load(tagged),
                      std::move(bg), model.total_rate(), model.total_load()};
}

cplx phi(const BackgroundProcess& bg, cplx s) {
    if (bg.empty()) {
        if (s.real() < 0.0) throw DomainError("phi requires Re(s) >= 0");
        return s;
    }
    return s - bg.rate * (1.0 - bg.service.lst(s));
}

double phi(const BackgroundProcess& bg, double s) {
    return phi(bg, cplx(s, 0.0)).real();
}

cplx phi_deriv(const BackgroundProcess& bg, cplx s) {
    if (bg.empty()) return 1.0;
    return 1.0 - bg.rate * bg.service.lst_deriv(s);
}

double psi(const BackgroundProcess& bg, double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        throw DomainError("psi requires a finite omega >= 0");
    }
    if (bg.empty() || omega == 0.0) return omega;

    // phi(z) - omega is increasing and concave, negative at omega and
    // nonnegative at omega + lambda+.
    double lo = omega, hi = omega + bg.rate;
    double z = lo;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kRealIterations; ++it) {
        double g = phi(bg, z) - omega;
        residual = std::abs(g) / omega;
        if (residual <= kResidualTarget) return z;
        if (g < 0.0) lo = z; else hi = z;
        double d = phi_deriv(bg, cplx(z, 0.0)).real();
        double next = (d > 0.0) ? z - g / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == z || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            // Bracket exhausted at double resolution.
            double glo = std::abs(phi(bg, lo) - omega), ghi = std::abs(phi(bg, hi) - omega);
            double best = glo <= ghi ? lo : hi;
            residual = std::min(glo, ghi) / omega;
            if (residual <= 1e-12) return best;
            break;
        }
        z = next;
    }
    std::ostringstream os;
    os << "psi(" << omega << ") did not converge";
    throw ConvergenceError(os.str(), residual);
}

cplx psi(const BackgroundProcess& bg, cplx omega) {
    if (omega.imag() == 0.0) return psi(bg, omega.real());
    if (!(omega.real() > 0.0) || !std::isfinite(omega.real()) || !std::isfinite(omega.imag())) {
        throw DomainError("psi requires Re(omega) > 0 for complex arguments");
    }
    if (bg.empty()) return omega;

    double residual = std::numeric_limits<double>::infinity();
    cplx z(psi(bg, omega.real()), omega.imag());
    if (complex_newton(bg, omega, z, residual)) return z;

    // Continuation from the real axis.
    z = cplx(psi(bg, omega.real()), 0.0);
    bool ok = true;
    for (int j = 1; j <= kContinuationSteps && ok; ++j) {
        cplx w(omega.real(), omega.imag() * double(j) / kContinuationSteps);
        ok = complex_newton(bg, w, z, residual);
    }
    if (ok) return z;

    // z -> omega + lambda+ (1 - H+*(z)) contracts with factor rho+ < 1 on Re(z) >= Re(omega).
    z = omega;
    for (int it = 0; it < kContractionIterations; ++it) {
        z = omega + bg.rate * (1.0 - bg.service.lst(z));
        residual = std::abs(phi(bg, z) - omega) / std::abs(omega);
        if (residual <= kResidualTarget) return z;
    }
    std::ostringstream os;
    os << "psi(" << omega << ") did not converge";
    throw ConvergenceError(os.str(), residual);
}

double gamma_root(const TaggedView& view) {
    return psi(view.background, view.rate);
}

cplx waiting_lst(const TaggedView& v, cplx s) {
    if (s.real() < 0.0) throw DomainError("waiting_lst requires Re(s) >= 0");
    if (near_origin(v, s)) {
        double mean_wait = (v.rate * v.service.moment(2) + v.background.rate * v.background.service.moment(2)) /
                           (2.0 * v.idle_fraction());
        return 1.0 - mean_wait * s;
    }
    cplx denom = s - v.background.rate * (1.0 - v.background.service.lst(s)) - v.rate * (1.0 - v.service.lst(s));
    cplx w = v.idle_fraction() * s / denom;
    require_finite(w, "waiting_lst");
    return w;
}

cplx delay_lst(const TaggedView& v, cplx s) {
    return waiting_lst(v, s) * v.service.lst(s);
}

cplx aoi_lst_outer(const TaggedView& v, cplx s) {
    if (s.real() < 0.0) throw DomainError("aoi transform requires Re(s) >= 0");
    // s + lambda - phi(s) written without cancellation; real part >= lambda.
    cplx denom = v.rate + v.background.rate * (1.0 - v.background.service.lst(s));
    return v.rate * v.service.lst(s) / denom;
}

cplx aoi_lst_inner(const TaggedView& v, cplx s) {
    if (s.real() < 0.0) throw DomainError("aoi transform requires Re(s) >= 0");
    if (near_origin(v, s)) return 1.0;
    cplx z = psi(v.background, s + v.rate);
    cplx inner = waiting_lst(v, s) - v.idle_fraction() + v.rate * delay_lst(v, z) / z;
    require_finite(inner, "aoi_lst");
    return inner;
}

cplx peak_aoi_lst(const TaggedView& v, cplx s) {
    if (s.real() < 0.0) throw DomainError("peak_aoi_lst requires Re(s) >= 0");
    if (near_origin(v, s)) return 1.0;
    cplx z = psi(v.background, s + v.rate);
    cplx val = aoi_lst_outer(v, s) * (delay_lst(v, s) - s * delay_lst(v, z) / z);
    require_finite(val, "peak_aoi_lst");
    return val;
}

cplx aoi_lst(const TaggedView& v, cplx s) {
    if (s.real() < 0.0) throw DomainError("aoi_lst requires Re(s) >= 0");
    if (near_origin(v, s)) return 1.0;
    return aoi_lst_outer(v, s) * aoi_lst_inner(v, s);
}

cplx aoi_lst_from_peak(const TaggedView& v, cplx s) {
    if (s.real() < 0.0) throw DomainError("aoi_lst_from_peak requires Re(s) >= 0");
    if (near_origin(v, s)) return 1.0;
    return v.rate * (delay_lst(v, s) - peak_aoi_lst(v, s)) / s;
}

AoIMetrics mean_metrics(const TaggedView& v) {
    const double idle = v.idle_fraction();
    const double second = v.rate * v.service.moment(2) +
                          (v.background.empty() ? 0.0 : v.background.rate * v.background.service.moment(2));
    AoIMetrics m{};
    m.mean_wait = second / (2.0 * idle);
    m.mean_delay = m.mean_wait + v.service.mean();
    m.mean_peak_aoi = m.mean_delay + 1.0 / v.rate;
    m.gamma = gamma_root(v);
    m.mean_aoi = m.mean_delay + v.background.load / v.rate + idle / (v.rate * v.service.lst(m.gamma));
    return m;
}

}  // namespace mgaoi
