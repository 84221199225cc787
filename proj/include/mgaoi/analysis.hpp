#pragma once

#include <cstddef>

#include "mgaoi/distributions.hpp"
#include "mgaoi/model.hpp"

namespace mgaoi {

/// One source singled out for analysis, with every other source folded into
/// a compound Poisson background.
struct TaggedView {
    std::size_t index = 0;
    double rate;  // lambda
    ServiceDistribution service;
    double load;  // rho
    BackgroundProcess background;
    double total_rate;
    double total_load;

    // 1 - rho - rho+
    double idle_fraction() const noexcept { return 1.0 - load - background.load; }
};

TaggedView make_tagged_view(const SystemModel& model, std::size_t tagged);

struct AoIMetrics {
    double mean_wait;
    double mean_delay;
    double mean_peak_aoi;
    double mean_aoi;
    double gamma;
};

/// Background workload exponent: s - lambda+ + lambda+ * H+*(s).
///
/// Increasing on the positive axis with phi(0+) = 0; its inverse psi maps
/// Re(omega) > 0 into Re(z) >= Re(omega).
cplx phi(const BackgroundProcess& bg, cplx s);
double phi(const BackgroundProcess& bg, double s);

// d phi / ds = 1 - lambda+ * E[H+ e^{-s H+}]
cplx phi_deriv(const BackgroundProcess& bg, cplx s);

/// Inverse of phi. Real arguments use a safeguarded Newton/bisection on the
/// bracket [omega, omega + lambda+]. Complex arguments use Newton seeded at
/// psi(Re omega), then continuation from the real axis, then the contraction
/// z <- omega + lambda+ (1 - H+*(z)) as a last resort.
///
/// Throws ConvergenceError carrying the last residual if all of these fail.
double psi(const BackgroundProcess& bg, double omega);
cplx psi(const BackgroundProcess& bg, cplx omega);

// psi(lambda): unique root of x - lambda - lambda+ + lambda+ H+*(x) in [lambda, lambda + lambda+].
double gamma_root(const TaggedView& view);

// Below |s| < kOriginThreshold * lambda_all the transforms use their limits at 0.
inline constexpr double kOriginThreshold = 1e-6;

cplx waiting_lst(const TaggedView& view, cplx s);
cplx delay_lst(const TaggedView& view, cplx s);
cplx peak_aoi_lst(const TaggedView& view, cplx s);

/// Closed-form AoI transform:
///   lambda H*(s) / (s + lambda - phi(s)) * { W*(s) - (1-rho-rho+) + lambda D*(psi(s+lambda)) / psi(s+lambda) }
cplx aoi_lst(const TaggedView& view, cplx s);

// The two factors of aoi_lst; both tend to 1 as s -> 0+.
cplx aoi_lst_outer(const TaggedView& view, cplx s);
cplx aoi_lst_inner(const TaggedView& view, cplx s);

// lambda (D*(s) - Apeak*(s)) / s. Independent route used only for cross-checks.
cplx aoi_lst_from_peak(const TaggedView& view, cplx s);

// Closed-form means; no numerical differentiation.
AoIMetrics mean_metrics(const TaggedView& view);

}  // namespace mgaoi
