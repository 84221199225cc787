#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mgaoi/distributions.hpp"

namespace mgaoi {

// Evaluates a Laplace-Stieltjes transform at a complex frequency.
using Transform = std::function<cplx(cplx)>;

enum class InversionMethod { euler, talbot };

struct InversionConfig {
    InversionMethod method = InversionMethod::euler;
    // Euler: 2M+1 Bromwich nodes. Talbot: M contour nodes.
    int nodes = 49;
    double target_error = 1e-8;

    void check() const;
};

struct InvertedCdf {
    std::vector<double> values;
    // Largest amount any raw value moved when clamped to [0, 1].
    double max_clamp = 0.0;
    // Set when max_clamp exceeds ten times the target error.
    bool clamp_flagged = false;
};

/// CDF values of the distribution whose LST is `transform`, i.e. the
/// inverse Laplace transform of transform(s)/s, on an ascending grid x >= 0.
/// x = 0 returns the atom at the origin, lim transform(s) as s -> infinity.
///
/// The Euler method samples the Bromwich line Re(s) = A/(2x) > 0 and needs
/// the transform only on the right half-plane. The Talbot contour enters
/// Re(s) < 0 and is only usable with transforms analytic there.
InvertedCdf invert_cdf(const Transform& transform, std::span<const double> x, const InversionConfig& cfg = {});

// Density values on a grid of strictly positive points.
std::vector<double> invert_pdf(const Transform& transform, std::span<const double> x,
                               const InversionConfig& cfg = {});

struct NumericalMoment {
    double value;
    std::vector<double> steps;      // h_k = 2^{-k} h0
    std::vector<double> estimates;  // raw difference quotients per step
};

/// E[Y^n] for n in {1, 2} from one-sided differences of transform on the real
/// axis, refined with three levels of Richardson extrapolation. `scale_hint`
/// is a rough value of E[Y] used to size the first step.
NumericalMoment numerical_moment(const Transform& transform, int order, double scale_hint = 1.0);

}  // namespace mgaoi
