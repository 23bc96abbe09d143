#pragma once

#include <cstddef>
#include <functional>

namespace hcdgeo {

// Shared solver knobs. All fixed-point equations in this library are solved on
// the log scale to an absolute log-residual of kLogTol; kIterCap bounds the
// damped iteration before the bisection fallback takes over.
inline constexpr double kLogTol = 1e-12;
inline constexpr double kDamping = 0.5;
inline constexpr std::size_t kIterCap = 100000;

// Root of a monotone continuous f on [lo, hi] by bisection. Requires
// f(lo) and f(hi) to have opposite (or zero) signs; works for increasing
// and decreasing f. Converges to |hi-lo| <= xtol_abs + xtol_rel*|x|.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol_rel = 1e-14, double xtol_abs = 1e-300,
                   int max_iter = 400);

// Solves x = F(x) by damped iteration x <- (1-d)x + d F(x), falling back to
// bisection on F(x) - x over [lo, hi] when the iteration stalls or hits the
// cap. F(x) - x must be monotone on [lo, hi] with a sign change (true for
// every fixed point in this library). Returns x with |F(x) - x| <= tol.
double damped_fixed_point(const std::function<double(double)>& F, double x0,
                          double lo, double hi, double tol = kLogTol,
                          double damping = kDamping, std::size_t cap = kIterCap);

// Doubles hi (times `factor`) until f(hi) differs in sign from f_lo or hi
// would exceed cap. Returns true on sign change; hi is updated in place.
bool expand_bracket_up(const std::function<double(double)>& f, double f_lo,
                       double& hi, double cap, double factor = 2.0);

}  // namespace hcdgeo
