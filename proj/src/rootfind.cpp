#include "hcdgeo/rootfind.hpp"

#include <cmath>

#include "hcdgeo/errors.hpp"

namespace hcdgeo {

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol_rel, double xtol_abs, int max_iter) {
    if (!(lo <= hi)) throw DomainError("bisect_root: empty interval");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw BracketFailure("bisect_root: no sign change on the given interval");
    for (int i = 0; i < max_iter; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= xtol_abs + xtol_rel * std::abs(mid)) return mid;
        double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double damped_fixed_point(const std::function<double(double)>& F, double x0,
                          double lo, double hi, double tol, double damping,
                          std::size_t cap) {
    // Damped pass first: converges quickly whenever |F'| < 1 near the root
    // (the equilibrium maps here are contractions under the bounded-income-
    // effects assumption). Bail out early to bisection if the residual stops
    // improving - some preference-layer equations are monotone but not
    // contractive far from the solution.
    double x = x0;
    double best = INFINITY;
    std::size_t since_best = 0;
    const std::size_t stall_window = 128;
    for (std::size_t it = 0; it < cap; ++it) {
        double fx = F(x);
        double resid = std::abs(fx - x);
        if (resid <= tol) return x;
        if (resid < 0.5 * best) {
            best = resid;
            since_best = 0;
        } else if (++since_best > stall_window) {
            break;  // stalled or oscillating; bisection below is guaranteed
        }
        x = (1.0 - damping) * x + damping * fx;
        if (x < lo || x > hi || !std::isfinite(x)) break;
    }
    // Monotone fallback: g(x) = F(x) - x changes sign across [lo, hi].
    auto g = [&F](double t) { return F(t) - t; };
    double root = bisect_root(g, lo, hi);
    double resid = std::abs(g(root));
    if (resid > tol * 64.0)  // far looser than tol only if g is ill-conditioned
        throw NonConvergence("damped_fixed_point: bisection fallback residual too large",
                             cap, resid);
    return root;
}

bool expand_bracket_up(const std::function<double(double)>& f, double f_lo,
                       double& hi, double cap, double factor) {
    double fhi = f(hi);
    while ((fhi > 0.0) == (f_lo > 0.0) && fhi != 0.0) {
        hi *= factor;
        if (hi > cap) return false;
        fhi = f(hi);
    }
    return true;
}

}  // namespace hcdgeo
