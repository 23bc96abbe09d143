#include "hcdgeo/short_run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcdgeo/errors.hpp"
#include "hcdgeo/rootfind.hpp"

namespace hcdgeo {

namespace {

// Residual tolerance for the four-equation system (max |log residual|).
constexpr double kShortRunTol = 1e-11;

// Real income of an entrepreneur with log earnings ln_pi facing log price
// index q >= 0: the unique root of  ln(Omega) + m(Omega) q = ln_pi.
// Strictly increasing in ln(Omega) because m is nondecreasing and q >= 0.
double solve_real_income(double ln_pi, double q, const ShareSchedule& ss) {
    if (q == 0.0) return std::exp(ln_pi);
    auto h = [&](double x) { return x + ss(std::exp(x)) * q - ln_pi; };
    // Pad the lower end: when m is constant (or saturated) the exact bound
    // ln_pi - sup*q is itself the root and rounding can push h(lo) to +1 ulp.
    double lo = ln_pi - ss.sup_share() * q - 1e-9;
    double hi = ln_pi;
    double dom = ss.min_domain();
    if (dom > 0.0) {
        double edge = std::log(dom) + 1e-12;
        if (lo < edge) {
            if (h(edge) > 0.0)
                throw DomainError(
                    "solve_short_run: real income fell below the schedule's "
                    "subsistence domain");
            lo = edge;
        }
    }
    return std::exp(bisect_root(h, lo, hi, 1e-15, 1e-15, 200));
}

}  // namespace

double EconomyParams::phi() const { return std::pow(tau, 1.0 - sigma); }

void EconomyParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("economy params: alpha must be finite and > 0");
    if (!(sigma > 1.0) || !std::isfinite(sigma))
        throw DomainError("economy params: sigma must be finite and > 1");
    if (!(tau >= 1.0)) throw DomainError("economy params: tau must be >= 1");
}

double price_index(double lambda_r, const EconomyParams& params) {
    if (!(lambda_r >= 0.0) || !(lambda_r <= 1.0))
        throw DomainError("price_index: lambda_r must lie in [0,1]");
    double Delta = lambda_r + (1.0 - lambda_r) * params.phi();
    return std::pow(Delta, 1.0 / (1.0 - params.sigma));
}

ShortRunSolution solve_short_run(double lambda, const EconomyParams& params,
                                 const ShareSchedule& ss,
                                 std::optional<std::array<double, 2>> pi_init) {
    params.validate();
    if (!std::isfinite(params.tau))
        throw DomainError("solve_short_run: tau must be finite");
    if (!(lambda >= 0.0) || !(lambda <= 1.0))
        throw DomainError("solve_short_run: lambda must lie in [0,1]");

    const double alpha = params.alpha;
    const double sigma = params.sigma;
    const double phi = params.phi();
    const std::array<double, 2> lam{lambda, 1.0 - lambda};
    std::array<double, 2> Delta{}, q{};
    for (int r = 0; r < 2; ++r) {
        Delta[r] = lam[r] + (1.0 - lam[r]) * phi;
        q[r] = std::log(Delta[r]) / (1.0 - sigma);  // = ln P_M^r >= 0
    }

    std::array<double, 2> ln_pi{};
    if (pi_init) {
        if (!((*pi_init)[0] > 0.0) || !((*pi_init)[1] > 0.0))
            throw DomainError("solve_short_run: warm-start earnings must be > 0");
        ln_pi = {std::log((*pi_init)[0]), std::log((*pi_init)[1])};
    } else {
        // Exact at the symmetric point, close elsewhere.
        double probe = std::max(alpha / sigma, ss.min_domain() * 1.01);
        double pi0 = alpha / (sigma - ss(probe));
        ln_pi = {std::log(pi0), std::log(pi0)};
    }

    std::array<double, 2> Omega{}, m{}, E{};
    double residual = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    for (; it < kIterCap; ++it) {
        for (int r = 0; r < 2; ++r) {
            Omega[r] = solve_real_income(ln_pi[r], q[r], ss);
            m[r] = ss(Omega[r]);
            E[r] = lam[r] * m[r] * std::exp(ln_pi[r]) + 0.5 * alpha;
        }
        std::array<double, 2> ln_pi_new{};
        for (int r = 0; r < 2; ++r) {
            int s = 1 - r;
            ln_pi_new[r] = std::log((E[r] / Delta[r] + phi * E[s] / Delta[s]) / sigma);
        }
        residual = std::max(std::abs(ln_pi_new[0] - ln_pi[0]),
                            std::abs(ln_pi_new[1] - ln_pi[1]));
        if (residual <= kShortRunTol) break;
        double d = it < 5000 ? kDamping : (it < 20000 ? 0.25 : 0.1);
        for (int r = 0; r < 2; ++r)
            ln_pi[r] += d * (ln_pi_new[r] - ln_pi[r]);
    }
    if (residual > kShortRunTol)
        throw NonConvergence("solve_short_run: earnings iteration did not converge",
                             it, residual);

    ShortRunSolution sol;
    sol.lambda = lambda;
    for (int r = 0; r < 2; ++r) {
        sol.pi[r] = std::exp(ln_pi[r]);
        sol.P_M[r] = std::exp(q[r]);
        sol.Omega[r] = Omega[r];
        sol.m[r] = m[r];
    }
    sol.residual = residual;
    sol.iterations = it;
    return sol;
}

}  // namespace hcdgeo
