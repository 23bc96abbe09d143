#pragma once

#include <array>

#include "hcdgeo/demand.hpp"
#include "hcdgeo/short_run.hpp"
#include "hcdgeo/spatial.hpp"

namespace hcdgeo {

// Extension with a non-traded fixed factor ("structures") entering
// manufacturing production with Cobb-Douglas share eta. Structure supply is
// normalized to Lambda = eta(sigma-1), making the unit price of structures
// rho^r = lambda^r pi^r. eta = 0 nests the baseline model; eta = 1 is the
// polar non-traded-factor case.
struct ExtensionParams {
    double eta = 0.0;  // structure cost share in [0,1]
    void validate() const;
};

// Trade-friction index Z = (1 - tau^(1-sigma)) / (1 + tau^(1-sigma));
// 0 at free trade, 1 at autarky.
double trade_friction_index(double tau, double sigma);

// Symmetric-equilibrium earnings with structures:
//   pi = alpha / (sigma - [m + eta(sigma-1)]).
double symmetric_earnings_ext(double alpha, double sigma, double m, double eta);

// Elasticity of the regional real-earnings ratio with respect to the
// entrepreneur-allocation ratio at the symmetric point, closed form:
//   E(Omega) = -1 + [1 - Z^2 + (m/(sigma-1)) Z (1 - m_tilde Z)]
//                  / [1 - m_tilde Z + eta(sigma-1)(1 - Z^2)],
// with m_tilde = (m + eta(sigma-1))/sigma. Symmetric equilibrium stable iff
// the value is negative.
double stability_elasticity(double m, double sigma, double eta, double Z);

// Same quantity via the 3x3 linearized system in (E(pi), E(E), E(Delta)),
// solved by direct elimination; agrees with the closed form to 1e-12.
double elasticity_via_linear_system(double m, double sigma, double eta, double Z);

struct StabilityReport {
    double Z = 0.0;
    double m_tilde_ext = 0.0;  // (m + eta(sigma-1))/sigma
    double elasticity = 0.0;
    bool stable = false;
};

StabilityReport stability_report(double m, double sigma, double eta, double tau);

// Symmetric real income of the extended model: the baseline fixed-point
// equation with the extended earnings pi = alpha/(sigma - m - eta(sigma-1))
// in place of alpha/(sigma - m); the price-index penalty term is unchanged.
SymmetricSolution solve_symmetric_real_income_ext(double alpha, double sigma, double tau,
                                                  double eta, const ShareSchedule& ss);

// Residuals of the three regional-ratio ("hat") equations off symmetry, given
// hat values, both regions' shares and levels, and eta. All three vanish at
// the symmetric point. The expenditure-ratio equation needs the levels
// lambda^r pi^r, not just ratios, which is why they are passed explicitly.
std::array<double, 3> hat_residuals(double lambda_hat, double pi_hat, double E_hat,
                                    double Delta_hat, double m_r, double m_s,
                                    const std::array<double, 2>& lambda_levels,
                                    const std::array<double, 2>& pi_levels,
                                    const EconomyParams& params, double eta);

}  // namespace hcdgeo
