#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace hcdgeo {

// Two-good preference weights: omega_A(u) = a + b*u^(-eps_u), omega_M(u) = 1.
// With eps_u = 0 (or b = 0) the weights are constant and preferences collapse
// to ordinary (homothetic) Cobb-Douglas, which has closed forms used in tests.
struct WeightSchedule {
    double a = 0.25;    // asymptotic agriculture weight (>= 0)
    double b = 1.0;     // declining agriculture weight scale (> 0)
    double eps_u = 1.0; // decay elasticity (>= 0)

    double omega_A(double u) const;
    double omega_M(double) const { return 1.0; }
    double omega(double u) const { return 1.0 + omega_A(u); }

    // Conservative lower bound on both goods' weight shares omega_i/omega over
    // u >= 1. In the homothetic limit both shares are constant; otherwise the
    // agriculture share decays toward a/(1+a+b)-style floors, which is zero
    // when a = 0 (such schedules fail the share-floor assumption).
    double share_floor() const;

    void validate() const;  // throws DomainError on out-of-range fields
};

// Operating-range configuration for the assumption validator.
struct DemandConfig {
    double gamma = 1e-6;        // subsistence quantity, common to both goods
    double s_lower = 0.1;       // assumed share floor for the A1-i / L4 checks
    double omega_lo = 1e-3;     // validation grid over real income
    double omega_hi = 1e3;
    std::size_t grid_points = 257;

    void validate() const;
};

// Manufacturing expenditure share as a function of real income Omega.
// Three interchangeable parameterizations: derived from the HCD weights, a
// direct logistic curve, or a constant (the homothetic benchmark).
class ShareSchedule {
  public:
    struct Constant {
        double m0;
    };
    struct DirectLogistic {
        double m_min, m_max, kappa, eps_m;
    };
    struct ComposedHCD {
        WeightSchedule ws;
        double gamma;
    };

    static ShareSchedule constant(double m0);
    static ShareSchedule logistic(double m_min, double m_max, double kappa,
                                  double eps_m);
    static ShareSchedule composed_hcd(const WeightSchedule& ws, double gamma);

    double operator()(double Omega) const;      // m(Omega)
    double log_elasticity(double Omega) const;  // d ln m / d ln Omega, centered FD
    double sup_share() const;                   // sup over Omega of m(Omega)
    double min_domain() const;                  // smallest admissible Omega (0 unless HCD-composed)
    bool is_constant() const;
    std::string describe() const;

    const Constant* as_constant() const { return std::get_if<Constant>(&kind_); }
    const DirectLogistic* as_logistic() const { return std::get_if<DirectLogistic>(&kind_); }
    const ComposedHCD* as_composed() const { return std::get_if<ComposedHCD>(&kind_); }

  private:
    explicit ShareSchedule(std::variant<Constant, DirectLogistic, ComposedHCD> k)
        : kind_(std::move(k)) {}
    std::variant<Constant, DirectLogistic, ComposedHCD> kind_;
};

// --- preference operations ---------------------------------------------------

// Utility level implied by a consumption bundle: the unique u > 1 solving
//   ln u = sum_i omega_i(u) ln(C_i/gamma) - sum_i omega_i(u) ln(omega_i(u)/omega(u)).
// Requires C_i > gamma for both goods.
double utility_from_consumption(double C_A, double C_M, const WeightSchedule& ws,
                                double gamma);

// Utility attainable at prices (P_A, P_M) and income y: unique fixed point of
//   ln v = sum_i omega_i(v) ln(y/(gamma P_i)).
// Requires the subsistence bound y * share_floor > max(P) * gamma.
double indirect_utility(double P_A, double P_M, double y, const WeightSchedule& ws,
                        double gamma);

// Minimum spending needed to reach utility u at the given prices:
//   ln E = ln Omega(u) + m(u) ln P_M + (1-m(u)) ln P_A.
double expenditure(double u, double P_A, double P_M, const WeightSchedule& ws,
                   double gamma);

// Real income equivalent of utility level u: ln Omega = ln gamma + ln u / omega(u).
double real_income_of_u(double u, const WeightSchedule& ws, double gamma);

// Inverse of real_income_of_u by monotone bracketing; requires Omega > gamma.
double u_of_real_income(double Omega, const WeightSchedule& ws, double gamma);

// m(Omega) through the given schedule (free-function spelling of ss(Omega)).
double share_of_real_income(double Omega, const ShareSchedule& ss);

// --- assumption validation ---------------------------------------------------

struct ValidationCheck {
    std::string check_id;  // "A1-i", "A1-ii", "A5", "A6", "L4"
    bool passed = false;
    double worst_point = 0.0;  // grid point (real income / u) attaining worst_value
    double worst_value = 0.0;
    double threshold = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const;
    const ValidationCheck* find(const std::string& id) const;
};

// Scans the operating grid and reports, per check: the weight-share floor
// (A1-i), weight monotonicity (A1-ii), share monotonicity (A5), the income
// elasticity bound max d ln m/d ln Omega < sigma-1 (A6), and the subsistence
// bound gamma*sigma*tau/s_lower < 1 (L4). Always returns a full report;
// callers decide whether failures block a run.
ValidationReport validate_assumptions(const WeightSchedule& ws, const ShareSchedule& ss,
                                      const DemandConfig& cfg, double sigma, double tau);

}  // namespace hcdgeo
