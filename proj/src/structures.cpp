#include "hcdgeo/structures.hpp"

#include <algorithm>
#include <cmath>

#include "hcdgeo/errors.hpp"
#include "hcdgeo/rootfind.hpp"

namespace hcdgeo {

namespace {

void check_box(double m, double sigma, double eta, double Z) {
    if (!(m > 0.0) || !(m < 1.0))
        throw DomainError("structures: m must lie in (0,1)");
    if (!(sigma > 1.0) || !std::isfinite(sigma))
        throw DomainError("structures: sigma must be finite and > 1");
    if (!(eta >= 0.0) || !(eta <= 1.0))
        throw DomainError("structures: eta must lie in [0,1]");
    if (!(Z >= 0.0) || !(Z <= 1.0))
        throw DomainError("structures: Z must lie in [0,1]");
}

// 3x3 dense solve, Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> A,
                             std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-300)
            throw SingularSystem("structures: linearized system has no usable pivot");
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 3; ++r) {
            double f = A[r][col] / A[col][col];
            for (int c = col; c < 3; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

}  // namespace

void ExtensionParams::validate() const {
    if (!(eta >= 0.0) || !(eta <= 1.0))
        throw DomainError("extension params: eta must lie in [0,1]");
}

double trade_friction_index(double tau, double sigma) {
    if (!(tau >= 1.0)) throw DomainError("trade_friction_index: tau must be >= 1");
    if (!(sigma > 1.0)) throw DomainError("trade_friction_index: sigma must be > 1");
    double phi = std::pow(tau, 1.0 - sigma);
    return (1.0 - phi) / (1.0 + phi);
}

double symmetric_earnings_ext(double alpha, double sigma, double m, double eta) {
    if (!(alpha > 0.0)) throw DomainError("symmetric_earnings_ext: alpha must be > 0");
    double denom = sigma - (m + eta * (sigma - 1.0));
    if (!(denom > 0.0))
        throw DomainError("symmetric_earnings_ext: earnings denominator must be > 0");
    return alpha / denom;
}

double stability_elasticity(double m, double sigma, double eta, double Z) {
    check_box(m, sigma, eta, Z);
    const double e = eta * (sigma - 1.0);
    const double mt = (m + e) / sigma;
    double num = 1.0 - Z * Z + (m / (sigma - 1.0)) * Z * (1.0 - mt * Z);
    double den = 1.0 - mt * Z + e * (1.0 - Z * Z);
    if (!(std::abs(den) > 1e-14))
        throw DegenerateDenominator("stability_elasticity: denominator vanishes");
    return -1.0 + num / den;
}

double elasticity_via_linear_system(double m, double sigma, double eta, double Z) {
    check_box(m, sigma, eta, Z);
    const double e = eta * (sigma - 1.0);
    const double mt = (m + e) / sigma;
    // Rows: earnings response, expenditure response, market-access response,
    // in the unknowns (E(pi), E(E), E(Delta)).
    std::array<std::array<double, 3>, 3> A{{{1.0 + e, -Z, Z},
                                            {-mt, 1.0, 0.0},
                                            {Z * e, 0.0, 1.0}}};
    std::array<double, 3> b{-e, mt, Z * (1.0 - e)};
    std::array<double, 3> x = solve3(A, b);
    return x[0] + (m / (sigma - 1.0)) * x[2];
}

StabilityReport stability_report(double m, double sigma, double eta, double tau) {
    StabilityReport rep;
    rep.Z = trade_friction_index(tau, sigma);
    rep.m_tilde_ext = (m + eta * (sigma - 1.0)) / sigma;
    rep.elasticity = stability_elasticity(m, sigma, eta, rep.Z);
    rep.stable = rep.elasticity < 0.0;
    return rep;
}

SymmetricSolution solve_symmetric_real_income_ext(double alpha, double sigma, double tau,
                                                  double eta, const ShareSchedule& ss) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("symmetric ext solve: alpha must be finite and > 0");
    if (!(sigma > 1.0) || !std::isfinite(sigma))
        throw DomainError("symmetric ext solve: sigma must be finite and > 1");
    if (!(tau >= 1.0)) throw DomainError("symmetric ext solve: tau must be >= 1");
    if (!(eta >= 0.0) || !(eta <= 1.0))
        throw DomainError("symmetric ext solve: eta must lie in [0,1]");
    const double e = eta * (sigma - 1.0);
    const double sup = ss.sup_share();
    if (!(sigma - sup - e > 0.0))
        throw DegenerateDenominator(
            "symmetric ext solve: earnings denominator can vanish within the "
            "schedule's share range");
    double phi = std::pow(tau, 1.0 - sigma);
    double penalty = std::log(2.0 / (1.0 + phi));
    auto F = [&](double x) {
        double m = ss(std::exp(x));
        return std::log(alpha) - std::log(sigma - m - e) - m / (sigma - 1.0) * penalty;
    };
    auto g = [&](double x) { return F(x) - x; };
    double lo =
        std::log(alpha) - std::log(sigma - e) - sup / (sigma - 1.0) * penalty - 1e-9;
    double hi = std::log(alpha) - std::log(sigma - sup - e) + 1e-9;
    double dom = ss.min_domain();
    if (dom > 0.0) {
        double edge = std::log(dom) + 1e-12;
        if (lo < edge) {
            if (g(edge) < 0.0)
                throw DomainError(
                    "symmetric ext solve: real income fell below the schedule's "
                    "subsistence domain");
            lo = edge;
        }
    }
    double x = damped_fixed_point(F, std::clamp(F(lo), lo, hi), lo, hi);
    SymmetricSolution out;
    out.Omega_B = std::exp(x);
    out.m_B = ss(out.Omega_B);
    return out;
}

std::array<double, 3> hat_residuals(double lambda_hat, double pi_hat, double E_hat,
                                    double Delta_hat, double m_r, double m_s,
                                    const std::array<double, 2>& lambda_levels,
                                    const std::array<double, 2>& pi_levels,
                                    const EconomyParams& params, double eta) {
    const double e = eta * (params.sigma - 1.0);
    const double phi = params.phi();
    const double alpha = params.alpha;

    // Earnings ratio: pi_hat = (lambda_hat pi_hat)^(-e) (E_hat + phi Delta_hat)
    //                                                / (phi E_hat + Delta_hat).
    double R1 = std::log(pi_hat) -
                (-e * std::log(lambda_hat * pi_hat) +
                 std::log(E_hat + phi * Delta_hat) - std::log(phi * E_hat + Delta_hat));

    // Expenditure ratio needs levels: E^r = alpha/2 + (m_r + e) lambda^r pi^r.
    double R2 = std::log(E_hat) -
                (std::log(alpha + (m_r + e) * 2.0 * lambda_levels[0] * pi_levels[0]) -
                 std::log(alpha + (m_s + e) * 2.0 * lambda_levels[1] * pi_levels[1]));

    // Market-access ratio: Delta^r = lambda^r (lambda^r pi^r)^(-e) + phi-weighted
    // counterpart, in ratio form through w = lambda_hat^(1-e) pi_hat^(-e).
    double w = std::pow(lambda_hat, 1.0 - e) * std::pow(pi_hat, -e);
    double R3 = std::log(Delta_hat) - (std::log(w + phi) - std::log(phi * w + 1.0));

    return {R1, R2, R3};
}

}  // namespace hcdgeo
