#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "hcdgeo/demand.hpp"

namespace hcdgeo {

// Model parameters with the usual normalizations baked in: wage w = alpha,
// f.o.b. manufacturing price p = 1, firm mass N = 1, agriculture price 1
// (numeraire), one unit of workers (1/2 per region) and one of entrepreneurs.
struct EconomyParams {
    double alpha = 1.0;  // labor productivity (> 0)
    double sigma = 2.0;  // elasticity of substitution between varieties (> 1)
    double tau = 1.5;    // iceberg trade cost (>= 1)

    double phi() const;                 // trade freeness tau^(1-sigma)
    double wage() const { return alpha; }
    double mu() const { return alpha * sigma / (sigma - 1.0); }

    void validate() const;  // throws DomainError on out-of-range fields
};

// Short-run equilibrium given the entrepreneur allocation lambda (region 1's
// share). Index 0 is region 1, index 1 is region 2.
struct ShortRunSolution {
    double lambda = 0.5;
    std::array<double, 2> pi{};      // nominal entrepreneur earnings
    std::array<double, 2> P_M{};     // manufacturing price indices
    std::array<double, 2> Omega{};   // real earnings
    std::array<double, 2> m{};       // manufacturing expenditure shares
    double residual = 0.0;           // max |log residual| over the four equations
    std::size_t iterations = 0;
};

// Manufacturing price index of a region hosting a share lambda_r of firms:
// P_M = (lambda_r + (1-lambda_r) tau^(1-sigma))^(1/(1-sigma)).
double price_index(double lambda_r, const EconomyParams& params);

// Solves the two sales equations and the two earnings-budget equations for
// (pi^1, pi^2, Omega^1, Omega^2) by damped fixed-point iteration on log
// earnings with an inner monotone solve for each Omega. At lambda in {0,1}
// the empty region's entries are the shadow values of an atomistic deviator.
// pi_init optionally warm-starts the outer iteration (used by the dynamics).
ShortRunSolution solve_short_run(double lambda, const EconomyParams& params,
                                 const ShareSchedule& ss,
                                 std::optional<std::array<double, 2>> pi_init = std::nullopt);

}  // namespace hcdgeo
