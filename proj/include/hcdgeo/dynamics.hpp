#pragma once

#include <cstddef>
#include <vector>

#include "hcdgeo/short_run.hpp"
#include "hcdgeo/spatial.hpp"

namespace hcdgeo {

// Aggregate structural-change outputs implied by the manufacturing share m.
struct StructuralOutputs {
    double L_M = 0.0;       // manufacturing employment share: (sigma-1)/(sigma-m)
    double Y = 0.0;         // national nominal income: alpha(1 + 1/(sigma-m))
    double Y_pc = 0.0;      // per-capita income: Y/2
    double m_tilde = 0.0;   // manufacturing share of national income: 1/(1+sigma-m)
    double pi_tilde = 0.0;  // entrepreneur earnings premium: 1/(sigma-m)
};

StructuralOutputs structural_outputs(double m, const EconomyParams& params);

// Replicator migration dynamics lambda' = lambda(1-lambda)(Omega^1 - Omega^2),
// integrated by forward Euler with the step normalized by the current scale of
// Omega (so the per-step movement in lambda is O(dt) regardless of income
// levels). Used as an independent stability oracle.
struct TatonnementOptions {
    double dt = 0.01;            // base step; effective step is dt / max(Omega)
    std::size_t horizon = 100000;
    double drift_tol = 1e-10;    // stop when |lambda_dot| falls below this
    double absorb_tol = 1e-8;    // stop when lambda is this close to 0 or 1
    bool record_path = true;
};

struct TatonnementPoint {
    double t = 0.0, lambda = 0.5, Omega1 = 0.0, Omega2 = 0.0;
};

struct TatonnementResult {
    std::vector<TatonnementPoint> path;  // empty when record_path == false
    double limit_lambda = 0.5;
    bool converged = false;  // false: horizon exhausted; path still usable
    std::size_t steps = 0;
};

TatonnementResult tatonnement(double lambda0, const EconomyParams& params,
                              const ShareSchedule& ss, TatonnementOptions opt = {});

// Equilibrium selection along a rising-productivity path.
enum class SelectionRule { Hysteresis, AlwaysSymmetric, AlwaysCPWhenSustainable };

struct TrajectoryRecord {
    double alpha = 0.0;
    StableConfig config = StableConfig::SymmetricOnly;
    bool black_hole = false;
    double lambda_selected = 0.5;  // 0.5 or 1 (ties to region 1)
    double Omega = 0.0;            // real income at the selected configuration
    double m = 0.0;
    double L_M = 0.0, Y = 0.0, m_tilde = 0.0, pi_tilde = 0.0;
};

// Walks the ascending alpha grid at fixed (sigma, tau). Under Hysteresis the
// economy stays symmetric until the symmetric equilibrium first turns
// unstable, then jumps to the core-periphery configuration (tie broken to
// region 1) and stays there.
std::vector<TrajectoryRecord> growth_trajectory(const std::vector<double>& alpha_grid,
                                                double sigma, double tau,
                                                const ShareSchedule& ss,
                                                SelectionRule rule = SelectionRule::Hysteresis);

}  // namespace hcdgeo
