#include "hcdgeo/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "hcdgeo/errors.hpp"

namespace hcdgeo {

StructuralOutputs structural_outputs(double m, const EconomyParams& params) {
    params.validate();
    if (!(m > 0.0) || !(m < 1.0))
        throw DomainError("structural_outputs: m must lie in (0,1)");
    const double sigma = params.sigma;
    StructuralOutputs out;
    out.L_M = (sigma - 1.0) / (sigma - m);
    out.Y = params.alpha * (1.0 + 1.0 / (sigma - m));
    out.Y_pc = 0.5 * out.Y;
    out.m_tilde = 1.0 / (1.0 + sigma - m);
    out.pi_tilde = 1.0 / (sigma - m);
    return out;
}

TatonnementResult tatonnement(double lambda0, const EconomyParams& params,
                              const ShareSchedule& ss, TatonnementOptions opt) {
    params.validate();
    if (!(lambda0 >= 0.0) || !(lambda0 <= 1.0))
        throw DomainError("tatonnement: lambda0 must lie in [0,1]");
    if (!(opt.dt > 0.0)) throw DomainError("tatonnement: dt must be > 0");

    TatonnementResult res;
    double lambda = lambda0;
    double t = 0.0;
    std::optional<std::array<double, 2>> warm;
    double O1 = 0.0, O2 = 0.0;
    for (std::size_t step = 0; step < opt.horizon; ++step) {
        ShortRunSolution sol = solve_short_run(lambda, params, ss, warm);
        warm = sol.pi;
        O1 = sol.Omega[0];
        O2 = sol.Omega[1];
        if (opt.record_path) res.path.push_back({t, lambda, O1, O2});
        res.steps = step + 1;

        double drift = lambda * (1.0 - lambda) * (O1 - O2);
        if (std::abs(drift) < opt.drift_tol) {
            res.converged = true;
            break;
        }
        if (lambda <= opt.absorb_tol || lambda >= 1.0 - opt.absorb_tol) {
            res.converged = true;
            break;
        }
        // Normalizing the step by the income scale makes the per-step movement
        // in lambda O(dt) regardless of alpha.
        double dt_eff = opt.dt / std::max(O1, O2);
        lambda = std::clamp(lambda + dt_eff * drift, 0.0, 1.0);
        t += dt_eff;
    }
    if (lambda >= 1.0 - opt.absorb_tol)
        res.limit_lambda = 1.0;
    else if (lambda <= opt.absorb_tol)
        res.limit_lambda = 0.0;
    else
        res.limit_lambda = lambda;
    if (opt.record_path && (res.path.empty() || res.path.back().lambda != lambda))
        res.path.push_back({t, lambda, O1, O2});
    return res;
}

std::vector<TrajectoryRecord> growth_trajectory(const std::vector<double>& alpha_grid,
                                                double sigma, double tau,
                                                const ShareSchedule& ss,
                                                SelectionRule rule) {
    if (alpha_grid.empty()) throw DomainError("growth_trajectory: empty alpha grid");
    if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()))
        throw DomainError("growth_trajectory: alpha grid must be ascending");

    std::vector<TrajectoryRecord> recs;
    recs.reserve(alpha_grid.size());
    bool agglomerated = false;
    for (double alpha : alpha_grid) {
        EquilibriumClass cls = classify(alpha, sigma, tau, ss);
        bool go_core = false;
        switch (rule) {
            case SelectionRule::Hysteresis:
                if (cls.config == StableConfig::CorePeripheryOnly) agglomerated = true;
                go_core = agglomerated;
                break;
            case SelectionRule::AlwaysSymmetric:
                go_core = false;
                break;
            case SelectionRule::AlwaysCPWhenSustainable:
                go_core = cls.config != StableConfig::SymmetricOnly;
                break;
        }
        TrajectoryRecord rec;
        rec.alpha = alpha;
        rec.config = cls.config;
        rec.black_hole = cls.black_hole;
        if (go_core) {
            CoreSolution core = solve_core_real_income(alpha, sigma, ss);
            rec.lambda_selected = 1.0;
            rec.Omega = core.Omega_C;
            rec.m = core.m_C;
        } else {
            SymmetricSolution sym = solve_symmetric_real_income(alpha, sigma, tau, ss);
            rec.lambda_selected = 0.5;
            rec.Omega = sym.Omega_B;
            rec.m = sym.m_B;
        }
        StructuralOutputs so = structural_outputs(rec.m, EconomyParams{alpha, sigma, tau});
        rec.L_M = so.L_M;
        rec.Y = so.Y;
        rec.m_tilde = so.m_tilde;
        rec.pi_tilde = so.pi_tilde;
        recs.push_back(rec);
    }
    return recs;
}

}  // namespace hcdgeo
