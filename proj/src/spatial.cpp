#include "hcdgeo/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcdgeo/errors.hpp"
#include "hcdgeo/parallel.hpp"
#include "hcdgeo/rootfind.hpp"

namespace hcdgeo {

namespace {

constexpr double kTauBracketCap = 1e8;
constexpr double kTauRootTol = 1e-10;  // relative, on tau

void check_alpha_sigma(double alpha, double sigma) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("spatial: alpha must be finite and > 0");
    if (!(sigma > 1.0) || !std::isfinite(sigma))
        throw DomainError("spatial: sigma must be finite and > 1");
}

// Right-hand side of the break condition tau^(1-sigma) = RHS(m): negative
// once m >= sigma-1, in which case no tau can satisfy it (unstable for all tau).
double break_rhs(double m, double sigma) {
    return ((sigma - 1.0 - m) / (sigma - 1.0 + m)) * ((sigma - m) / (sigma + m));
}

// Infimum of the share over the schedule's domain (not necessarily attained).
double schedule_inf_share(const ShareSchedule& ss) {
    if (const auto* c = ss.as_constant()) return c->m0;
    if (const auto* l = ss.as_logistic()) {
        if (l->eps_m == 0.0)
            return l->m_min + (l->m_max - l->m_min) / (1.0 + l->kappa);
        return l->m_min;
    }
    const auto* h = ss.as_composed();
    return 1.0 / (1.0 + h->ws.a + h->ws.b);
}

// A share value the schedule actually takes, for constant-valued schedules.
double constant_share_value(const ShareSchedule& ss) {
    return ss(std::max(1.0, 2.0 * ss.min_domain()));
}

// Clamp the lower end of a log-real-income bracket to the schedule's domain
// edge; g must be >= 0 there or the solution lies below subsistence.
double clamp_to_domain(double lo, const ShareSchedule& ss,
                       const std::function<double(double)>& g, const char* who) {
    double dom = ss.min_domain();
    if (dom <= 0.0) return lo;
    double edge = std::log(dom) + 1e-12;
    if (lo >= edge) return lo;
    if (g(edge) < 0.0)
        throw DomainError(std::string(who) +
                          ": real income fell below the schedule's subsistence domain");
    return edge;
}

double logsumexp2(double x, double y) {
    double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

// ln(shadow earnings) for a deviator alone in the empty region when the other
// region hosts every firm, with expenditure share `m_mobile` on the mobile
// entrepreneurs' spending: (tau^(1-sigma)/sigma) * [m*alpha/(sigma-m) +
// (alpha/2)(1 + tau^(2(sigma-1)))], evaluated in logs to survive large tau.
double ln_shadow_earnings(double alpha, double sigma, double tau, double m_mobile) {
    double ln_phi = (1.0 - sigma) * std::log(tau);
    double near = std::log(m_mobile * alpha / (sigma - m_mobile) + 0.5 * alpha);
    double far = std::log(0.5 * alpha) + 2.0 * (sigma - 1.0) * std::log(tau);
    return ln_phi - std::log(sigma) + logsumexp2(near, far);
}

}  // namespace

std::string to_string(StableConfig c) {
    switch (c) {
        case StableConfig::SymmetricOnly:
            return "symmetric_only";
        case StableConfig::Bistable:
            return "bistable";
        case StableConfig::CorePeripheryOnly:
            return "core_periphery_only";
    }
    return "unknown";
}

CoreSolution solve_core_real_income(double alpha, double sigma, const ShareSchedule& ss) {
    check_alpha_sigma(alpha, sigma);
    double sup = ss.sup_share();
    auto F = [&](double x) { return std::log(alpha) - std::log(sigma - ss(std::exp(x))); };
    auto g = [&](double x) { return F(x) - x; };
    double lo = std::log(alpha) - std::log(sigma) - 1e-9;
    double hi = std::log(alpha) - std::log(sigma - sup) + 1e-9;
    lo = clamp_to_domain(lo, ss, g, "solve_core_real_income");
    double x = damped_fixed_point(F, std::clamp(F(lo), lo, hi), lo, hi);
    CoreSolution out;
    out.Omega_C = std::exp(x);
    out.m_C = ss(out.Omega_C);
    return out;
}

PeripheryShadow periphery_shadow(double alpha, double sigma, double tau, double Omega_C,
                                 const ShareSchedule& ss, PeripheryShareForm form) {
    check_alpha_sigma(alpha, sigma);
    if (!(tau >= 1.0) || !std::isfinite(tau))
        throw DomainError("periphery_shadow: tau must be finite and >= 1");
    if (!(Omega_C > 0.0)) throw DomainError("periphery_shadow: Omega_C must be > 0");
    const double ln_tau = std::log(tau);
    const double m_C = ss(Omega_C);

    PeripheryShadow out;
    if (form == PeripheryShareForm::DerivedCoreShare) {
        // The core's expenditure share is a fixed input to the deviator's
        // earnings; only the deviator's own real income is solved for.
        double ln_pi = ln_shadow_earnings(alpha, sigma, tau, m_C);
        auto h = [&](double x) { return x + ss(std::exp(x)) * ln_tau - ln_pi; };
        double lo = ln_pi - ss.sup_share() * ln_tau;
        lo = clamp_to_domain(lo, ss, [&](double x) { return -h(x); }, "periphery_shadow");
        double x = ln_tau == 0.0 ? ln_pi : bisect_root(h, lo, ln_pi, 1e-15, 1e-15, 200);
        out.pi_s = std::exp(ln_pi);
        out.Omega_s = std::exp(x);
        return out;
    }
    // Literal printed form: the deviator's own share also scales the mobile
    // expenditure term, so earnings and real income are solved jointly.
    auto T = [&](double x) {
        double m = ss(std::exp(x));
        return ln_shadow_earnings(alpha, sigma, tau, m) - m * ln_tau;
    };
    double lo = ln_shadow_earnings(alpha, sigma, tau, schedule_inf_share(ss) * 0.5) -
                ss.sup_share() * ln_tau - 1e-9;
    double hi = ln_shadow_earnings(alpha, sigma, tau, ss.sup_share()) + 1e-9;
    auto g = [&](double x) { return T(x) - x; };
    lo = clamp_to_domain(lo, ss, g, "periphery_shadow");
    double x = damped_fixed_point(T, std::clamp(T(lo), lo, hi), lo, hi);
    out.Omega_s = std::exp(x);
    out.pi_s = std::exp(ln_shadow_earnings(alpha, sigma, tau, ss(out.Omega_s)));
    return out;
}

double sustain_function(double tau, double m_C, double sigma) {
    if (!(tau >= 1.0)) throw DomainError("sustain_function: tau must be >= 1");
    if (!(m_C > 0.0) || !(m_C < sigma))
        throw DomainError("sustain_function: need 0 < m_C < sigma");
    if (!(sigma > 1.0)) throw DomainError("sustain_function: sigma must be > 1");
    // Arranged so f(1) = 0 holds exactly in floating point:
    // f = (1 - t1) + B (t2 - t1), with 1 + B = 2 sigma/(sigma - m_C).
    double B = (sigma + m_C) / (sigma - m_C);
    double t1 = std::pow(tau, m_C + 1.0 - sigma);
    double t2 = std::pow(tau, 2.0 * (1.0 - sigma));
    return (1.0 - t1) + B * (t2 - t1);
}

CriticalTau sustain_point(double alpha, double sigma, const ShareSchedule& ss) {
    CoreSolution core = solve_core_real_income(alpha, sigma, ss);
    if (core.m_C >= sigma - 1.0) return CriticalTau::everywhere();
    auto f = [&](double t) { return sustain_function(t, core.m_C, sigma); };
    double lo = 1.0 + 1e-6;
    double flo = f(lo);
    if (flo >= 0.0) return CriticalTau::finite(1.0);  // degenerate: no dip below zero
    double hi = 2.0;
    if (!expand_bracket_up(f, flo, hi, kTauBracketCap))
        throw BracketFailure("sustain_point: no sign change below tau = 1e8");
    return CriticalTau::finite(bisect_root(f, lo, hi, kTauRootTol, 0.0, 400));
}

SymmetricSolution solve_symmetric_real_income(double alpha, double sigma, double tau,
                                              const ShareSchedule& ss) {
    check_alpha_sigma(alpha, sigma);
    if (!(tau >= 1.0)) throw DomainError("symmetric solve: tau must be >= 1");
    double phi = std::pow(tau, 1.0 - sigma);  // 0 at tau = infinity
    double penalty = std::log(2.0 / (1.0 + phi));
    double sup = ss.sup_share();
    auto F = [&](double x) {
        double m = ss(std::exp(x));
        return std::log(alpha) - std::log(sigma - m) - m / (sigma - 1.0) * penalty;
    };
    auto g = [&](double x) { return F(x) - x; };
    double lo = std::log(alpha) - std::log(sigma) - sup / (sigma - 1.0) * penalty - 1e-9;
    double hi = std::log(alpha) - std::log(sigma - sup) + 1e-9;
    lo = clamp_to_domain(lo, ss, g, "solve_symmetric_real_income");
    double x = damped_fixed_point(F, std::clamp(F(lo), lo, hi), lo, hi);
    SymmetricSolution out;
    out.Omega_B = std::exp(x);
    out.m_B = ss(out.Omega_B);
    return out;
}

CriticalTau break_point(double alpha, double sigma, const ShareSchedule& ss) {
    SymmetricSolution limit =
        solve_symmetric_real_income(alpha, sigma, std::numeric_limits<double>::infinity(), ss);
    if (limit.m_B >= sigma - 1.0) return CriticalTau::everywhere();
    auto G = [&](double t) {
        double m = solve_symmetric_real_income(alpha, sigma, t, ss).m_B;
        return std::pow(t, 1.0 - sigma) - break_rhs(m, sigma);
    };
    double lo = 1.0 + 1e-6;
    double g_lo = G(lo);
    if (g_lo <= 0.0) return CriticalTau::finite(1.0);  // stable already at tau -> 1
    double hi = 2.0;
    if (!expand_bracket_up(G, g_lo, hi, kTauBracketCap))
        throw BracketFailure("break_point: no sign change below tau = 1e8");
    return CriticalTau::finite(bisect_root(G, lo, hi, kTauRootTol, 0.0, 400));
}

namespace {

// Shared scaffold for the two alpha thresholds: root of cond(alpha) - (sigma-1)
// where cond is an increasing share-in-alpha map (core share, or symmetric
// share at infinite tau).
AlphaThreshold alpha_threshold(double sigma, const ShareSchedule& ss,
                               const std::function<double(double)>& share_at) {
    if (!(sigma > 1.0) || !std::isfinite(sigma))
        throw DomainError("alpha threshold: sigma must be finite and > 1");
    if (sigma > 2.0) return AlphaThreshold::not_defined();
    const double target = sigma - 1.0;
    if (ss.is_constant())
        return constant_share_value(ss) >= target ? AlphaThreshold::everywhere_all_alpha()
                                                  : AlphaThreshold::not_defined();
    if (ss.sup_share() <= target) return AlphaThreshold::not_defined();
    if (schedule_inf_share(ss) >= target) return AlphaThreshold::everywhere_all_alpha();

    auto h = [&](double a) { return share_at(a) - target; };
    double lo = 1.0;
    bool found_lo = false;
    for (int i = 0; i < 200; ++i) {
        double v;
        try {
            v = h(lo);
        } catch (const DomainError&) {
            lo *= 2.0;  // fell below the schedule's domain; smallest usable alpha
            break;
        }
        if (v < 0.0) {
            found_lo = true;
            break;
        }
        lo *= 0.5;
        if (lo < 1e-12) break;
    }
    if (!found_lo) {
        // condition holds down to the smallest admissible alpha
        double v;
        try {
            v = h(lo);
        } catch (const DomainError&) {
            throw BracketFailure("alpha threshold: no admissible alpha to bracket from");
        }
        if (v >= 0.0) return AlphaThreshold::everywhere_all_alpha();
    }
    double hi = std::max(2.0 * lo, 1.0);
    double h_lo = -1.0;  // sign only
    if (!expand_bracket_up(h, h_lo, hi, 1e12))
        throw BracketFailure("alpha threshold: no crossing below alpha = 1e12");
    return AlphaThreshold::finite(bisect_root(h, lo, hi, 1e-10, 0.0, 400));
}

}  // namespace

AlphaThreshold alpha_threshold_sustain(double sigma, const ShareSchedule& ss) {
    return alpha_threshold(sigma, ss, [&](double a) {
        return solve_core_real_income(a, sigma, ss).m_C;
    });
}

AlphaThreshold alpha_threshold_break(double sigma, const ShareSchedule& ss) {
    return alpha_threshold(sigma, ss, [&](double a) {
        return solve_symmetric_real_income(a, sigma,
                                           std::numeric_limits<double>::infinity(), ss)
            .m_B;
    });
}

bool symmetric_unstable_at(double alpha, double sigma, double tau, const ShareSchedule& ss) {
    if (!(tau >= 1.0) || !std::isfinite(tau))
        throw DomainError("symmetric_unstable_at: tau must be finite and >= 1");
    double m = solve_symmetric_real_income(alpha, sigma, tau, ss).m_B;
    return std::pow(tau, 1.0 - sigma) >= break_rhs(m, sigma);
}

bool core_sustainable_at(double alpha, double sigma, double tau, const ShareSchedule& ss) {
    if (!(tau >= 1.0) || !std::isfinite(tau))
        throw DomainError("core_sustainable_at: tau must be finite and >= 1");
    double m_C = solve_core_real_income(alpha, sigma, ss).m_C;
    return sustain_function(tau, m_C, sigma) <= 0.0;
}

EquilibriumClass classify(double alpha, double sigma, double tau, const ShareSchedule& ss) {
    EquilibriumClass out;
    out.black_hole =
        solve_symmetric_real_income(alpha, sigma, std::numeric_limits<double>::infinity(), ss)
            .m_B >= sigma - 1.0;
    if (symmetric_unstable_at(alpha, sigma, tau, ss)) {
        out.config = StableConfig::CorePeripheryOnly;
    } else {
        out.config = core_sustainable_at(alpha, sigma, tau, ss)
                         ? StableConfig::Bistable
                         : StableConfig::SymmetricOnly;
    }
    return out;
}

CriticalPoints critical_points(double alpha, double sigma, const ShareSchedule& ss) {
    CriticalPoints out;
    out.tau_break = break_point(alpha, sigma, ss);
    out.tau_sustain = sustain_point(alpha, sigma, ss);
    return out;
}

std::vector<PhaseCell> phase_grid(const std::vector<double>& alphas, double sigma,
                                  const std::vector<double>& taus, const ShareSchedule& ss,
                                  unsigned threads) {
    if (alphas.empty() || taus.empty())
        throw DomainError("phase_grid: alpha and tau grids must be nonempty");
    std::vector<PhaseCell> cells(alphas.size() * taus.size());
    parallel_for(alphas.size(), threads, [&](std::size_t i) {
        const double alpha = alphas[i];
        bool row_ok = true;
        std::string row_err;
        CoreSolution core{};
        bool black_hole = false;
        try {
            core = solve_core_real_income(alpha, sigma, ss);
            black_hole = solve_symmetric_real_income(
                             alpha, sigma, std::numeric_limits<double>::infinity(), ss)
                             .m_B >= sigma - 1.0;
        } catch (const SolverError& e) {
            row_ok = false;
            row_err = e.what();
        }
        auto t0k = PhaseCell::Col::Error;
        auto t1k = PhaseCell::Col::Error;
        double t0v = 0.0, t1v = 0.0;
        if (row_ok) {
            try {
                CriticalTau t0 = break_point(alpha, sigma, ss);
                t0k = t0.is_everywhere() ? PhaseCell::Col::Everywhere
                                         : PhaseCell::Col::Finite;
                t0v = t0.value;
            } catch (const SolverError&) {
            }
            try {
                CriticalTau t1 = sustain_point(alpha, sigma, ss);
                t1k = t1.is_everywhere() ? PhaseCell::Col::Everywhere
                                         : PhaseCell::Col::Finite;
                t1v = t1.value;
            } catch (const SolverError&) {
            }
        }
        for (std::size_t j = 0; j < taus.size(); ++j) {
            PhaseCell& c = cells[i * taus.size() + j];
            c.alpha = alpha;
            c.sigma = sigma;
            c.tau = taus[j];
            c.tau0_kind = t0k;
            c.tau0 = t0v;
            c.tau1_kind = t1k;
            c.tau1 = t1v;
            if (!row_ok) {
                c.ok = false;
                c.error = row_err;
                continue;
            }
            try {
                SymmetricSolution sym = solve_symmetric_real_income(alpha, sigma, c.tau, ss);
                bool unstable = std::pow(c.tau, 1.0 - sigma) >= break_rhs(sym.m_B, sigma);
                bool sustainable = sustain_function(c.tau, core.m_C, sigma) <= 0.0;
                c.cls.config = unstable ? StableConfig::CorePeripheryOnly
                               : sustainable ? StableConfig::Bistable
                                             : StableConfig::SymmetricOnly;
                c.cls.black_hole = black_hole;
                c.omega_B = sym.Omega_B;
                c.m_B = sym.m_B;
                c.omega_C = core.Omega_C;
                c.m_C = core.m_C;
                c.ok = true;
            } catch (const SolverError& e) {
                c.ok = false;
                c.error = e.what();
            }
        }
    });
    return cells;
}

}  // namespace hcdgeo
