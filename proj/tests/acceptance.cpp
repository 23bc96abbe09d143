// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with
// the measured worst case; the process exits with the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "hcdgeo/demand.hpp"
#include "hcdgeo/dynamics.hpp"
#include "hcdgeo/errors.hpp"
#include "hcdgeo/short_run.hpp"
#include "hcdgeo/spatial.hpp"
#include "hcdgeo/structures.hpp"

using namespace hcdgeo;

namespace {

// Pinned tolerances and budgets.
constexpr double kDualityRel = 1e-9;
constexpr double kDualityBudgetSec = 5.0;
constexpr double kSustainIdentityTol = 1e-12;
constexpr double kBreakAbsTol = 1e-3;
constexpr double kBreakNestedRel = 1e-8;
constexpr double kOracleBudgetSec = 600.0;
constexpr double kLimitTol = 1e-12;
constexpr double kClosedVsLinearTol = 1e-12;
constexpr double kEtaZeroMapRel = 1e-6;
constexpr double kPhaseBudgetSec = 120.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double now_minus(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    v.front() = lo;
    v.back() = hi;
    return v;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
    for (double& x : v) x = std::exp(x);
    v.front() = lo;
    v.back() = hi;
    return v;
}

const ShareSchedule kDefaultLogistic = ShareSchedule::logistic(0.2, 0.95, 1.0, 2.0);
// A gentler curve whose peak share elasticity stays inside the admissible
// range down to sigma = 1.6; used for the low-sigma sweeps.
const ShareSchedule kLowSigmaLogistic = ShareSchedule::logistic(0.1, 0.95, 1.0, 1.0);

int rank(StableConfig c) {
    switch (c) {
        case StableConfig::SymmetricOnly: return 0;
        case StableConfig::Bistable: return 1;
        case StableConfig::CorePeripheryOnly: return 2;
    }
    return -1;
}

// 1. Expenditure/indirect-utility duality: E(V(P, y), P) = y.
Outcome duality_suite() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> lnp(std::log(0.2), std::log(5.0));
    std::uniform_real_distribution<double> lnm(std::log(1.5), std::log(50.0));
    WeightSchedule ws;
    const double gamma = 1e-3;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double P_A = std::exp(lnp(rng));
        double P_M = std::exp(lnp(rng));
        double y = std::exp(lnm(rng)) * gamma * std::max(P_A, P_M) / ws.share_floor();
        double u = indirect_utility(P_A, P_M, y, ws, gamma);
        double back = expenditure(u, P_A, P_M, ws, gamma);
        worst = std::max(worst, std::abs(back - y) / y);
    }
    double sec = now_minus(t0);
    bool pass = worst <= kDualityRel && sec < kDualityBudgetSec;
    return {pass, fmt("1000 draws, worst rel err %.3g, %.2f s", worst, sec)};
}

// 2. Sustain identity f(1) = 0 and sign(f) = sign(Omega_s - Omega_C).
Outcome sustain_identity() {
    std::mt19937 rng(202);
    std::uniform_real_distribution<double> um(0.05, 0.95);
    std::uniform_real_distribution<double> us(1.2, 8.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
        worst = std::max(worst, std::abs(sustain_function(1.0, um(rng), us(rng))));

    std::uniform_real_distribution<double> usig(1.65, 1.85);
    std::uniform_real_distribution<double> lna(std::log(0.3), std::log(0.9));
    std::uniform_real_distribution<double> lnt(std::log(1.05), std::log(50.0));
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        double sigma = usig(rng), alpha = std::exp(lna(rng)), tau = std::exp(lnt(rng));
        auto core = solve_core_real_income(alpha, sigma, kLowSigmaLogistic);
        double f = sustain_function(tau, core.m_C, sigma);
        auto sh = periphery_shadow(alpha, sigma, tau, core.Omega_C, kLowSigmaLogistic);
        if ((f <= 0.0) != (sh.Omega_s <= core.Omega_C)) ++mismatches;
    }
    bool pass = worst <= kSustainIdentityTol && mismatches == 0;
    return {pass, fmt("worst |f(1)| = %.3g over 1000 draws, %d sign mismatches in 200",
                      worst, mismatches)};
}

// 3. Core real income dominates the symmetric split; break precedes sustain.
Outcome threshold_ordering() {
    int omega_viol = 0, order_viol = 0, finite_pairs = 0, beyond_cap = 0;
    for (double sigma : linspace(1.8, 6.0, 20)) {
        for (double alpha : logspace(0.2, 5.0, 20)) {
            auto core = solve_core_real_income(alpha, sigma, kDefaultLogistic);
            auto sym = solve_symmetric_real_income(alpha, sigma, 2.0, kDefaultLogistic);
            if (!(sym.Omega_B < core.Omega_C)) ++omega_viol;
            try {
                auto cp = critical_points(alpha, sigma, kDefaultLogistic);
                if (!cp.tau_break.is_everywhere() && !cp.tau_sustain.is_everywhere()) {
                    ++finite_pairs;
                    if (!(cp.tau_break.value < cp.tau_sustain.value)) ++order_viol;
                }
            } catch (const BracketFailure&) {
                ++beyond_cap;  // sustain threshold past the search cap; no ordering claim
            }
        }
    }
    bool pass = omega_viol == 0 && order_viol == 0 && finite_pairs > 0;
    return {pass, fmt("400 cells: %d income violations, %d ordering violations "
                      "(%d finite pairs, %d beyond bracket cap)",
                      omega_viol, order_viol, finite_pairs, beyond_cap)};
}

// 4. Constant-share break point vs. an independent closed-form bisection.
Outcome constant_break_point() {
    const double m = 0.5, sigma = 5.0;
    const double rhs = ((sigma - 1.0 - m) / (sigma - 1.0 + m)) * ((sigma - m) / (sigma + m));
    auto h = [&](double tau) { return std::pow(tau, 1.0 - sigma) - rhs; };
    double lo = 1.0, hi = 10.0;  // h(1) = 1 - rhs > 0, h(10) < 0
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (h(mid) > 0.0 ? lo : hi) = mid;
    }
    double oracle = 0.5 * (lo + hi);
    auto nested = break_point(2.0, sigma, ShareSchedule::constant(m));
    double rel = std::abs(nested.value - oracle) / oracle;
    bool pass = std::abs(oracle - 1.1196) <= kBreakAbsTol &&
                !nested.is_everywhere() && rel <= kBreakNestedRel;
    return {pass, fmt("oracle %.10f, solver %.10f, rel diff %.3g", oracle,
                      nested.value, rel)};
}

// 5. classify() vs. adjustment-dynamics limits from both sides of 1/2.
Outcome oracle_agreement() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(505);
    std::uniform_real_distribution<double> usig(1.65, 1.85);
    std::uniform_real_distribution<double> lna(std::log(0.3), std::log(0.9));
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    TatonnementOptions opt;
    opt.dt = 0.05;
    opt.horizon = 400000;
    opt.record_path = false;

    EconomyParams p;
    int counts[3] = {0, 0, 0};
    int disagreements = 0;
    std::string first_bad;
    for (int i = 0; i < 100; ++i) {
        int region = i % 3;
        double alpha = 0.0, sigma = 0.0, tau = 0.0;
        bool found = false;
        for (int tries = 0; tries < 200 && !found; ++tries) {
            sigma = usig(rng);
            alpha = std::exp(lna(rng));
            CriticalPoints cp;
            try {
                cp = critical_points(alpha, sigma, kLowSigmaLogistic);
            } catch (const BracketFailure&) {
                continue;
            }
            if (cp.tau_break.is_everywhere() || cp.tau_sustain.is_everywhere()) continue;
            double t0c = cp.tau_break.value, t1c = cp.tau_sustain.value;
            // sample at least 8-10% away from both thresholds so the
            // dynamics are not critically slowed down
            if (region == 2) {  // core-periphery only: tau below break
                double hiT = 0.90 * t0c;
                if (hiT < 1.03) continue;
                tau = 1.03 + (hiT - 1.03) * u01(rng);
            } else if (region == 1) {  // bistable band
                double loT = 1.10 * t0c, hiT = 0.90 * t1c;
                if (loT >= hiT) continue;
                tau = loT + (hiT - loT) * u01(rng);
            } else {  // symmetric only: tau above sustain
                tau = t1c * (1.08 + 0.5 * u01(rng));
            }
            found = true;
        }
        if (!found) {
            ++disagreements;
            first_bad = "sampler exhausted";
            break;
        }

        StableConfig cls = classify(alpha, sigma, tau, kLowSigmaLogistic).config;
        ++counts[rank(cls)];
        p.alpha = alpha;
        p.sigma = sigma;
        p.tau = tau;
        auto lo = tatonnement(0.45, p, kLowSigmaLogistic, opt);
        auto hi = tatonnement(0.55, p, kLowSigmaLogistic, opt);

        auto near_half = [](double l) { return std::abs(l - 0.5) <= 1e-3; };
        bool ok = lo.converged && hi.converged;
        if (ok) {
            switch (cls) {
                case StableConfig::SymmetricOnly:
                    ok = near_half(lo.limit_lambda) && near_half(hi.limit_lambda);
                    break;
                case StableConfig::CorePeripheryOnly:
                    ok = lo.limit_lambda <= 1e-6 && hi.limit_lambda >= 1.0 - 1e-6;
                    break;
                case StableConfig::Bistable:
                    ok = (near_half(lo.limit_lambda) || lo.limit_lambda <= 1e-6) &&
                         (near_half(hi.limit_lambda) || hi.limit_lambda >= 1.0 - 1e-6);
                    break;
            }
        }
        if (!ok) {
            ++disagreements;
            if (first_bad.empty())
                first_bad = fmt("alpha=%.4f sigma=%.3f tau=%.4f class=%s limits=(%.6f,%.6f)",
                                alpha, sigma, tau, to_string(cls).c_str(),
                                lo.limit_lambda, hi.limit_lambda);
        }
    }
    double sec = now_minus(t0);
    bool pass = disagreements == 0 && counts[0] > 0 && counts[1] > 0 &&
                counts[2] > 0 && sec < kOracleBudgetSec;
    std::string detail = fmt("100 points (%d sym / %d bistable / %d cp), %d disagreements, %.1f s",
                             counts[0], counts[1], counts[2], disagreements, sec);
    if (!first_bad.empty()) detail += "; first: " + first_bad;
    return {pass, detail};
}

// 6. Black hole: agglomeration wins at every trade cost.
Outcome black_hole() {
    const ShareSchedule S = ShareSchedule::logistic(0.2, 0.95, 1.0, 1.0);
    const double alpha = 20.0, sigma = 1.5;
    auto aut = solve_symmetric_real_income(alpha, sigma,
                                           std::numeric_limits<double>::infinity(), S);
    bool floor_ok = aut.m_B > 0.5;  // autarky share above sigma - 1
    bool bp = break_point(alpha, sigma, S).is_everywhere();
    bool sp = sustain_point(alpha, sigma, S).is_everywhere();

    EconomyParams p;
    p.alpha = alpha;
    p.sigma = sigma;
    p.tau = 1e6;
    TatonnementOptions opt;
    opt.dt = 0.05;
    opt.horizon = 400000;
    opt.record_path = false;
    auto res = tatonnement(0.55, p, S, opt);
    bool agglomerated = res.converged && res.limit_lambda >= 1.0 - 1e-6;
    bool pass = floor_ok && bp && sp && agglomerated;
    return {pass, fmt("m_B(inf) = %.4f, break %s, sustain %s, limit at tau=1e6: %.6f",
                      aut.m_B, bp ? "everywhere" : "finite",
                      sp ? "everywhere" : "finite", res.limit_lambda)};
}

// 7. Hat-algebra stability elasticity: limits, closed form vs. linear solve,
//    and the homothetic zero-crossing mapping back to the break point.
Outcome stability_extension() {
    double worst_limit = 0.0;
    for (double m : linspace(0.1, 0.9, 9))
        for (double sigma : {1.5, 2.0, 3.0, 5.0, 8.0})
            for (double eta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                double e = eta * (sigma - 1.0);
                double at0 = stability_elasticity(m, sigma, eta, 0.0);
                double at1 = stability_elasticity(m, sigma, eta, 1.0);
                worst_limit = std::max(worst_limit, std::abs(at0 + e / (1.0 + e)));
                worst_limit =
                    std::max(worst_limit, std::abs(at1 - (m / (sigma - 1.0) - 1.0)));
            }

    std::mt19937 rng(707);
    std::uniform_real_distribution<double> um(0.05, 0.95);
    std::uniform_real_distribution<double> us(1.2, 8.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_pair = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double m = um(rng), sigma = us(rng), eta = u01(rng), Z = u01(rng);
        double a = stability_elasticity(m, sigma, eta, Z);
        double b = elasticity_via_linear_system(m, sigma, eta, Z);
        worst_pair = std::max(worst_pair, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }

    double worst_map = 0.0;
    for (auto [m, sigma] : std::vector<std::pair<double, double>>{
             {0.5, 5.0}, {0.3, 3.0}, {0.4, 2.5}, {0.6, 4.0}}) {
        double Zs = m * (2.0 * sigma - 1.0) / (sigma * sigma - sigma + m * m);
        double phi = (1.0 - Zs) / (1.0 + Zs);
        double tau = std::pow(phi, 1.0 / (1.0 - sigma));
        double bp = break_point(2.0, sigma, ShareSchedule::constant(m)).value;
        worst_map = std::max(worst_map, std::abs(tau - bp) / bp);
    }
    bool pass = worst_limit <= kLimitTol && worst_pair <= kClosedVsLinearTol &&
                worst_map <= kEtaZeroMapRel;
    return {pass, fmt("limits %.3g, closed-vs-linear %.3g over 1e4 draws, "
                      "zero-crossing map %.3g", worst_limit, worst_pair, worst_map)};
}

// 8. Structural change is monotone in productivity; the expenditure share
//    jumps up when the economy tips into the core-periphery configuration.
Outcome structural_monotonicity() {
    auto recs = growth_trajectory(linspace(0.2, 5.0, 50), 1.7, 4.5, kLowSigmaLogistic,
                                  SelectionRule::AlwaysSymmetric);
    int viol = 0;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        if (!(recs[i].Y > recs[i - 1].Y)) ++viol;
        if (!(recs[i].m_tilde > recs[i - 1].m_tilde)) ++viol;
        if (!(recs[i].pi_tilde > recs[i - 1].pi_tilde)) ++viol;
        if (!(recs[i].L_M > recs[i - 1].L_M)) ++viol;
    }

    auto hyst = growth_trajectory(linspace(0.2, 3.0, 50), 1.7, 4.5, kLowSigmaLogistic,
                                  SelectionRule::Hysteresis);
    std::size_t jump = hyst.size();
    for (std::size_t i = 0; i < hyst.size(); ++i)
        if (hyst[i].lambda_selected == 1.0) {
            jump = i;
            break;
        }
    bool jumped = jump > 0 && jump < hyst.size();
    bool m_jump = jumped && hyst[jump].m > hyst[jump - 1].m;
    bool pass = viol == 0 && jumped && m_jump;
    std::string detail = fmt("%d monotonicity violations over 50 steps", viol);
    if (jumped)
        detail += fmt("; share jump %.4f -> %.4f at alpha = %.3f", hyst[jump - 1].m,
                      hyst[jump].m, hyst[jump].alpha);
    else
        detail += "; no symmetric->core transition found";
    return {pass, detail};
}

// 9. Desk-scale phase map: three-region topology with a black-hole band, and
//    the rising-productivity trajectory walking through the regimes in order.
Outcome phase_map() {
    auto t0 = std::chrono::steady_clock::now();
    const int N = 100;
    auto alphas = logspace(0.1, 10.0, N);
    auto taus = linspace(1.05, 6.0, N);
    auto cells = phase_grid(alphas, 1.7, taus, kLowSigmaLogistic, 8);
    if (cells.size() != std::size_t(N) * N) return {false, "wrong cell count"};

    double a_inf = 0.0;
    {
        auto th = alpha_threshold_break(1.7, kLowSigmaLogistic);
        if (th.kind != AlphaThreshold::Kind::Finite)
            return {false, "expected a finite autarky-share threshold"};
        a_inf = th.value;
    }

    int present[3] = {0, 0, 0};
    int not_ok = 0, bh_viol = 0, order_viol = 0;
    for (const auto& c : cells) {
        if (!c.ok) {
            ++not_ok;
            continue;
        }
        ++present[rank(c.cls.config)];
        if (c.cls.black_hole != (c.alpha > a_inf)) ++bh_viol;
    }
    // along rising trade cost the regime can only move away from agglomeration
    for (int i = 0; i < N; ++i)
        for (int j = 1; j < N; ++j) {
            const auto& prev = cells[i * N + j - 1];
            const auto& cur = cells[i * N + j];
            if (prev.ok && cur.ok && rank(cur.cls.config) > rank(prev.cls.config))
                ++order_viol;
        }

    // row-level thresholds are nondecreasing in productivity; once a
    // threshold degenerates to "everywhere" it stays there
    int thr_viol = 0;
    auto scan = [&](auto kind_of, auto value_of) {
        double last = 0.0;
        bool saw_everywhere = false, saw_error = false;
        for (int i = 0; i < N; ++i) {
            const auto& c = cells[i * N];
            switch (kind_of(c)) {
                case PhaseCell::Col::Finite:
                    if (saw_everywhere || saw_error || value_of(c) < last * (1.0 - 1e-9))
                        ++thr_viol;
                    last = value_of(c);
                    break;
                case PhaseCell::Col::Error:
                    if (saw_everywhere) ++thr_viol;
                    saw_error = true;
                    break;
                case PhaseCell::Col::Everywhere:
                    saw_everywhere = true;
                    break;
            }
        }
    };
    scan([](const PhaseCell& c) { return c.tau0_kind; },
         [](const PhaseCell& c) { return c.tau0; });
    scan([](const PhaseCell& c) { return c.tau1_kind; },
         [](const PhaseCell& c) { return c.tau1; });

    // regime sequence along rising productivity at fixed trade cost
    auto traj = growth_trajectory(linspace(0.2, 3.0, 60), 1.7, 4.5, kLowSigmaLogistic,
                                  SelectionRule::Hysteresis);
    int seen[3] = {0, 0, 0};
    int seq_viol = (traj.front().config == StableConfig::SymmetricOnly) ? 0 : 1;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        ++seen[rank(traj[i].config)];
        if (i > 0 && rank(traj[i].config) < rank(traj[i - 1].config)) ++seq_viol;
    }
    bool traj_ok = seq_viol == 0 && seen[0] > 0 && seen[1] > 0 && seen[2] > 0;

    double sec = now_minus(t0);
    bool pass = not_ok == 0 && present[0] > 0 && present[1] > 0 && present[2] > 0 &&
                bh_viol == 0 && order_viol == 0 && thr_viol == 0 && traj_ok &&
                sec < kPhaseBudgetSec;
    return {pass, fmt("10000 cells (%d sym / %d bistable / %d cp), %d black-hole "
                      "violations, %d regime-order violations, %d threshold "
                      "violations, regime sequence %s, %.1f s",
                      present[0], present[1], present[2], bh_viol, order_viol,
                      thr_viol, traj_ok ? "ok" : "broken", sec)};
}

}  // namespace

int main() {
    struct Row {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const Row rows[] = {
        {1, "duality", duality_suite},
        {2, "sustain identity", sustain_identity},
        {3, "income and threshold ordering", threshold_ordering},
        {4, "constant-share break point", constant_break_point},
        {5, "classification vs dynamics", oracle_agreement},
        {6, "black hole", black_hole},
        {7, "stability elasticity extension", stability_extension},
        {8, "structural monotonicity", structural_monotonicity},
        {9, "phase map and trajectory", phase_map},
    };
    int failures = 0;
    for (const Row& r : rows) {
        Outcome o;
        try {
            o = r.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("unexpected exception: ") + e.what()};
        }
        std::printf("criterion %d (%s): %s (%s)\n", r.id, r.name,
                    o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
