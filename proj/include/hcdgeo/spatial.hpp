#pragma once

#include <string>
#include <vector>

#include "hcdgeo/demand.hpp"
#include "hcdgeo/short_run.hpp"

namespace hcdgeo {

// A critical trade cost is either a finite root or "everywhere" (the
// corresponding configuration property holds at every tau >= 1). Everywhere is
// an explicit variant, never a sentinel float.
struct CriticalTau {
    enum class Kind { Finite, Everywhere } kind = Kind::Finite;
    double value = 0.0;  // meaningful only when kind == Finite

    static CriticalTau finite(double v) { return {Kind::Finite, v}; }
    static CriticalTau everywhere() { return {Kind::Everywhere, 0.0}; }
    bool is_everywhere() const { return kind == Kind::Everywhere; }
};

struct CriticalPoints {
    CriticalTau tau_break;    // symmetric equilibrium unstable on [1, tau_break]
    CriticalTau tau_sustain;  // core-periphery sustainable on [1, tau_sustain]
};

// Productivity thresholds in alpha. NotDefined: sigma > 2 or the schedule's
// share supremum never reaches sigma-1. EverywhereAllAlpha: the condition
// holds at every alpha (constant schedule with m0 > sigma-1).
struct AlphaThreshold {
    enum class Kind { Finite, NotDefined, EverywhereAllAlpha } kind = Kind::NotDefined;
    double value = 0.0;

    static AlphaThreshold finite(double v) { return {Kind::Finite, v}; }
    static AlphaThreshold not_defined() { return {Kind::NotDefined, 0.0}; }
    static AlphaThreshold everywhere_all_alpha() { return {Kind::EverywhereAllAlpha, 0.0}; }
};

struct Thresholds {
    AlphaThreshold alpha_1;    // core share reaches sigma-1 at tau = 1
    AlphaThreshold alpha_inf;  // symmetric share reaches sigma-1 at tau = infinity
};

enum class StableConfig { SymmetricOnly, Bistable, CorePeripheryOnly };

struct EquilibriumClass {
    StableConfig config = StableConfig::SymmetricOnly;
    bool black_hole = false;  // core-periphery is the unique stable outcome at every tau
};

std::string to_string(StableConfig c);

// Which expenditure share enters the shadow-earnings bracket for a deviator
// moving to the empty region: the core's share (a measure-zero move leaves the
// core's real income unchanged) or the literal periphery share (then earnings
// and periphery real income are solved jointly).
enum class PeripheryShareForm { DerivedCoreShare, PrintedPeripheryShare };

struct CoreSolution {
    double Omega_C = 0.0;
    double m_C = 0.0;
};

// Unique fixed point Omega_C = alpha / (sigma - m(Omega_C)).
CoreSolution solve_core_real_income(double alpha, double sigma, const ShareSchedule& ss);

struct PeripheryShadow {
    double pi_s = 0.0;     // shadow earnings of a deviator in the empty region
    double Omega_s = 0.0;  // the deviator's real earnings
};

PeripheryShadow periphery_shadow(double alpha, double sigma, double tau, double Omega_C,
                                 const ShareSchedule& ss,
                                 PeripheryShareForm form = PeripheryShareForm::DerivedCoreShare);

// f(tau) = 1 - (2 sigma/(sigma-m_C)) tau^(m_C+1-sigma)
//            + ((sigma+m_C)/(sigma-m_C)) tau^(2(1-sigma)).
// f(1) = 0 always; core-periphery sustainable iff f <= 0 (Omega_s <= Omega_C).
double sustain_function(double tau, double m_C, double sigma);

// Largest tau at which full agglomeration is an equilibrium: the unique root
// of f beyond tau = 1, or Everywhere when m_C >= sigma-1. Bracket expansion is
// capped at tau = 1e8 and throws BracketFailure beyond it.
CriticalTau sustain_point(double alpha, double sigma, const ShareSchedule& ss);

struct SymmetricSolution {
    double Omega_B = 0.0;
    double m_B = 0.0;
};

// Unique fixed point of
//   ln Omega = ln(alpha/(sigma - m(Omega))) - (m(Omega)/(sigma-1)) ln(2/(1+tau^(1-sigma))).
// tau may be +infinity (the penalty term becomes ln 2).
SymmetricSolution solve_symmetric_real_income(double alpha, double sigma, double tau,
                                              const ShareSchedule& ss);

// Largest tau at which the symmetric equilibrium is unstable: solves
//   tau^(1-sigma) = ((sigma-1-m)/(sigma-1+m)) * ((sigma-m)/(sigma+m))
// with m = m_B(alpha, sigma, tau) re-solved at each trial tau, or Everywhere
// when m_B(alpha, sigma, inf) >= sigma-1.
CriticalTau break_point(double alpha, double sigma, const ShareSchedule& ss);

// Productivity thresholds (defined for sigma in (1,2] and share sup > sigma-1).
AlphaThreshold alpha_threshold_sustain(double sigma, const ShareSchedule& ss);
AlphaThreshold alpha_threshold_break(double sigma, const ShareSchedule& ss);

// Pointwise stability tests. These evaluate the defining inequalities at the
// given tau directly (no root search), so they stay well-defined even where
// the critical tau is beyond the bracket cap; ties (tau exactly critical) are
// unstable / sustainable respectively.
bool symmetric_unstable_at(double alpha, double sigma, double tau, const ShareSchedule& ss);
bool core_sustainable_at(double alpha, double sigma, double tau, const ShareSchedule& ss);

// Stable-configuration classification:
//   CorePeripheryOnly iff symmetric unstable at tau (tau <= tau0, incl. black hole),
//   SymmetricOnly     iff core not sustainable at tau (tau > tau1),
//   Bistable          otherwise.
EquilibriumClass classify(double alpha, double sigma, double tau, const ShareSchedule& ss);

// Root-based bundle (cmd_critical); may throw BracketFailure near thresholds.
CriticalPoints critical_points(double alpha, double sigma, const ShareSchedule& ss);

// --- phase sweep ---------------------------------------------------------

// One (alpha, tau) cell of a phase diagram. The class is computed pointwise;
// the critical-tau columns are best-effort roots: Finite, Everywhere, or Error
// when the root search failed (e.g. bracket cap) while the class itself is
// still valid. ok == false marks a cell whose classification itself failed.
struct PhaseCell {
    double alpha = 0.0, sigma = 0.0, tau = 0.0;
    bool ok = false;
    EquilibriumClass cls;
    enum class Col { Finite, Everywhere, Error };
    Col tau0_kind = Col::Error;
    double tau0 = 0.0;
    Col tau1_kind = Col::Error;
    double tau1 = 0.0;
    double omega_B = 0.0, omega_C = 0.0, m_B = 0.0, m_C = 0.0;
    std::string error;  // message when !ok
};

// Evaluates the full grid (row-major in alpha then tau) on up to `threads`
// workers. Per-alpha quantities (core solution, critical taus, black hole)
// are computed once per alpha row. Solver failures are recorded in the cell
// and do not abort the sweep.
std::vector<PhaseCell> phase_grid(const std::vector<double>& alphas, double sigma,
                                  const std::vector<double>& taus, const ShareSchedule& ss,
                                  unsigned threads);

}  // namespace hcdgeo
