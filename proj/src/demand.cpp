#include "hcdgeo/demand.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "hcdgeo/errors.hpp"
#include "hcdgeo/rootfind.hpp"

namespace hcdgeo {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

// -sum_i omega_i(u) ln(omega_i(u)/omega(u)) = omega ln omega - omega_A ln omega_A.
// Nonnegative (it is a scaled entropy of the weight shares).
double weight_entropy(const WeightSchedule& ws, double u) {
    double wA = ws.omega_A(u);
    double w = 1.0 + wA;
    double t = w * std::log(w);
    if (wA > 0.0) t -= wA * std::log(wA);
    return t;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                  static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace

// --- WeightSchedule ------------------------------------------------------------

double WeightSchedule::omega_A(double u) const {
    if (b == 0.0 || eps_u == 0.0) return a + b;
    return a + b * std::pow(u, -eps_u);
}

double WeightSchedule::share_floor() const {
    const double total = 1.0 + a + b;
    if (b == 0.0 || eps_u == 0.0) return std::min(a + b, 1.0) / total;
    return std::min(a, 1.0) / total;
}

void WeightSchedule::validate() const {
    if (!finite_nonneg(a)) throw DomainError("weight schedule: a must be finite and >= 0");
    if (!finite_nonneg(b)) throw DomainError("weight schedule: b must be finite and >= 0");
    if (!finite_nonneg(eps_u))
        throw DomainError("weight schedule: eps_u must be finite and >= 0");
}

void DemandConfig::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("demand config: gamma must be finite and > 0");
    if (!(s_lower > 0.0) || !(s_lower < 1.0))
        throw DomainError("demand config: s_lower must lie in (0,1)");
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || !std::isfinite(omega_hi))
        throw DomainError("demand config: need 0 < omega_lo < omega_hi < inf");
    if (grid_points < 3) throw DomainError("demand config: grid_points must be >= 3");
}

// --- ShareSchedule -------------------------------------------------------------

ShareSchedule ShareSchedule::constant(double m0) {
    if (!(m0 > 0.0) || !(m0 <= 1.0))
        throw DomainError("share schedule: constant share must lie in (0,1]");
    return ShareSchedule{Constant{m0}};
}

ShareSchedule ShareSchedule::logistic(double m_min, double m_max, double kappa,
                                      double eps_m) {
    if (!finite_nonneg(m_min) || !(m_max <= 1.0) || !(m_min <= m_max))
        throw DomainError("share schedule: need 0 <= m_min <= m_max <= 1");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw DomainError("share schedule: kappa must be finite and > 0");
    if (!finite_nonneg(eps_m))
        throw DomainError("share schedule: eps_m must be finite and >= 0");
    return ShareSchedule{DirectLogistic{m_min, m_max, kappa, eps_m}};
}

ShareSchedule ShareSchedule::composed_hcd(const WeightSchedule& ws, double gamma) {
    ws.validate();
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("share schedule: gamma must be finite and > 0");
    return ShareSchedule{ComposedHCD{ws, gamma}};
}

double ShareSchedule::operator()(double Omega) const {
    if (const auto* c = std::get_if<Constant>(&kind_)) {
        (void)Omega;
        return c->m0;
    }
    if (const auto* l = std::get_if<DirectLogistic>(&kind_)) {
        if (!(Omega > 0.0)) throw DomainError("share schedule: real income must be > 0");
        // m_min + span/(1 + kappa*Omega^-eps): stable at both ends (0 -> m_min,
        // inf -> m_max) without inf/inf.
        double d = 1.0 + l->kappa * std::pow(Omega, -l->eps_m);
        return l->m_min + (l->m_max - l->m_min) / d;
    }
    const auto& h = std::get<ComposedHCD>(kind_);
    double u = u_of_real_income(Omega, h.ws, h.gamma);
    return 1.0 / h.ws.omega(u);
}

double ShareSchedule::log_elasticity(double Omega) const {
    if (is_constant()) return 0.0;
    const double h = 1e-6;  // centered step in ln(Omega)
    double m_hi = (*this)(Omega * std::exp(h));
    double m_lo = (*this)(Omega * std::exp(-h));
    if (!(m_hi > 0.0) || !(m_lo > 0.0))
        throw DomainError("share schedule: log elasticity undefined where m = 0");
    return (std::log(m_hi) - std::log(m_lo)) / (2.0 * h);
}

double ShareSchedule::sup_share() const {
    if (const auto* c = std::get_if<Constant>(&kind_)) return c->m0;
    if (const auto* l = std::get_if<DirectLogistic>(&kind_)) {
        if (l->eps_m == 0.0)
            return l->m_min + (l->m_max - l->m_min) / (1.0 + l->kappa);
        return l->m_max;
    }
    const auto& h = std::get<ComposedHCD>(kind_);
    if (h.ws.b == 0.0 || h.ws.eps_u == 0.0) return 1.0 / (1.0 + h.ws.a + h.ws.b);
    return 1.0 / (1.0 + h.ws.a);
}

double ShareSchedule::min_domain() const {
    const auto* h = std::get_if<ComposedHCD>(&kind_);
    return h ? h->gamma : 0.0;
}

bool ShareSchedule::is_constant() const {
    if (std::holds_alternative<Constant>(kind_)) return true;
    if (const auto* l = std::get_if<DirectLogistic>(&kind_))
        return l->eps_m == 0.0 || l->m_min == l->m_max;
    const auto& h = std::get<ComposedHCD>(kind_);
    return h.ws.b == 0.0 || h.ws.eps_u == 0.0;
}

std::string ShareSchedule::describe() const {
    std::ostringstream os;
    os << std::setprecision(17);
    if (const auto* c = std::get_if<Constant>(&kind_)) {
        os << "constant(m0=" << c->m0 << ")";
    } else if (const auto* l = std::get_if<DirectLogistic>(&kind_)) {
        os << "logistic(m_min=" << l->m_min << ", m_max=" << l->m_max
           << ", kappa=" << l->kappa << ", eps_m=" << l->eps_m << ")";
    } else {
        const auto& h = std::get<ComposedHCD>(kind_);
        os << "hcd(a=" << h.ws.a << ", b=" << h.ws.b << ", eps_u=" << h.ws.eps_u
           << ", gamma=" << h.gamma << ")";
    }
    return os.str();
}

// --- preference operations -----------------------------------------------------

double utility_from_consumption(double C_A, double C_M, const WeightSchedule& ws,
                                double gamma) {
    ws.validate();
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("utility_from_consumption: gamma must be finite and > 0");
    if (!(C_A > gamma) || !(C_M > gamma))
        throw DomainError(
            "utility_from_consumption: consumption must exceed the subsistence "
            "quantity in both goods");
    const double lnA = std::log(C_A / gamma);
    const double lnM = std::log(C_M / gamma);
    auto F = [&](double x) {  // x = ln u
        double u = std::exp(x);
        return ws.omega_A(u) * lnA + lnM + weight_entropy(ws, u);
    };
    auto g = [&](double x) { return F(x) - x; };
    double g0 = g(0.0);  // > 0: both goods strictly above subsistence
    double hi = std::max(1.0, 2.0 * g0);
    if (!expand_bracket_up(g, g0, hi, 1e6))
        throw BracketFailure("utility_from_consumption: no upper bracket for ln u");
    double x = damped_fixed_point(F, std::min(g0, hi), 0.0, hi);
    return std::exp(x);
}

double indirect_utility(double P_A, double P_M, double y, const WeightSchedule& ws,
                        double gamma) {
    ws.validate();
    if (!(P_A > 0.0) || !(P_M > 0.0))
        throw DomainError("indirect_utility: prices must be > 0");
    if (!(y > 0.0) || !(gamma > 0.0))
        throw DomainError("indirect_utility: income and gamma must be > 0");
    if (!(y * ws.share_floor() > gamma * std::max(P_A, P_M)))
        throw DomainError(
            "indirect_utility: income below the subsistence bound "
            "y * share_floor > gamma * max(P)");
    const double qA = std::log(y / (gamma * P_A));  // > 0 under the bound above
    const double qM = std::log(y / (gamma * P_M));  // > 0 likewise
    auto F = [&](double x) { return ws.omega_A(std::exp(x)) * qA + qM; };
    // F is nonincreasing in x with F(0) > 0, so ln v lies in [0, F(0) + 1].
    double f0 = F(0.0);
    double x = damped_fixed_point(F, f0, 0.0, f0 + 1.0);
    return std::exp(x);
}

double expenditure(double u, double P_A, double P_M, const WeightSchedule& ws,
                   double gamma) {
    ws.validate();
    if (!(u >= 1.0) || !std::isfinite(u))
        throw DomainError("expenditure: utility level must be finite and >= 1");
    if (!(P_A > 0.0) || !(P_M > 0.0))
        throw DomainError("expenditure: prices must be > 0");
    if (!(gamma > 0.0)) throw DomainError("expenditure: gamma must be > 0");
    double m = 1.0 / ws.omega(u);
    double lnOmega = std::log(gamma) + std::log(u) / ws.omega(u);
    return std::exp(lnOmega + m * std::log(P_M) + (1.0 - m) * std::log(P_A));
}

double real_income_of_u(double u, const WeightSchedule& ws, double gamma) {
    ws.validate();
    if (!(u >= 1.0) || !std::isfinite(u))
        throw DomainError("real_income_of_u: utility level must be finite and >= 1");
    if (!(gamma > 0.0)) throw DomainError("real_income_of_u: gamma must be > 0");
    return std::exp(std::log(gamma) + std::log(u) / ws.omega(u));
}

double u_of_real_income(double Omega, const WeightSchedule& ws, double gamma) {
    ws.validate();
    if (!(gamma > 0.0)) throw DomainError("u_of_real_income: gamma must be > 0");
    if (!(Omega > gamma))
        throw DomainError("u_of_real_income: real income must exceed gamma");
    const double target = std::log(Omega) - std::log(gamma);  // = ln u / omega(u)
    auto h = [&](double x) { return x / ws.omega(std::exp(x)) - target; };
    // ln u / omega is increasing and the root is at most omega_max * target.
    double hi = std::max(1.0, 1.01 * target * (1.0 + ws.a + ws.b));
    double x = bisect_root(h, 0.0, hi);
    return std::exp(x);
}

double share_of_real_income(double Omega, const ShareSchedule& ss) { return ss(Omega); }

// --- assumption validation ------------------------------------------------------

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.check_id == id) return &c;
    return nullptr;
}

ValidationReport validate_assumptions(const WeightSchedule& ws, const ShareSchedule& ss,
                                      const DemandConfig& cfg, double sigma, double tau) {
    ws.validate();
    cfg.validate();
    if (!(sigma > 1.0) || !std::isfinite(sigma))
        throw DomainError("validate_assumptions: sigma must be finite and > 1");
    if (!(tau >= 1.0)) throw DomainError("validate_assumptions: tau must be >= 1");

    const std::size_t n = cfg.grid_points;
    // Weight checks scan utility levels; share checks scan real income. The
    // u-range is fixed wide (the weights saturate), the Omega-range comes from
    // the config, clamped above the schedule's domain edge.
    std::vector<double> ugrid = log_grid(1.0, 1e9, n);
    double olo = std::max(cfg.omega_lo, ss.min_domain() * 1.01);
    if (!(olo < cfg.omega_hi))
        throw DomainError("validate_assumptions: real-income grid is empty after "
                          "clamping to the schedule's domain");
    std::vector<double> ogrid = log_grid(olo, cfg.omega_hi, n);

    ValidationReport rep;

    {  // A1-i: both weight shares stay above the assumed floor
        ValidationCheck c{"A1-i", false, ugrid.front(),
                          std::numeric_limits<double>::infinity(), cfg.s_lower};
        for (double u : ugrid) {
            double w = ws.omega(u);
            double s = std::min(ws.omega_A(u) / w, 1.0 / w);
            if (s < c.worst_value) {
                c.worst_value = s;
                c.worst_point = u;
            }
        }
        c.passed = c.worst_value >= cfg.s_lower;
        rep.checks.push_back(c);
    }

    {  // A1-ii: the agriculture weight never increases with utility
        ValidationCheck c{"A1-ii", false, ugrid.front(),
                          -std::numeric_limits<double>::infinity(), 0.0};
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double d = ws.omega_A(ugrid[k + 1]) - ws.omega_A(ugrid[k]);
            if (d > c.worst_value) {
                c.worst_value = d;
                c.worst_point = ugrid[k];
            }
        }
        c.passed = c.worst_value <= 1e-12;
        rep.checks.push_back(c);
    }

    {  // A5: the manufacturing share never decreases with real income
        ValidationCheck c{"A5", false, ogrid.front(),
                          std::numeric_limits<double>::infinity(), 0.0};
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double d = ss(ogrid[k + 1]) - ss(ogrid[k]);
            if (d < c.worst_value) {
                c.worst_value = d;
                c.worst_point = ogrid[k];
            }
        }
        c.passed = c.worst_value >= -1e-12;
        rep.checks.push_back(c);
    }

    {  // A6: income effects bounded by sigma - 1
        ValidationCheck c{"A6", false, ogrid.front(),
                          -std::numeric_limits<double>::infinity(), sigma - 1.0};
        for (double o : ogrid) {
            double e = ss.log_elasticity(o);
            if (e > c.worst_value) {
                c.worst_value = e;
                c.worst_point = o;
            }
        }
        c.passed = c.worst_value < sigma - 1.0;
        rep.checks.push_back(c);
    }

    {  // L4: gamma*sigma*tau/s_lower < 1 (sufficient subsistence bound)
        ValidationCheck c{"L4", false, 0.0, cfg.gamma * sigma * tau / cfg.s_lower, 1.0};
        c.passed = c.worst_value < 1.0;
        rep.checks.push_back(c);
    }

    return rep;
}

}  // namespace hcdgeo
