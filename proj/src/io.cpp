#include "hcdgeo/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hcdgeo/errors.hpp"

namespace hcdgeo {

using nlohmann::json;

std::string fmt_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double GridSpec::scalar() const {
    if (values.size() != 1)
        throw ConfigError("expected a single value for this axis, got a grid");
    return values.front();
}

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError("config: " + where + " must be a number");
    return j.get<double>();
}

double get_num(const json& j, const char* key, double dflt, const std::string& where) {
    if (!j.contains(key)) return dflt;
    return as_number(j.at(key), where + "." + key);
}

std::size_t get_count(const json& j, const char* key, std::size_t dflt,
                      const std::string& where) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ConfigError("config: " + where + "." + key + " must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

bool get_bool(const json& j, const char* key, bool dflt, const std::string& where) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_boolean())
        throw ConfigError("config: " + where + "." + key + " must be a boolean");
    return v.get<bool>();
}

GridSpec parse_grid(const json& j, const std::string& where) {
    GridSpec g;
    if (j.is_number()) {
        g.values = {j.get<double>()};
        g.is_scalar = true;
        return g;
    }
    if (j.is_array()) {
        if (j.empty()) throw ConfigError("config: " + where + " grid is empty");
        for (const auto& v : j) g.values.push_back(as_number(v, where + " entry"));
        for (std::size_t k = 0; k + 1 < g.values.size(); ++k)
            if (!(g.values[k] < g.values[k + 1]))
                throw ConfigError("config: " + where + " grid must be strictly ascending");
        g.is_scalar = g.values.size() == 1;
        return g;
    }
    if (j.is_object()) {
        require_keys(j, {"min", "max", "count", "spacing"}, where);
        if (!j.contains("min") || !j.contains("max"))
            throw ConfigError("config: " + where + " range needs min and max");
        double lo = as_number(j.at("min"), where + ".min");
        double hi = as_number(j.at("max"), where + ".max");
        std::size_t n = get_count(j, "count", 2, where);
        std::string spacing = "linear";
        if (j.contains("spacing")) {
            if (!j.at("spacing").is_string())
                throw ConfigError("config: " + where + ".spacing must be a string");
            spacing = j.at("spacing").get<std::string>();
        }
        if (n == 1) {
            if (lo != hi)
                throw ConfigError("config: " + where + " count=1 requires min == max");
            g.values = {lo};
            g.is_scalar = true;
            return g;
        }
        if (!(lo < hi))
            throw ConfigError("config: " + where + " range needs min < max");
        g.values.resize(n);
        if (spacing == "linear") {
            for (std::size_t k = 0; k < n; ++k)
                g.values[k] = lo + (hi - lo) * static_cast<double>(k) /
                                       static_cast<double>(n - 1);
        } else if (spacing == "log") {
            if (!(lo > 0.0))
                throw ConfigError("config: " + where + " log spacing needs min > 0");
            double llo = std::log(lo), lhi = std::log(hi);
            for (std::size_t k = 0; k < n; ++k)
                g.values[k] = std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                                 static_cast<double>(n - 1));
        } else {
            throw ConfigError("config: " + where + ".spacing must be \"linear\" or \"log\"");
        }
        g.values.front() = lo;
        g.values.back() = hi;
        g.is_scalar = false;
        return g;
    }
    throw ConfigError("config: " + where + " must be a number, array, or range object");
}

WeightSchedule parse_weights(const json& j, const std::string& where) {
    require_keys(j, {"a", "b", "eps_u"}, where);
    WeightSchedule ws;
    ws.a = get_num(j, "a", ws.a, where);
    ws.b = get_num(j, "b", ws.b, where);
    ws.eps_u = get_num(j, "eps_u", ws.eps_u, where);
    return ws;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("config parse error: ") + ex.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    require_keys(j,
                 {"schedule", "weights", "demand", "alpha", "sigma", "tau", "lambda",
                  "lambda0", "tatonnement", "rule", "eta", "m_fixed", "skip_validation"},
                 "top level");

    RunConfig cfg;
    cfg.alpha.values = {1.0};
    cfg.tau.values = {1.5};
    cfg.lambda.values = {0.5};
    try {
        if (j.contains("demand")) {
            const json& d = j.at("demand");
            require_keys(d, {"gamma", "s_lower", "omega_lo", "omega_hi", "grid_points"},
                         "demand");
            cfg.demand.gamma = get_num(d, "gamma", cfg.demand.gamma, "demand");
            cfg.demand.s_lower = get_num(d, "s_lower", cfg.demand.s_lower, "demand");
            cfg.demand.omega_lo = get_num(d, "omega_lo", cfg.demand.omega_lo, "demand");
            cfg.demand.omega_hi = get_num(d, "omega_hi", cfg.demand.omega_hi, "demand");
            cfg.demand.grid_points =
                get_count(d, "grid_points", cfg.demand.grid_points, "demand");
            cfg.demand.validate();
        }
        if (j.contains("weights"))
            cfg.weights = parse_weights(j.at("weights"), "weights");
        if (j.contains("schedule")) {
            const json& s = j.at("schedule");
            if (!s.is_object() || !s.contains("kind") || !s.at("kind").is_string())
                throw ConfigError("config: schedule needs a string \"kind\"");
            std::string kind = s.at("kind").get<std::string>();
            if (kind == "constant") {
                require_keys(s, {"kind", "m0"}, "schedule");
                cfg.schedule = ShareSchedule::constant(get_num(s, "m0", 0.5, "schedule"));
            } else if (kind == "logistic") {
                require_keys(s, {"kind", "m_min", "m_max", "kappa", "eps_m"}, "schedule");
                cfg.schedule = ShareSchedule::logistic(
                    get_num(s, "m_min", 0.2, "schedule"),
                    get_num(s, "m_max", 0.95, "schedule"),
                    get_num(s, "kappa", 1.0, "schedule"),
                    get_num(s, "eps_m", 2.0, "schedule"));
            } else if (kind == "hcd") {
                require_keys(s, {"kind", "a", "b", "eps_u", "gamma"}, "schedule");
                WeightSchedule ws = parse_weights(
                    json{{"a", get_num(s, "a", 0.25, "schedule")},
                         {"b", get_num(s, "b", 1.0, "schedule")},
                         {"eps_u", get_num(s, "eps_u", 1.0, "schedule")}},
                    "schedule");
                double gamma = get_num(s, "gamma", cfg.demand.gamma, "schedule");
                cfg.schedule = ShareSchedule::composed_hcd(ws, gamma);
                if (!cfg.weights) cfg.weights = ws;
            } else {
                throw ConfigError("config: schedule.kind must be \"constant\", "
                                  "\"logistic\", or \"hcd\"");
            }
        }
        if (j.contains("alpha")) cfg.alpha = parse_grid(j.at("alpha"), "alpha");
        if (j.contains("tau")) cfg.tau = parse_grid(j.at("tau"), "tau");
        if (j.contains("lambda")) cfg.lambda = parse_grid(j.at("lambda"), "lambda");
        cfg.sigma = get_num(j, "sigma", cfg.sigma, "top level");
        cfg.lambda0 = get_num(j, "lambda0", cfg.lambda0, "top level");
        if (j.contains("tatonnement")) {
            const json& t = j.at("tatonnement");
            require_keys(t, {"dt", "horizon", "drift_tol", "absorb_tol", "record_path"},
                         "tatonnement");
            cfg.taton.dt = get_num(t, "dt", cfg.taton.dt, "tatonnement");
            cfg.taton.horizon = get_count(t, "horizon", cfg.taton.horizon, "tatonnement");
            cfg.taton.drift_tol =
                get_num(t, "drift_tol", cfg.taton.drift_tol, "tatonnement");
            cfg.taton.absorb_tol =
                get_num(t, "absorb_tol", cfg.taton.absorb_tol, "tatonnement");
            cfg.taton.record_path =
                get_bool(t, "record_path", cfg.taton.record_path, "tatonnement");
            if (!(cfg.taton.dt > 0.0) || !(cfg.taton.drift_tol > 0.0) ||
                !(cfg.taton.absorb_tol > 0.0))
                throw ConfigError("config: tatonnement tolerances and dt must be > 0");
        }
        if (j.contains("rule")) {
            if (!j.at("rule").is_string())
                throw ConfigError("config: rule must be a string");
            std::string r = j.at("rule").get<std::string>();
            if (r == "hysteresis")
                cfg.rule = SelectionRule::Hysteresis;
            else if (r == "always_symmetric")
                cfg.rule = SelectionRule::AlwaysSymmetric;
            else if (r == "always_cp_when_sustainable")
                cfg.rule = SelectionRule::AlwaysCPWhenSustainable;
            else
                throw ConfigError("config: rule must be \"hysteresis\", "
                                  "\"always_symmetric\", or \"always_cp_when_sustainable\"");
        }
        cfg.eta = get_num(j, "eta", cfg.eta, "top level");
        if (j.contains("m_fixed")) cfg.m_fixed = as_number(j.at("m_fixed"), "m_fixed");
        cfg.skip_validation = get_bool(j, "skip_validation", false, "top level");
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // Range checks shared by every command.
    if (!(cfg.sigma > 1.0) || !std::isfinite(cfg.sigma))
        throw ConfigError("config: sigma must be finite and > 1");
    for (double a : cfg.alpha.values)
        if (!(a > 0.0) || !std::isfinite(a))
            throw ConfigError("config: alpha values must be finite and > 0");
    for (double t : cfg.tau.values)
        if (!(t >= 1.0) || !std::isfinite(t))
            throw ConfigError("config: tau values must be finite and >= 1");
    for (double l : cfg.lambda.values)
        if (!(l >= 0.0) || !(l <= 1.0))
            throw ConfigError("config: lambda values must lie in [0,1]");
    if (!(cfg.lambda0 >= 0.0) || !(cfg.lambda0 <= 1.0))
        throw ConfigError("config: lambda0 must lie in [0,1]");
    if (!(cfg.eta >= 0.0) || !(cfg.eta <= 1.0))
        throw ConfigError("config: eta must lie in [0,1]");
    if (cfg.m_fixed && (!(*cfg.m_fixed > 0.0) || !(*cfg.m_fixed < 1.0)))
        throw ConfigError("config: m_fixed must lie in (0,1)");
    return cfg;
}

// --- serialization --------------------------------------------------------------

json to_json(const ValidationCheck& c) {
    return json{{"check_id", c.check_id},
                {"passed", c.passed},
                {"worst_point", c.worst_point},
                {"worst_value", c.worst_value},
                {"threshold", c.threshold}};
}

json to_json(const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return json{{"all_passed", r.all_passed()}, {"checks", checks}};
}

json to_json(const ShortRunSolution& s) {
    return json{{"lambda", s.lambda},
                {"pi", {s.pi[0], s.pi[1]}},
                {"P_M", {s.P_M[0], s.P_M[1]}},
                {"Omega", {s.Omega[0], s.Omega[1]}},
                {"m", {s.m[0], s.m[1]}},
                {"residual", s.residual},
                {"iterations", s.iterations}};
}

json to_json(const CriticalTau& t) {
    if (t.is_everywhere()) return json("everywhere");
    return json(t.value);
}

json to_json(const AlphaThreshold& t) {
    switch (t.kind) {
        case AlphaThreshold::Kind::Finite:
            return json(t.value);
        case AlphaThreshold::Kind::EverywhereAllAlpha:
            return json("everywhere");
        case AlphaThreshold::Kind::NotDefined:
            break;
    }
    return json("not_defined");
}

namespace {

std::string col_str(PhaseCell::Col kind, double value) {
    switch (kind) {
        case PhaseCell::Col::Finite:
            return fmt_g17(value);
        case PhaseCell::Col::Everywhere:
            return "everywhere";
        case PhaseCell::Col::Error:
            break;
    }
    return "ERROR";
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string phase_csv(const std::vector<PhaseCell>& cells) {
    std::string out = "alpha,sigma,tau,class,black_hole,tau0,tau1,omega_B,omega_C,m_B,m_C\n";
    for (const auto& c : cells) {
        out += fmt_g17(c.alpha);
        out += ',';
        out += fmt_g17(c.sigma);
        out += ',';
        out += fmt_g17(c.tau);
        out += ',';
        if (c.ok) {
            out += to_string(c.cls.config);
            out += ',';
            out += bool_str(c.cls.black_hole);
        } else {
            out += "ERROR,ERROR";
        }
        out += ',';
        out += col_str(c.tau0_kind, c.tau0);
        out += ',';
        out += col_str(c.tau1_kind, c.tau1);
        if (c.ok) {
            out += ',';
            out += fmt_g17(c.omega_B);
            out += ',';
            out += fmt_g17(c.omega_C);
            out += ',';
            out += fmt_g17(c.m_B);
            out += ',';
            out += fmt_g17(c.m_C);
        } else {
            out += ",ERROR,ERROR,ERROR,ERROR";
        }
        out += '\n';
    }
    return out;
}

std::string trajectory_csv(const std::vector<TrajectoryRecord>& recs) {
    std::string out = "alpha,class,black_hole,lambda,Omega,m,L_M,Y,m_tilde,pi_tilde\n";
    for (const auto& r : recs) {
        out += fmt_g17(r.alpha);
        out += ',';
        out += to_string(r.config);
        out += ',';
        out += bool_str(r.black_hole);
        out += ',';
        out += fmt_g17(r.lambda_selected);
        out += ',';
        out += fmt_g17(r.Omega);
        out += ',';
        out += fmt_g17(r.m);
        out += ',';
        out += fmt_g17(r.L_M);
        out += ',';
        out += fmt_g17(r.Y);
        out += ',';
        out += fmt_g17(r.m_tilde);
        out += ',';
        out += fmt_g17(r.pi_tilde);
        out += '\n';
    }
    return out;
}

std::string tatonnement_csv(const std::vector<TatonnementPoint>& path) {
    std::string out = "t,lambda,Omega1,Omega2\n";
    for (const auto& p : path) {
        out += fmt_g17(p.t);
        out += ',';
        out += fmt_g17(p.lambda);
        out += ',';
        out += fmt_g17(p.Omega1);
        out += ',';
        out += fmt_g17(p.Omega2);
        out += '\n';
    }
    return out;
}

std::string shortrun_csv(const std::vector<ShortRunSolution>& rows) {
    std::string out = "lambda,pi1,pi2,PM1,PM2,Omega1,Omega2,m1,m2,residual\n";
    for (const auto& s : rows) {
        out += fmt_g17(s.lambda);
        out += ',';
        out += fmt_g17(s.pi[0]);
        out += ',';
        out += fmt_g17(s.pi[1]);
        out += ',';
        out += fmt_g17(s.P_M[0]);
        out += ',';
        out += fmt_g17(s.P_M[1]);
        out += ',';
        out += fmt_g17(s.Omega[0]);
        out += ',';
        out += fmt_g17(s.Omega[1]);
        out += ',';
        out += fmt_g17(s.m[0]);
        out += ',';
        out += fmt_g17(s.m[1]);
        out += ',';
        out += fmt_g17(s.residual);
        out += '\n';
    }
    return out;
}

std::string stability_scan_csv(const std::vector<StabilityScanRow>& rows) {
    std::string out = "m,sigma,eta,tau,Z,elasticity,stable\n";
    for (const auto& r : rows) {
        out += fmt_g17(r.m);
        out += ',';
        out += fmt_g17(r.sigma);
        out += ',';
        out += fmt_g17(r.eta);
        out += ',';
        out += fmt_g17(r.tau);
        out += ',';
        out += fmt_g17(r.Z);
        out += ',';
        out += fmt_g17(r.elasticity);
        out += ',';
        out += bool_str(r.stable);
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory " +
                                     p.parent_path().string() + ": " + ec.message());
    }
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace hcdgeo
