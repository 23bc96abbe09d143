#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcdgeo/dynamics.hpp"
#include "hcdgeo/errors.hpp"
#include "hcdgeo/io.hpp"
#include "hcdgeo/spatial.hpp"
#include "hcdgeo/structures.hpp"

namespace {

using namespace hcdgeo;
using nlohmann::json;

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    if (dir.back() == '/') return dir + name;
    return dir + "/" + name;
}

double grid_max(const std::vector<double>& v) {
    double m = v.front();
    for (double x : v)
        if (x > m) m = x;
    return m;
}

// Runs the assumption checks on the configured operating range, writes
// validation.json, and refuses (exit 2) when the income-elasticity bound A6
// fails, unless the config opts out.
bool validation_gate(const RunConfig& cfg, const std::string& out_dir) {
    WeightSchedule ws = cfg.weights ? *cfg.weights : WeightSchedule{};
    double tau_max = grid_max(cfg.tau.values);
    ValidationReport report =
        validate_assumptions(ws, cfg.schedule, cfg.demand, cfg.sigma, tau_max);
    write_file(join_path(out_dir, "validation.json"), to_json(report).dump(2) + "\n");
    for (const auto& c : report.checks) {
        if (c.passed) continue;
        if (c.check_id == "A6") {
            if (cfg.skip_validation) {
                std::cerr << "warning: A6 income-elasticity bound fails (max "
                          << c.worst_value << " at Omega = " << c.worst_point
                          << ", bound " << c.threshold
                          << "); continuing because skip_validation is set\n";
                continue;
            }
            std::cerr << "error: A6 income-elasticity bound fails: max d ln m/d ln Omega = "
                      << c.worst_value << " at Omega = " << c.worst_point
                      << " is not < sigma - 1 = " << c.threshold
                      << "; refusing to run solvers (set skip_validation to override)\n";
            return false;
        }
        std::cerr << "warning: check " << c.check_id << " fails (worst value "
                  << c.worst_value << " at " << c.worst_point << ", threshold "
                  << c.threshold << ")\n";
    }
    return true;
}

int cmd_phase(const RunConfig& cfg, const std::string& out_dir, unsigned threads) {
    auto cells = phase_grid(cfg.alpha.values, cfg.sigma, cfg.tau.values, cfg.schedule,
                            threads);
    write_file(join_path(out_dir, "phase.csv"), phase_csv(cells));
    std::size_t bad = 0;
    for (const auto& c : cells)
        if (!c.ok || c.tau0_kind == PhaseCell::Col::Error ||
            c.tau1_kind == PhaseCell::Col::Error)
            ++bad;
    if (bad > 0) {
        std::cerr << "warning: " << bad << " of " << cells.size()
                  << " cells have ERROR entries (see phase.csv)\n";
        return 3;
    }
    return 0;
}

int cmd_trajectory(const RunConfig& cfg, const std::string& out_dir) {
    auto recs = growth_trajectory(cfg.alpha.values, cfg.sigma, cfg.tau.scalar(),
                                  cfg.schedule, cfg.rule);
    write_file(join_path(out_dir, "trajectory.csv"), trajectory_csv(recs));
    return 0;
}

int cmd_critical(const RunConfig& cfg, const std::string& out_dir) {
    double alpha = cfg.alpha.scalar();
    CriticalPoints cp = critical_points(alpha, cfg.sigma, cfg.schedule);
    json out{{"tau0", to_json(cp.tau_break)},
             {"tau1", to_json(cp.tau_sustain)},
             {"alpha1", to_json(alpha_threshold_sustain(cfg.sigma, cfg.schedule))},
             {"alpha_inf", to_json(alpha_threshold_break(cfg.sigma, cfg.schedule))}};
    write_file(join_path(out_dir, "critical.json"), out.dump(2) + "\n");
    return 0;
}

int cmd_shortrun(const RunConfig& cfg, const std::string& out_dir) {
    EconomyParams p;
    p.alpha = cfg.alpha.scalar();
    p.sigma = cfg.sigma;
    p.tau = cfg.tau.scalar();
    std::vector<ShortRunSolution> rows;
    std::size_t failures = 0;
    for (double lam : cfg.lambda.values) {
        try {
            rows.push_back(solve_short_run(lam, p, cfg.schedule));
        } catch (const SolverError& e) {
            ++failures;
            std::cerr << "error: short-run solve failed at lambda = " << lam << ": "
                      << e.what() << "\n";
        }
    }
    write_file(join_path(out_dir, "shortrun.csv"), shortrun_csv(rows));
    json out;
    if (cfg.lambda.is_scalar && rows.size() == 1) {
        out = to_json(rows.front());
    } else {
        out = json::array();
        for (const auto& s : rows) out.push_back(to_json(s));
    }
    write_file(join_path(out_dir, "shortrun.json"), out.dump(2) + "\n");
    return failures == 0 ? 0 : 3;
}

int cmd_tatonnement(const RunConfig& cfg, const std::string& out_dir) {
    EconomyParams p;
    p.alpha = cfg.alpha.scalar();
    p.sigma = cfg.sigma;
    p.tau = cfg.tau.scalar();
    TatonnementResult res = tatonnement(cfg.lambda0, p, cfg.schedule, cfg.taton);
    write_file(join_path(out_dir, "tatonnement.csv"), tatonnement_csv(res.path));
    std::cout << "limit_lambda=" << fmt_g17(res.limit_lambda)
              << " converged=" << (res.converged ? "true" : "false")
              << " steps=" << res.steps << "\n";
    return 0;
}

int cmd_helpman(const RunConfig& cfg, const std::string& out_dir) {
    std::vector<StabilityScanRow> rows;
    for (double tau : cfg.tau.values) {
        double m = cfg.m_fixed
                       ? *cfg.m_fixed
                       : solve_symmetric_real_income_ext(cfg.alpha.scalar(), cfg.sigma,
                                                         tau, cfg.eta, cfg.schedule)
                             .m_B;
        StabilityReport rep = stability_report(m, cfg.sigma, cfg.eta, tau);
        rows.push_back({m, cfg.sigma, cfg.eta, tau, rep.Z, rep.elasticity, rep.stable});
    }
    write_file(join_path(out_dir, "helpman.csv"), stability_scan_csv(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-region two-sector economic geography solver"};
    app.require_subcommand(1);

    std::string config_path;
    const char* env_out = std::getenv("HCDGEO_OUT");
    std::string out_dir = env_out ? env_out : ".";
    unsigned hw = std::thread::hardware_concurrency();
    unsigned threads = hw == 0 ? 1 : hw;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads for grid sweeps");
    };

    CLI::App* phase = app.add_subcommand("phase", "alpha x tau classification sweep");
    CLI::App* trajectory =
        app.add_subcommand("trajectory", "structural-change path along an alpha grid");
    CLI::App* critical =
        app.add_subcommand("critical", "critical trade costs and alpha thresholds");
    CLI::App* shortrun =
        app.add_subcommand("shortrun", "short-run equilibrium at given allocations");
    CLI::App* taton =
        app.add_subcommand("tatonnement", "replicator migration dynamics path");
    CLI::App* helpman =
        app.add_subcommand("helpman", "symmetric-stability scan of the structures extension");
    for (CLI::App* sub : {phase, trajectory, critical, shortrun, taton, helpman})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (!validation_gate(cfg, out_dir)) return 2;
        if (phase->parsed()) return cmd_phase(cfg, out_dir, threads);
        if (trajectory->parsed()) return cmd_trajectory(cfg, out_dir);
        if (critical->parsed()) return cmd_critical(cfg, out_dir);
        if (shortrun->parsed()) return cmd_shortrun(cfg, out_dir);
        if (taton->parsed()) return cmd_tatonnement(cfg, out_dir);
        if (helpman->parsed()) return cmd_helpman(cfg, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
