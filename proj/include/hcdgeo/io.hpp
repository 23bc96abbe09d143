#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcdgeo/demand.hpp"
#include "hcdgeo/dynamics.hpp"
#include "hcdgeo/short_run.hpp"
#include "hcdgeo/spatial.hpp"
#include "hcdgeo/structures.hpp"

namespace hcdgeo {

// Fixed float formatting for CSV output: 17 significant digits round-trip
// doubles exactly and keep byte-identical output across runs.
std::string fmt_g17(double x);

// --- run configuration -------------------------------------------------------

// A numeric axis: either a single value or an inclusive range expanded to
// `count` points with linear or log spacing.
struct GridSpec {
    std::vector<double> values;
    bool is_scalar = true;

    double scalar() const;  // throws ConfigError unless exactly one value
};

struct RunConfig {
    ShareSchedule schedule = ShareSchedule::constant(0.5);
    std::optional<WeightSchedule> weights;  // populated for the hcd schedule kind
    DemandConfig demand;                    // gamma / s_lower / validation grid

    GridSpec alpha;   // defaults to scalar 1.0
    double sigma = 2.0;
    GridSpec tau;     // defaults to scalar 1.5
    GridSpec lambda;  // short-run allocation(s); defaults to scalar 0.5

    double lambda0 = 0.55;  // tatonnement start
    TatonnementOptions taton;
    SelectionRule rule = SelectionRule::Hysteresis;

    double eta = 0.0;                // structures share for the extension scan
    std::optional<double> m_fixed;   // extension scan: fixed share (else solved)

    bool skip_validation = false;
};

// Parses and validates a JSON config file; throws ConfigError with a
// human-readable message on any problem (CLI maps that to exit code 2).
RunConfig load_config(const std::string& path);

// --- serialization ------------------------------------------------------------

nlohmann::json to_json(const ValidationCheck& c);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const ShortRunSolution& s);
nlohmann::json to_json(const CriticalTau& t);      // number or "everywhere"
nlohmann::json to_json(const AlphaThreshold& t);   // number, "everywhere", or "not_defined"

std::string phase_csv(const std::vector<PhaseCell>& cells);
std::string trajectory_csv(const std::vector<TrajectoryRecord>& recs);
std::string tatonnement_csv(const std::vector<TatonnementPoint>& path);
std::string shortrun_csv(const std::vector<ShortRunSolution>& rows);

struct StabilityScanRow {
    double m = 0.0, sigma = 0.0, eta = 0.0, tau = 0.0, Z = 0.0, elasticity = 0.0;
    bool stable = false;
};
std::string stability_scan_csv(const std::vector<StabilityScanRow>& rows);

// Writes content to path, creating parent directories as needed.
void write_file(const std::string& path, const std::string& content);

}  // namespace hcdgeo
