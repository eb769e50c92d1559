// Command runners shared by the wqed executable and its tests. Every
// subcommand is a pure function of (command, params) so that a JSON sidecar
// can replay the run exactly.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wqed/model.hpp"

namespace wqed::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Phase in radians from "0.5pi", "pi/4", "3pi/4", "pi" or a plain number
/// (radians). Throws ConfigError naming `field`.
double parse_phase(const std::string& text, const std::string& field);

/// 64-bit FNV-1a of the canonical config text, as 16 hex digits.
std::string config_hash(const ConfigDocument& doc);

std::string config_text(const ConfigDocument& doc);
ConfigDocument config_from_text(const std::string& text);

/// Output directory: the flag if given, else $WQED_OUTPUT_DIR, else "out".
std::filesystem::path output_dir(const std::string& flag);

struct Job {
    std::string command;  // transport, poles, delay, spectrum, g2, langevin
    std::string name;     // file stem
    json params;
};

/// Runs one job, writes <dir>/<name>.csv and <dir>/<name>.json, returns the
/// sidecar document.
json run_job(const Job& job, const std::filesystem::path& dir);

/// Re-runs a job from its sidecar into `dir`.
json replay(const std::filesystem::path& sidecar, const std::filesystem::path& dir);

/// Runs jobs on a pool of `workers` threads (0: hardware concurrency).
/// Rethrows the first failure after all workers stop.
std::vector<json> run_jobs(const std::vector<Job>& jobs, const std::filesystem::path& dir, unsigned workers = 0);

struct FigurePreset {
    std::string id;
    std::string description;
    std::vector<Job> jobs;
};

/// fig2 ... fig15 in the order the figures appear.
std::vector<std::string> preset_ids();
FigurePreset figure_preset(const std::string& id);

/// Frequencies on the red side of omega0 where |t|^2 crosses `target`,
/// nearest first (infinite geometry).
std::vector<double> red_side_crossings(const SystemConfig& config, double target, std::size_t count);

struct CheckRow {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Scattering engine vs Langevin vs closed forms and quadrature.
std::vector<CheckRow> crosscheck_suite();

}  // namespace wqed::cli
