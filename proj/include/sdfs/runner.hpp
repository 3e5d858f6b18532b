// runner.hpp - Runs a scenario and emits CSV rows plus a JSON sidecar
//
// CSV header (fixed): scenario,engine,time,observable,value,leakage,seed,version
// Rows are sorted by (scenario, time, observable). Reals use %.17g, so a rerun
// with the same scenario and seed reproduces the file byte for byte. The
// leakage column carries the per-point truncation diagnostic; rows above 1e-8
// are tainted and the sidecar says so.

#pragma once

#include "sdfs/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdfs {

inline constexpr const char* kCsvHeader = "scenario,engine,time,observable,value,leakage,seed,version";

std::string library_version();

struct ResultRecord {
    std::string scenario;
    std::string engine;
    double time{0.0};
    std::string observable;
    double value{0.0};
    double leakage{0.0};
    std::uint64_t seed{0};
    std::string version;
};

struct RunResult {
    std::vector<ResultRecord> records;
    bool tainted{false};
    double max_leakage{0.0};
    std::optional<int> quasi_cutoff;  // M' used by the quasi engine
    std::string config_hash;
};

RunResult run_scenario(const Scenario& s);

// FNV-1a 64 of the canonical scenario text, as 16 hex digits.
std::string config_hash(const Scenario& s);

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);
std::string format_csv(const std::vector<ResultRecord>& records);

nlohmann::json sidecar_json(const Scenario& s, const RunResult& r);
nlohmann::json records_json(const std::vector<ResultRecord>& records);

enum class OutputFormat { Csv, Json };

// Writes <dir>/<name>.csv + <dir>/<name>.meta.json (csv) or <dir>/<name>.json
// holding the sidecar fields and a records array (json). Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const Scenario& s, const RunResult& r,
                                                 const std::filesystem::path& dir, OutputFormat format);

// Quasi bases of the scenario's coupling blocks: U and Omega per sector.
nlohmann::json diagonalize_json(const Scenario& s);

}  // namespace sdfs
