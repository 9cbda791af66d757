// Experiment configs, dispatch to the module operations, and CSV/JSON output.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace circlelab::cli {

// Bad input of any kind: unknown keys, malformed values, unreadable files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string module;
    std::string operation;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string output;        // empty: CSV to stdout, no sidecar

    // Rejects unknown top-level keys and wrong types.
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;
    std::string hash() const;  // FNV-1a of the canonical dump, hex
};

struct ResultRecord {
    std::string config_hash;
    std::string timestamp;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    nlohmann::json fitted = nlohmann::json::object();
    std::map<std::string, bool> flags;     // property checks; any false means failure

    bool passed() const;
};

// Operations known to run(), as "module operation".
std::vector<std::string> operations();
// Parameter names accepted by one operation; throws UsageError if unknown.
std::vector<std::string> parameters(const std::string& operation);

ResultRecord run(const ExperimentConfig& config);

void write_csv(const ResultRecord& r, std::ostream& out);
nlohmann::json sidecar(const ExperimentConfig& config, const ResultRecord& r);

// Runs, writes CSV (and the sidecar next to it when an output path is set),
// and returns the exit code: 0 pass, 2 property failure, 1 usage error.
int execute(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int run_suite(const std::string& name, std::ostream& out, std::ostream& err);

}  // namespace circlelab::cli
