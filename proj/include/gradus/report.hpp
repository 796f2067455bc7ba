#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradus/constructions.hpp"
#include "json.hpp"

namespace gradus {

inline constexpr const char* kToolName = "gradus";
inline constexpr const char* kToolVersion = "0.1.0";

// flag or configuration problems; the driver exits 2 on these
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// malformed or foreign report/cache JSON (wrong schema, unknown fields)
struct ReportError : std::runtime_error {
    explicit ReportError(const std::string& what) : std::runtime_error(what) {}
};

// --help and friends; carries the text to print before exiting 0
struct HelpRequested {
    std::string text;
};

struct RunConfig {
    std::string command;
    std::vector<TypeTuple> types;
    FieldSpec field = FieldSpec::fp(65537);
    std::string mode = "explicit";  // explicit | random
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out_path;   // JSON report target; empty prints the tableau only
    std::string cache_dir;  // empty: no cache (batch falls back to .gradus-cache)
    bool dump_matrices = false;
    std::vector<int> degrees;  // lefschetz
    int degree = 4;            // nl-classical
    int max_t = 9;             // batch
    std::string ring = "S";    // dim: S, T, U, or P0..P9
    Bidegree bidegree{0, 0};   // dim

    // canonical flag echo; feeding it back through parse_args reproduces it
    std::string str() const;
};

// argv tokens without the program name; throws ConfigError on bad input and
// HelpRequested on --help
RunConfig parse_args(const std::vector<std::string>& args);

// fnv-1a 64 of the canonical input string, as 16 hex digits
std::string input_digest(const std::string& canonical);

struct JobRecord {
    std::string job;      // human-readable id
    std::string inputs;   // canonical string the digest covers
    std::string digest;
    std::string verdict;  // FULL, DEFICIENT, TRIVIALLY-RATIONAL, SL-FOUND, ...
    long elapsed_ms = 0;
    bool cache_hit = false;  // tableau only, never serialized
    nlohmann::json certificate;
};

struct Report {
    std::string generated_at;  // the only run-to-run variation besides elapsed_ms
    RunConfig config;
    std::vector<JobRecord> jobs;
    std::map<std::string, long> summary;

    nlohmann::json to_json() const;
    std::string str() const;  // terminal tableau
};

// strict readers: schema must equal 1 and no unknown top-level fields allowed
nlohmann::json parse_report_json(const std::string& text);
nlohmann::json parse_cache_entry(const std::string& text);

// one file per digest under dir; nullopt when the entry is absent
std::optional<nlohmann::json> cache_lookup(const std::string& dir, const std::string& digest);
void cache_store(const std::string& dir, const std::string& digest,
                 const nlohmann::json& entry);

// command bodies fill the report and return the process exit code
int cmd_verify_type(const RunConfig& cfg, Report& rep);
int cmd_lefschetz(const RunConfig& cfg, Report& rep);
int cmd_nl_classical(const RunConfig& cfg, Report& rep);
int cmd_batch(const RunConfig& cfg, Report& rep);
int cmd_dim(const RunConfig& cfg, Report& rep);

// batch grid: sorted same-parity tuples with entries <= 6 and t <= max_t
std::vector<TypeTuple> batch_types(int max_t);

// dispatch, print the tableau to out, write the JSON file when configured
int run_command(const RunConfig& cfg, std::ostream& out);

}  // namespace gradus
