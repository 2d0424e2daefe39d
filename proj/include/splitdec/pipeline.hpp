#pragma once

// Orchestration behind the drg tool and the acceptance runner: graph
// ingestion, suites in dependency order, JSON reports and exit codes.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "splitdec/qtet.hpp"

namespace splitdec {

inline constexpr const char* kReportSchema = "splitdec-report/1";
inline constexpr const char* kVersion = "1.0.0";
inline const std::vector<std::string> kSuites{"scheme", "split", "qtet", "tmodule"};

struct RunConfig {
  std::string graph;
  int base_vertex = 0;
  std::string backend = "auto";  // auto | exact | f64
  double tol = 1e-8;
  int qsign = 1;
  Probe probe;
  std::optional<std::vector<int>> ordering;  // nullopt: automatic
  std::vector<std::string> suites;           // empty: every applicable suite
  std::string out;
  std::string cache_dir;  // empty: no cache
};

Probe parse_probe(const std::string& text);
std::optional<std::vector<int>> parse_ordering(const std::string& text);
std::vector<std::string> parse_suites(const std::string& text);
int parse_qsign(const std::string& text);
/// Throws ConfigError on tol <= 0, an empty probe or unknown suites.
void validate(const RunConfig& cfg);

/// 0 all pass, 1 verification failure, 2 inapplicable or bad configuration,
/// 3 internal error.
int exit_code(ErrorKind kind);

nlohmann::json check_json(const Check& c);
nlohmann::json checks_json(const CheckLog& log);

struct RunResult {
  nlohmann::json report;
  CheckLog log;
  int exit_code = 0;
  std::optional<Error> error;
};

/// Runs the requested suites.  Errors are caught and reported; the partial
/// check list is kept.
RunResult run_verify(const RunConfig& cfg);

/// Parameters, eigenvalues, orderings and the classical-parameter outcome.
/// `lines` receives a human-readable summary.
nlohmann::json run_info(const RunConfig& cfg, std::vector<std::string>& lines);

/// Writes matrix dumps under `dir` with a manifest.json naming them by
/// relative path.  Returns the manifest.
nlohmann::json run_dump(const RunConfig& cfg, const std::string& dir);

}  // namespace splitdec
