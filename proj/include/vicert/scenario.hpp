#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vicert/geometry.hpp"
#include "vicert/json_io.hpp"
#include "vicert/operators.hpp"
#include "vicert/solvers.hpp"

namespace vicert {

enum class Task : std::uint8_t {
  kSolvePg,
  kSolveHalpern,
  kVerifyLemma22,
  kVerifyLemma31,
  kBruteForce,
  kCompareStopping,
};

std::string_view to_string(Task task);

struct LemmaParams {
  double m = 0.0;
  double v = 0.0;
  double eps = 0.0;
};

struct GridParams {
  double spacing = 1e-2;
  double vi_tolerance = 1e-9;
};

struct Scenario {
  std::string name;
  std::string description;
  AffineOperator op;
  ConvexSet set;
  std::optional<NonexpansiveMap> map_s;
  IterationConfig config;
  IterationConfig halpern_config;        // config plus the "halpern" overrides
  Vector x0;
  std::optional<Vector> x_star;
  std::optional<Vector> anchor;          // defaults to x0
  std::optional<LemmaParams> lemma;      // defaults to certified (0, v, eps)
  std::optional<double> ism_alpha;       // defaults to certified alpha
  GridParams grid;
  std::int64_t samples = kDefaultPairCount;
  double delta = 1e-6;
  std::vector<Task> tasks;
};

/// Builds a scenario from parsed JSON. Throws ParseError on schema problems,
/// including a task whose required fields are missing.
Scenario scenario_from_json(const Json& j);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::filesystem::path& path);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> max_iters;
};

/// Process exit statuses of a scenario run.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailed = 1,         // a verification report is Fail, or I/O trouble
  kExitMalformed = 2,      // unreadable or malformed scenario
  kExitPrecondition = 3,   // configuration or lemma hypothesis violated
  kExitDivergence = 4,
};

struct RunResult {
  int exit_status = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> written;
};

/// Runs every task of the scenario file and writes <name>.reports.json plus
/// one trace CSV per solver task into out_dir (atomically, temp + rename).
RunResult run_scenario(const std::filesystem::path& path,
                       const std::filesystem::path& out_dir,
                       const RunOverrides& overrides = {});

struct GoldenEntry {
  std::string name;
  std::string description;
  std::filesystem::path path;
};

/// Scenario fixtures (*.json) in dir, sorted by name. A missing or empty
/// directory yields an empty list.
std::vector<GoldenEntry> list_golden(const std::filesystem::path& dir);

}  // namespace vicert
