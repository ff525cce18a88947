#include "vicert/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vicert/error.hpp"
#include "vicert/verification.hpp"

namespace vicert {
namespace {

namespace fs = std::filesystem;

constexpr std::pair<Task, std::string_view> kTaskNames[] = {
    {Task::kSolvePg, "solve_pg"},
    {Task::kSolveHalpern, "solve_halpern"},
    {Task::kVerifyLemma22, "verify_lemma22"},
    {Task::kVerifyLemma31, "verify_lemma31"},
    {Task::kBruteForce, "brute_force"},
    {Task::kCompareStopping, "compare_stopping"},
};

// Cap on solution points echoed into reports.json by the brute_force task.
constexpr std::size_t kMaxListedSolutions = 1000;

Task task_from_string(const std::string& name) {
  for (const auto& [task, text] : kTaskNames) {
    if (text == name) return task;
  }
  throw ParseError("unknown task '" + name + "'");
}

bool is_solver(Task t) {
  return t == Task::kSolvePg || t == Task::kSolveHalpern || t == Task::kCompareStopping;
}

bool needs_grid(Task t) {
  return t == Task::kVerifyLemma31 || t == Task::kBruteForce;
}

bool gridable(const ConvexSet& set) {
  return (std::holds_alternative<Box>(set.shape()) ||
          std::holds_alternative<Simplex>(set.shape())) &&
         set.dim() <= BruteForceGrid::kMaxDim;
}

template <class T>
std::optional<T> optional_field(const Json& j, const char* field) {
  const auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + field + "': wrong type");
  }
}

const Json& required(const Json& j, const char* field) {
  const auto it = j.find(field);
  if (it == j.end()) throw ParseError(std::string("field '") + field + "': missing");
  return *it;
}

IterationConfig config_from_json(const Json& j, bool need_step) {
  IterationConfig cfg;
  if (!j.is_object()) throw ParseError("field 'config': expected an object");
  if (auto step = optional_field<double>(j, "lambda")) {
    cfg.step = *step;
  } else if (need_step) {
    throw ParseError("field 'config.lambda': required by solver tasks");
  }
  cfg.max_iters = optional_field<std::int64_t>(j, "max_iters").value_or(cfg.max_iters);
  cfg.residual_tol = optional_field<double>(j, "tol").value_or(cfg.residual_tol);
  cfg.seed = optional_field<std::uint64_t>(j, "seed").value_or(cfg.seed);
  cfg.record_stride = optional_field<std::int64_t>(j, "record_stride").value_or(1);
  const auto rule = optional_field<std::string>(j, "anchor_rule").value_or("harmonic");
  if (rule == "harmonic") {
    cfg.anchor_schedule.rule = AnchorSchedule::Rule::kHarmonic;
  } else if (rule == "power") {
    cfg.anchor_schedule.rule = AnchorSchedule::Rule::kPower;
  } else {
    throw ParseError("field 'config.anchor_rule': expected 'harmonic' or 'power'");
  }
  cfg.anchor_schedule.offset = optional_field<double>(j, "anchor_offset").value_or(1.0);
  cfg.anchor_schedule.exponent = optional_field<double>(j, "anchor_exponent").value_or(1.0);
  return cfg;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_atomically(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json trace_summary(const IterationTrace& trace) {
  return {
      {"status", std::string(to_string(trace.status))},
      {"iterations", trace.iterations},
      {"final_x", vector_json(trace.final_x)},
      {"final_natural_residual", trace.records.back().natural_residual},
  };
}

int severity(ReportStatus status) {
  switch (status) {
    case ReportStatus::kPass:
      return kExitOk;
    case ReportStatus::kFail:
      return kExitFailed;
    case ReportStatus::kPreconditionViolated:
      return kExitPrecondition;
  }
  return kExitFailed;
}

// Runs one task; returns its exit severity and fills `entry`.
class TaskRunner {
 public:
  TaskRunner(const Scenario& sc, const fs::path& out_dir, Json& reports,
             std::vector<fs::path>& written)
      : sc_(sc), out_dir_(out_dir), reports_(reports), written_(written),
        moduli_(certify_moduli(sc.op)) {}

  int run(Task task, Json& entry) {
    switch (task) {
      case Task::kSolvePg:
        return solve_pg(entry);
      case Task::kSolveHalpern:
        return solve_halpern(entry);
      case Task::kVerifyLemma22:
        return verify_lemma22(entry);
      case Task::kVerifyLemma31:
        return verify_lemma31(entry);
      case Task::kBruteForce:
        return brute_force(entry);
      case Task::kCompareStopping:
        return compare(entry);
    }
    return kExitFailed;
  }

 private:
  void write_trace(const std::string& suffix, const IterationTrace& trace, Json& entry) {
    const fs::path path = out_dir_ / (sc_.name + suffix);
    write_atomically(path, trace_to_csv(trace));
    written_.push_back(path);
    entry["trace_csv"] = path.filename().string();
  }

  int add_report(VerificationReport report, Json& entry) {
    report.seed = sc_.config.seed;
    const Json j = report_to_json(report);
    entry["reports"].push_back(j);
    reports_.push_back(j);
    return severity(report.status);
  }

  std::vector<PointPair> pairs() const {
    return sample_pairs(sc_.op.dim(), sc_.samples, sc_.config.seed);
  }

  BruteForceGrid grid() const {
    return BruteForceGrid(sc_.set, sc_.grid.spacing, sc_.grid.vi_tolerance);
  }

  int solve_pg(Json& entry) {
    const IterationTrace trace = solve_projected_gradient(sc_.op, sc_.set, sc_.config, sc_.x0,
                                                          sc_.x_star);
    entry.update(trace_summary(trace));
    write_trace(".trace.csv", trace, entry);
    return kExitOk;
  }

  int solve_halpern(Json& entry) {
    const NonexpansiveMap s = sc_.map_s.value_or(NonexpansiveMap::identity());
    const IterationTrace trace = vicert::solve_halpern(
        sc_.op, sc_.set, s, sc_.halpern_config, sc_.x0, sc_.anchor.value_or(sc_.x0), sc_.x_star);
    entry.update(trace_summary(trace));
    write_trace(".halpern.trace.csv", trace, entry);
    return kExitOk;
  }

  int compare(Json& entry) {
    const StoppingComparison cmp =
        compare_stopping(sc_.op, sc_.set, sc_.config, sc_.x0, *sc_.x_star, sc_.delta);
    entry.update(trace_summary(cmp.trace));
    entry["delta"] = cmp.delta;
    entry["shortcut_n"] = cmp.shortcut_n ? Json(*cmp.shortcut_n) : Json(nullptr);
    entry["natural_n"] = cmp.natural_n ? Json(*cmp.natural_n) : Json(nullptr);
    write_trace(".compare.trace.csv", cmp.trace, entry);
    return kExitOk;
  }

  int verify_lemma22(Json& entry) {
    const LemmaParams p = sc_.lemma.value_or(
        LemmaParams{moduli_.cocoercive_m, moduli_.cocoercive_v, moduli_.lipschitz});
    entry["lemma"] = {{"m", p.m}, {"v", p.v}, {"epsilon", p.eps}};
    const auto sample = pairs();
    LemmaOutcome outcome = lemma_cocoercive_expansive(sc_.op, p.m, p.v, p.eps, sample);
    entry["gamma"] = outcome.gamma;
    const bool hypotheses_hold = outcome.report.status != ReportStatus::kPreconditionViolated;
    int code = add_report(std::move(outcome.report), entry);
    if (hypotheses_hold && gridable(sc_.set)) {
      VerificationReport singleton = check_singleton_vi(sc_.op, grid());
      singleton.property = "lemma_cocoercive_singleton";
      code = std::max(code, add_report(std::move(singleton), entry));
    }
    return code;
  }

  int verify_lemma31(Json& entry) {
    const std::optional<double> alpha = sc_.ism_alpha ? sc_.ism_alpha : moduli_.ism_alpha;
    if (!alpha || !(*alpha > 0.0)) {
      VerificationReport r;
      r.property = "lemma_ism_singleton";
      r.status = ReportStatus::kPreconditionViolated;
      r.note = "no positive inverse-strong-monotonicity modulus available";
      return add_report(std::move(r), entry);
    }
    entry["alpha"] = *alpha;
    return add_report(lemma_ism_singleton(sc_.op, *alpha, grid(), pairs()), entry);
  }

  int brute_force(Json& entry) {
    const std::vector<Vector> sol = brute_force_vi(sc_.op, grid());
    entry["solution_count"] = sol.size();
    Json listed = Json::array();
    for (std::size_t i = 0; i < std::min(sol.size(), kMaxListedSolutions); ++i) {
      listed.push_back(vector_json(sol[i]));
    }
    entry["solutions"] = listed;
    return kExitOk;
  }

  const Scenario& sc_;
  const fs::path& out_dir_;
  Json& reports_;
  std::vector<fs::path>& written_;
  OperatorModuli moduli_;
};

}  // namespace

std::string_view to_string(Task task) {
  for (const auto& [t, text] : kTaskNames) {
    if (t == task) return text;
  }
  return "unknown";
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  const auto name = optional_field<std::string>(j, "name");
  if (!name || name->empty()) throw ParseError("field 'name': missing");
  if (name->find_first_of("/\\") != std::string::npos) {
    throw ParseError("field 'name': must not contain path separators");
  }

  std::vector<Task> tasks;
  const Json& task_list = required(j, "tasks");
  if (!task_list.is_array()) throw ParseError("field 'tasks': expected an array");
  for (const auto& t : task_list) {
    if (!t.is_string()) throw ParseError("field 'tasks': expected strings");
    tasks.push_back(task_from_string(t.get<std::string>()));
  }
  const bool any_solver = std::any_of(tasks.begin(), tasks.end(), is_solver);

  Scenario sc{
      .name = *name,
      .description = optional_field<std::string>(j, "description").value_or(""),
      .op = operator_from_json(required(j, "operator")),
      .set = set_from_json(required(j, "set")),
      .config = config_from_json(j.contains("config") ? j["config"] : Json::object(), any_solver),
      .halpern_config = {},
      .x0 = Vector(),
      .tasks = std::move(tasks),
  };
  sc.halpern_config = sc.config;
  if (j.contains("halpern") && !j["halpern"].is_null()) {
    const Json& h = j["halpern"];
    if (!h.is_object()) throw ParseError("field 'halpern': expected an object");
    auto& hc = sc.halpern_config;
    hc.max_iters = optional_field<std::int64_t>(h, "max_iters").value_or(hc.max_iters);
    hc.residual_tol = optional_field<double>(h, "tol").value_or(hc.residual_tol);
    hc.record_stride = optional_field<std::int64_t>(h, "record_stride").value_or(hc.record_stride);
  }
  if (j.contains("map_s") && !j["map_s"].is_null()) sc.map_s = map_from_json(j["map_s"]);
  if (j.contains("x0")) {
    sc.x0 = vector_from_json(j["x0"], "x0");
  } else if (any_solver) {
    throw ParseError("field 'x0': required by solver tasks");
  }
  if (j.contains("x_star") && !j["x_star"].is_null()) sc.x_star = vector_from_json(j["x_star"], "x_star");
  if (j.contains("anchor") && !j["anchor"].is_null()) sc.anchor = vector_from_json(j["anchor"], "anchor");
  if (j.contains("lemma") && !j["lemma"].is_null()) {
    const Json& l = j["lemma"];
    const auto m = optional_field<double>(l, "m");
    const auto v = optional_field<double>(l, "v");
    const auto eps = optional_field<double>(l, "epsilon");
    if (!m || !v || !eps) throw ParseError("field 'lemma': needs m, v and epsilon");
    sc.lemma = LemmaParams{*m, *v, *eps};
  }
  sc.ism_alpha = optional_field<double>(j, "ism_alpha");
  if (j.contains("grid")) {
    sc.grid.spacing = optional_field<double>(j["grid"], "spacing").value_or(sc.grid.spacing);
    sc.grid.vi_tolerance =
        optional_field<double>(j["grid"], "vi_tolerance").value_or(sc.grid.vi_tolerance);
  }
  sc.samples = optional_field<std::int64_t>(j, "samples").value_or(sc.samples);
  if (sc.samples < 1) throw ParseError("field 'samples': must be >= 1");
  sc.delta = optional_field<double>(j, "delta").value_or(sc.delta);

  for (const Task t : sc.tasks) {
    if (t == Task::kCompareStopping && !sc.x_star) {
      throw ParseError("task 'compare_stopping' requires field 'x_star'");
    }
    if (needs_grid(t) && !gridable(sc.set)) {
      throw ParseError("task '" + std::string(to_string(t)) +
                       "' requires a box or simplex set of dimension <= 3");
    }
  }
  auto check_dim = [&](const Vector& v, const char* field) {
    if (v.size() != sc.op.dim()) {
      throw ParseError(std::string("field '") + field + "': expected length " +
                       std::to_string(sc.op.dim()) + ", got " + std::to_string(v.size()));
    }
  };
  if (sc.set.dim() != sc.op.dim()) throw ParseError("field 'set': dimension differs from operator");
  if (any_solver) check_dim(sc.x0, "x0");
  if (sc.x_star) check_dim(*sc.x_star, "x_star");
  if (sc.anchor) check_dim(*sc.anchor, "anchor");
  return sc;
}

Scenario load_scenario(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return scenario_from_json(parse_json_text(text));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    // Invalid operator or set specs are malformed input as well.
    throw ParseError(e.what());
  }
}

RunResult run_scenario(const fs::path& path, const fs::path& out_dir,
                       const RunOverrides& overrides) {
  RunResult result;
  std::optional<Scenario> loaded;
  try {
    loaded.emplace(load_scenario(path));
  } catch (const Error& e) {
    result.exit_status = kExitMalformed;
    result.message = e.what();
    return result;
  }
  Scenario& sc = *loaded;

  Json echoed = Json::object();
  if (overrides.seed) {
    sc.config.seed = *overrides.seed;
    sc.halpern_config.seed = *overrides.seed;
    echoed["seed"] = *overrides.seed;
  }
  if (overrides.max_iters) {
    sc.config.max_iters = *overrides.max_iters;
    sc.halpern_config.max_iters = *overrides.max_iters;
    echoed["max_iters"] = *overrides.max_iters;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    result.exit_status = kExitFailed;
    result.message = "cannot create output directory " + out_dir.string() + ": " + ec.message();
    return result;
  }

  Json doc = {
      {"scenario", sc.name},
      {"seed", sc.config.seed},
      {"overrides", echoed},
      {"moduli", moduli_to_json(certify_moduli(sc.op))},
  };
  Json reports = Json::array();
  Json tasks = Json::array();
  TaskRunner runner(sc, out_dir, reports, result.written);
  int exit_status = kExitOk;

  for (const Task task : sc.tasks) {
    Json entry = {{"task", std::string(to_string(task))}, {"reports", Json::array()}};
    int code = kExitOk;
    try {
      code = runner.run(task, entry);
    } catch (const DivergenceError& e) {
      code = kExitDivergence;
      entry["error"] = e.what();
    } catch (const ConfigError& e) {
      code = kExitPrecondition;
      entry["error"] = e.what();
    } catch (const Error& e) {
      code = kExitFailed;
      entry["error"] = e.what();
    }
    static constexpr const char* kOutcome[] = {"ok", "fail", "malformed", "precondition",
                                               "divergence"};
    entry["outcome"] = kOutcome[code];
    if (code != kExitOk && result.message.empty()) {
      std::string why = kOutcome[code];
      if (entry.contains("error")) {
        why = entry["error"].get<std::string>();
      } else {
        for (const auto& r : entry["reports"]) {
          if (r["status"] == "Pass") continue;
          why = r["property"].get<std::string>() + " " + r["status"].get<std::string>();
          if (r.contains("note")) why += " (" + r["note"].get<std::string>() + ")";
          break;
        }
      }
      result.message = std::string(to_string(task)) + ": " + why;
    }
    exit_status = std::max(exit_status, code);
    tasks.push_back(std::move(entry));
  }

  doc["tasks"] = tasks;
  doc["reports"] = reports;
  doc["exit_status"] = exit_status;
  try {
    const fs::path report_path = out_dir / (sc.name + ".reports.json");
    write_atomically(report_path, doc.dump(2) + "\n");
    result.written.push_back(report_path);
  } catch (const Error& e) {
    result.exit_status = kExitFailed;
    result.message = e.what();
    return result;
  }
  result.exit_status = exit_status;
  return result;
}

std::vector<GoldenEntry> list_golden(const fs::path& dir) {
  std::vector<GoldenEntry> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& item : fs::directory_iterator(dir, ec)) {
    if (!item.is_regular_file() || item.path().extension() != ".json") continue;
    GoldenEntry e{item.path().stem().string(), "", item.path()};
    try {
      const Json j = parse_json_text(read_file(item.path()));
      if (auto name = optional_field<std::string>(j, "name")) e.name = *name;
      if (auto desc = optional_field<std::string>(j, "description")) e.description = *desc;
    } catch (const Error&) {
      e.description = "(unreadable scenario)";
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const GoldenEntry& a, const GoldenEntry& b) { return a.name < b.name; });
  return out;
}

}  // namespace vicert
