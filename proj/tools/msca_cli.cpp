// msca: build, check and search multi-stage higher-index covering arrays.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "msca/array_io.hpp"
#include "msca/core.hpp"
#include "msca/evolve.hpp"
#include "msca/multistage.hpp"
#include "msca/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kOk = 0;
constexpr int kNotCovering = 1;
constexpr int kUsage = 2;

// Anything that should end the run with the usage/parse exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  msca::CAParams params;
  std::string time_mode = "work";
  unsigned jobs = 1;
};

void add_params(CLI::App& cmd, msca::CAParams& p) {
  cmd.add_option("--t", p.t, "Strength")->required();
  cmd.add_option("--k", p.k, "Number of factors")->required();
  cmd.add_option("--v", p.v, "Levels per factor")->required();
  cmd.add_option("--lambda", p.lambda, "Target index")->required();
}

void add_time_mode(CLI::App& cmd, std::string& mode) {
  cmd.add_option("--time-mode", mode, "Cost fed to statistics: wall seconds or work units")
      ->check(CLI::IsMember({"wall", "work"}));
}

msca::CostMode cost_mode(const std::string& name) {
  return name == "wall" ? msca::CostMode::wall : msca::CostMode::work;
}

fs::path default_output_dir() {
  if (const char* dir = std::getenv("MSCA_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    return dir;
  }
  return ".";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json params_json(const msca::CAParams& p) {
  return {{"t", p.t}, {"k", p.k}, {"v", p.v}, {"lambda", p.lambda}};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

json manifest(const std::string& command, const json& args, const std::string& started,
              const json& outputs) {
  json m = args;
  m["command"] = command;
  m["tool_version"] = kVersion;
  m["started_at"] = started;
  m["outputs"] = outputs;
  return m;
}

fs::path manifest_path_for(const fs::path& output) {
  fs::path p = output;
  p += ".manifest.json";
  return p;
}

json record_json(const msca::ExecutionRecord& record) {
  json stages = json::array();
  for (const msca::StageRecord& s : record.per_stage) {
    stages.push_back({{"algorithm", std::string(1, msca::algorithm_code(s.stage.algorithm))},
                      {"index", s.stage.index},
                      {"rows_added", s.rows_added},
                      {"seconds", s.cost.seconds},
                      {"work", s.cost.work},
                      {"cumulative_index", s.cumulative_index},
                      {"from_cache", s.from_cache}});
  }
  return {{"selection", record.selection.to_string()},
          {"rows", record.rows()},
          {"seconds", record.cost.seconds},
          {"work", record.cost.work},
          {"cache_hits", record.cache_hits},
          {"per_stage", stages}};
}

msca::StageSelection parse_stages(const std::string& text, int lambda) {
  msca::StageSelection selection;
  try {
    selection = msca::StageSelection::parse(text);
  } catch (const msca::StageParseError& e) {
    throw UsageError(e.what());
  }
  try {
    selection.validate(lambda);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return selection;
}

void check_params(const msca::CAParams& p) {
  try {
    p.validate();
    (void)msca::interaction_count(p);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

msca::ArrayFile load_array(const fs::path& path) {
  try {
    return msca::read_array_file(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// construct ------------------------------------------------------------------

struct ConstructArgs {
  Common common;
  std::string stages;
  std::string out;
};

int run_construct(const ConstructArgs& a) {
  const std::string started = utc_timestamp();
  check_params(a.common.params);
  const msca::StageSelection selection = parse_stages(a.stages, a.common.params.lambda);
  const msca::CAParams& p = a.common.params;

  const msca::ExecutionRecord record = msca::execute(selection, p, nullptr);

  fs::path out = a.out;
  if (out.empty()) {
    out = default_output_dir() / ("ca_t" + std::to_string(p.t) + "_k" + std::to_string(p.k) + "_v" +
                                  std::to_string(p.v) + "_l" + std::to_string(p.lambda) + ".txt");
  }
  fs::path record_path = out;
  record_path += ".record.json";

  write_text(out, msca::format_array({p, record.array}));
  write_json(record_path, record_json(record));
  const json args = {{"params", params_json(p)},
                     {"stages", selection.to_string()},
                     {"seed", nullptr},
                     {"time_mode", a.common.time_mode}};
  write_json(manifest_path_for(out),
             manifest("construct", args, started,
                      {{"array", out.string()}, {"record", record_path.string()}}));

  std::cout << "N " << record.rows() << '\n';
  for (const msca::StageRecord& s : record.per_stage) {
    std::cout << "stage " << msca::algorithm_code(s.stage.algorithm) << ':' << s.stage.index
              << " rows " << s.rows_added << " index " << s.cumulative_index << '\n';
  }
  std::cout << "cost " << std::fixed << std::setprecision(6)
            << record.cost.value(cost_mode(a.common.time_mode)) << ' ' << a.common.time_mode
            << '\n';
  std::cout << "wrote " << out.string() << '\n';
  return kOk;
}

// verify ---------------------------------------------------------------------

struct VerifyArgs {
  std::string file;
  int lambda = 0;
  bool full = false;
};

int run_verify(const VerifyArgs& a) {
  msca::ArrayFile file = load_array(a.file);
  if (a.lambda > 0) {
    file.params.lambda = a.lambda;
  }
  msca::CoverageReport report;
  try {
    const std::size_t limit = a.full ? std::numeric_limits<std::size_t>::max() : 100;
    report = msca::is_covering_array(file.rows, file.params, limit);
  } catch (const msca::DimensionError& e) {
    throw UsageError(e.what());
  }
  std::cout << (report.covering ? "covering" : "not covering") << " at index " << report.lambda
            << '\n';
  std::cout << "rows " << file.rows.size() << " min_coverage " << report.min_coverage
            << " deficient " << report.deficient << '\n';
  for (const auto& [interaction, count] : report.sample) {
    std::cout << "  " << msca::to_string(interaction) << " count " << count << '\n';
  }
  if (report.sample.size() < report.deficient) {
    std::cout << "  ... " << report.deficient - report.sample.size()
              << " more (use --full to list all)\n";
  }
  return report.covering ? kOk : kNotCovering;
}

// sweep ----------------------------------------------------------------------

struct SweepArgs {
  Common common;
  int max_stages = 0;
  std::string out;
  std::string entries_out;
  bool no_cache = false;
  std::size_t cache_capacity = 4096;
};

int run_sweep_cmd(const SweepArgs& a) {
  const std::string started = utc_timestamp();
  check_params(a.common.params);
  const msca::CAParams& p = a.common.params;
  const int max_stages = a.max_stages > 0 ? a.max_stages : p.lambda;
  const auto selections = msca::enumerate_selections(p.lambda, max_stages, msca::kAllAlgorithms);

  msca::PrefixCache cache(a.cache_capacity);
  const auto entries = msca::run_sweep(p, selections, a.no_cache ? nullptr : &cache, a.common.jobs);
  const msca::CostMode mode = cost_mode(a.common.time_mode);
  const auto stats = msca::sweep_stats(entries, mode);

  fs::path out = a.out.empty() ? default_output_dir() / "sweep.csv" : fs::path(a.out);
  write_text(out, msca::format_sweep_csv(stats, mode));
  json outputs = {{"sweep", out.string()}};
  if (!a.entries_out.empty()) {
    std::ostringstream os;
    os << "selection,n,seconds,work,fresh_stages\n";
    for (const msca::SweepEntry& e : entries) {
      os << '"' << e.selection.to_string() << "\"," << e.rows << ',' << e.cost.seconds << ','
         << e.cost.work << ',' << e.fresh_stages << '\n';
    }
    write_text(a.entries_out, os.str());
    outputs["entries"] = a.entries_out;
  }
  std::size_t fresh = 0;
  for (const msca::SweepEntry& e : entries) {
    fresh += e.fresh_stages;
  }
  const json args = {{"params", params_json(p)},
                     {"max_stages", max_stages},
                     {"seed", nullptr},
                     {"time_mode", a.common.time_mode},
                     {"jobs", a.common.jobs},
                     {"cache", !a.no_cache}};
  write_json(manifest_path_for(out), manifest("sweep", args, started, outputs));

  std::cout << "executions " << entries.size() << " fresh_stages " << fresh << '\n';
  for (const msca::StageCountStats& s : stats) {
    std::cout << "ns " << s.stage_count << " selections " << s.selections << " min_n "
              << s.rows.min << " max_n " << s.rows.max << '\n';
  }
  std::cout << "wrote " << out.string() << '\n';
  return kOk;
}

// search ---------------------------------------------------------------------

struct SearchArgs {
  Common common;
  msca::GAConfig ga;
  std::string out_dir;
};

json point_json(const msca::FrontPoint& p) {
  return {{"n", p.fitness.rows}, {"t", p.fitness.cost}, {"selection", p.selection.to_string()}};
}

int run_search(SearchArgs a) {
  const std::string started = utc_timestamp();
  check_params(a.common.params);
  const msca::CAParams& p = a.common.params;
  a.ga.time_mode = cost_mode(a.common.time_mode);
  a.ga.jobs = a.common.jobs;
  try {
    a.ga.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const msca::GAResult result = msca::run_ga(p, a.ga);

  const fs::path dir = a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir);
  const fs::path fronts = dir / "fronts.csv";
  const fs::path best = dir / "best.json";
  write_text(fronts, msca::format_front_csv(result.fronts, a.ga.time_mode));
  json best_doc = json::array();
  for (const msca::GenerationBest& b : result.best) {
    best_doc.push_back({{"generation", b.generation},
                        {"lowest_n", point_json(b.lowest_rows)},
                        {"lowest_t", point_json(b.lowest_cost)}});
  }
  write_json(best, best_doc);
  const json args = {{"params", params_json(p)},
                     {"seed", a.ga.seed},
                     {"time_mode", a.common.time_mode},
                     {"population_size", a.ga.population_size},
                     {"generations", a.ga.generations},
                     {"crossover_probability", a.ga.crossover_probability},
                     {"mutation_probability", a.ga.mutation_probability},
                     {"max_stages", a.ga.max_stages},
                     {"jobs", a.ga.jobs}};
  write_json(dir / "manifest.json",
             manifest("search", args, started,
                      {{"fronts", fronts.string()}, {"best", best.string()}}));

  const msca::GenerationBest& last = result.best.back();
  std::cout << "generations " << result.fronts.size() << " evaluations " << result.evaluations
            << '\n';
  std::cout << "lowest_n " << last.lowest_rows.fitness.rows << ' '
            << last.lowest_rows.selection.to_string() << '\n';
  std::cout << "lowest_t " << last.lowest_cost.fitness.rows << ' '
            << last.lowest_cost.selection.to_string() << '\n';
  std::cout << "wrote " << dir.string() << '\n';
  return kOk;
}

// profile --------------------------------------------------------------------

struct ProfileArgs {
  std::string file;
  int lambda = 0;
  std::string out;
};

int run_profile(const ProfileArgs& a) {
  const std::string started = utc_timestamp();
  msca::ArrayFile file = load_array(a.file);
  const int lambda = a.lambda > 0 ? a.lambda : file.params.lambda;
  if (file.rows.empty()) {
    throw UsageError("array has no rows: " + a.file);
  }
  std::vector<msca::ProfileRow> profile;
  try {
    profile = msca::coverage_profile(file.rows, file.params, static_cast<std::uint32_t>(lambda));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const fs::path out = a.out.empty() ? default_output_dir() / "profile.csv" : fs::path(a.out);
  write_text(out, msca::format_profile_csv(profile));
  msca::CAParams p = file.params;
  p.lambda = lambda;
  const json args = {{"params", params_json(p)},
                     {"input", a.file},
                     {"seed", nullptr},
                     {"time_mode", nullptr}};
  write_json(manifest_path_for(out), manifest("profile", args, started, {{"profile", out.string()}}));
  std::cout << "rows " << profile.size() << " cumulative " << profile.back().cumulative << " of "
            << msca::interaction_count(p) << '\n';
  std::cout << "wrote " << out.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-stage construction of higher-index covering arrays"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ConstructArgs construct;
  auto* c = app.add_subcommand("construct", "Build an array from a stage selection");
  add_params(*c, construct.common.params);
  c->add_option("--stages", construct.stages, "Stage selection, e.g. D:1,S:1,D:3")->required();
  c->add_option("--out", construct.out, "Array file (default: $MSCA_OUTPUT_DIR or .)");
  add_time_mode(*c, construct.common.time_mode);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check that a file is a covering array");
  v->add_option("--file", verify.file, "Array file")->required();
  v->add_option("--lambda", verify.lambda, "Index to check instead of the file's");
  v->add_flag("--full", verify.full, "List every deficient interaction");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Run every stage selection up to a stage count");
  add_params(*s, sweep.common.params);
  s->add_option("--max-stages", sweep.max_stages, "Largest stage count (default: lambda)");
  s->add_option("--out", sweep.out, "Statistics CSV");
  s->add_option("--entries", sweep.entries_out, "Optional per-selection CSV");
  s->add_option("--jobs", sweep.common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  s->add_option("--cache-capacity", sweep.cache_capacity, "Prefix cache entries");
  s->add_flag("--no-cache", sweep.no_cache, "Disable prefix reuse");
  add_time_mode(*s, sweep.common.time_mode);

  SearchArgs search;
  auto* g = app.add_subcommand("search", "Genetic search for stage selections");
  add_params(*g, search.common.params);
  g->add_option("--pop", search.ga.population_size, "Population size");
  g->add_option("--gens", search.ga.generations, "Generations");
  g->add_option("--seed", search.ga.seed, "PRNG seed");
  g->add_option("--crossover-prob", search.ga.crossover_probability, "Crossover probability");
  g->add_option("--mutation-prob", search.ga.mutation_probability, "Mutation probability");
  g->add_option("--max-stages", search.ga.max_stages, "Stage cap for random individuals");
  g->add_option("--cache-capacity", search.ga.cache_capacity, "Prefix cache entries");
  g->add_option("--out-dir", search.out_dir, "Output directory");
  g->add_option("--jobs", search.common.jobs, "Worker threads (work mode only)")
      ->check(CLI::PositiveNumber);
  add_time_mode(*g, search.common.time_mode);

  ProfileArgs profile;
  auto* pr = app.add_subcommand("profile", "Per-row count of interactions reaching the index");
  pr->add_option("--file", profile.file, "Array file")->required();
  pr->add_option("--lambda", profile.lambda, "Index (default: the file's)");
  pr->add_option("--out", profile.out, "Profile CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c->parsed()) {
      return run_construct(construct);
    }
    if (v->parsed()) {
      return run_verify(verify);
    }
    if (s->parsed()) {
      return run_sweep_cmd(sweep);
    }
    if (g->parsed()) {
      return run_search(search);
    }
    if (pr->parsed()) {
      return run_profile(profile);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 3;
  }
  return kUsage;
}
