// khbound: upper bounds for the first negative homotopy K-theory group of a
// cyclic quotient singularity, computed from its quiver with relations.
//
// Exit codes: 0 success, 2 parameter validation error, 3 cross-check or
// sweep failure, 4 path budget exceeded, 1 anything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "khbound/pipeline.hpp"

namespace {

using namespace khbound;

std::uint64_t budget_from_env_or(std::uint64_t fallback) {
  const char* env = std::getenv("KHBOUND_PATH_BUDGET");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw RangeViolation(std::string("KHBOUND_PATH_BUDGET is not an integer: ") + env);
  return v;
}

Stage parse_stage(const std::string& s) {
  if (s == "full") return Stage::full;
  if (s == "pruned") return Stage::pruned;
  return Stage::final;
}

void write_dot(const CyclicParams& params, Stage stage, const std::string& path) {
  QuiverWithRelations q = build_full_quiver(params);
  if (stage != Stage::full) q = prune_decreasing_arrows(q);
  if (stage == Stage::final) q = remove_vertex_zero(q);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::range_violation, "cannot open dot output file " + path);
  out << to_dot(q);
}

nlohmann::ordered_json bound_json(const AbelianGroup& g) {
  nlohmann::ordered_json j;
  j["free_rank"] = g.free_rank;
  auto factors = nlohmann::ordered_json::array();
  for (const Int& f : g.invariant_factors) factors.push_back(f.get_str());
  j["invariant_factors"] = std::move(factors);
  return j;
}

int cmd_compute(int m, const std::vector<int>& a, const PipelineConfig& config,
                const std::string& format, const std::string& dot_path,
                const std::string& dot_stage) {
  CyclicParams params = validate_params(m, a);
  Report rep = run_pipeline(params, config);
  if (!dot_path.empty()) write_dot(params, parse_stage(dot_stage), dot_path);
  if (format == "json")
    std::cout << render_json(rep).dump(2) << "\n";
  else
    std::cout << render_text(rep);
  return 0;
}

int cmd_kleinian(int m_max, const PipelineConfig& config, const std::string& format) {
  auto results = kleinian_sweep(m_max, config);
  if (format == "json") {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [m, g] : results)
      arr.push_back({{"m", m}, {"bound", bound_json(g)}});
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& [m, g] : results)
      std::cout << "m=" << m << ": " << g.to_string() << "\n";
  }
  return 0;
}

int cmd_sweep(int m, const PipelineConfig& config, const std::string& format) {
  if (m < 2) throw TooSmall("sweep: m must be at least 2");
  auto all = enumerate_valid_params(m);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& params : all) {
    std::string a_str;
    for (std::size_t j = 0; j < params.a.size(); ++j)
      a_str += (j ? "," : "") + std::to_string(params.a[j]);
    try {
      Report rep = run_pipeline(params, config);
      if (format == "json") {
        arr.push_back({{"a", params.a},
                       {"engine", engine_name(rep.engine_used)},
                       {"bound", bound_json(rep.bound)}});
      } else {
        std::cout << "a=[" << a_str << "]: " << rep.bound.to_string() << " (engine "
                  << engine_name(rep.engine_used) << ")\n";
      }
    } catch (const PathBudgetExceeded& e) {
      if (format == "json")
        arr.push_back({{"a", params.a}, {"error", "path budget exceeded"}});
      else
        std::cout << "a=[" << a_str << "]: path budget exceeded\n";
    }
  }
  if (format == "json") std::cout << arr.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "khbound: explicit upper bound for KH_-1 of a cyclic quotient singularity\n"
      "via its quiver with relations, Cartan matrix and Smith normal form"};
  app.require_subcommand(1);

  std::map<std::string, CartanEngine> engine_names{
      {"normalform", CartanEngine::normal_form},
      {"oracle", CartanEngine::oracle},
      {"both", CartanEngine::both}};

  int m = 0;
  std::vector<int> a;
  std::optional<CartanEngine> engine;
  std::string format = "text";
  std::string dot_path;
  std::string dot_stage = "final";
  std::optional<std::uint64_t> budget_flag;

  auto* compute = app.add_subcommand("compute", "run the pipeline for one (m; a_1..a_d)");
  compute->add_option("--m", m, "modulus m >= 2")->required();
  compute->add_option("--a", a, "comma-separated weights a_1..a_d")
      ->required()
      ->delimiter(',');
  compute->add_option("--engine", engine, "cartan engine")
      ->transform(CLI::CheckedTransformer(engine_names, CLI::ignore_case));
  compute->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  compute->add_option("--dot", dot_path, "write a Graphviz rendering of the quiver");
  compute->add_option("--dot-stage", dot_stage, "which stage --dot exports")
      ->check(CLI::IsMember({"full", "pruned", "final"}));
  compute->add_option("--path-budget", budget_flag, "per-vertex-pair path cap");

  int m_max = 0;
  auto* kleinian = app.add_subcommand("kleinian", "sweep the family (m, [1, m-1])");
  kleinian->add_option("--max", m_max, "largest modulus, >= 2")->required();
  kleinian->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  kleinian->add_option("--path-budget", budget_flag, "per-vertex-pair path cap");

  int sweep_m = 0;
  auto* sweep = app.add_subcommand("sweep", "run every valid weight vector for one m");
  sweep->add_option("--m", sweep_m, "modulus m >= 2")->required();
  sweep->add_option("--engine", engine, "cartan engine")
      ->transform(CLI::CheckedTransformer(engine_names, CLI::ignore_case));
  sweep->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  sweep->add_option("--path-budget", budget_flag, "per-vertex-pair path cap");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig config;
    config.engine = engine;
    config.path_budget = budget_flag ? *budget_flag : budget_from_env_or(kDefaultPathBudget);
    if (compute->parsed()) return cmd_compute(m, a, config, format, dot_path, dot_stage);
    if (kleinian->parsed()) return cmd_kleinian(m_max, config, format);
    return cmd_sweep(sweep_m, config, format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
