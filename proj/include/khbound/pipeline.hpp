#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "khbound/int_matrix.hpp"
#include "khbound/path_algebra.hpp"
#include "khbound/quiver.hpp"
#include "khbound/smith.hpp"

namespace khbound {

enum class CartanEngine { normal_form, oracle, both };

inline const char* engine_name(CartanEngine e) {
  switch (e) {
    case CartanEngine::normal_form: return "normalform";
    case CartanEngine::oracle: return "oracle";
    default: return "both";
  }
}

// The oracle engine eliminates over all prefix/suffix relation applications;
// above this modulus the default policy runs the normal-form engine alone.
inline constexpr int kOracleDefaultMaxModulus = 12;

struct PipelineConfig {
  // unset => both engines for m <= 12, normal-form alone (with a warning) above
  std::optional<CartanEngine> engine;
  std::uint64_t path_budget = kDefaultPathBudget;
};

struct StageSummary {
  int vertices = 0;
  int arrows = 0;
  int commutativity = 0;
  int zero_path = 0;
  int vacuous = 0;
};

struct CheckResult {
  std::string name;
  bool pass = false;
};

struct Report {
  CyclicParams params;
  StageSummary stage_full, stage_pruned, stage_final;
  CartanEngine engine_used = CartanEngine::both;
  CartanMatrix cartan;
  IntMatrix m_mat;
  std::vector<Int> snf_diagonal;
  AbelianGroup bound;
  std::vector<CheckResult> checks;
  std::string warning;
};

namespace detail {

inline StageSummary summarize(const QuiverWithRelations& q) {
  StageSummary s;
  s.vertices = static_cast<int>(q.vertices.size());
  s.arrows = static_cast<int>(q.arrows.size());
  s.commutativity = q.relation_count(RelationStatus::commutativity);
  s.zero_path = q.relation_count(RelationStatus::zero_path);
  s.vacuous = q.relation_count(RelationStatus::vacuous);
  return s;
}

inline bool is_kleinian(const CyclicParams& p) {
  if (p.d() != 2) return false;
  auto [lo, hi] = std::minmax(p.a[0], p.a[1]);
  return lo == 1 && hi == p.m - 1;
}

}  // namespace detail

// Full pipeline: validate, build the three quiver stages, count the Cartan
// matrix with the configured engine(s), form M, take its Smith normal form
// and cokernel, and run the cross-checks. Any failed cross-check throws; it
// is never recorded as a passing report.
inline Report run_pipeline(const CyclicParams& params, const PipelineConfig& config = {}) {
  CyclicParams p = validate_params(params.m, params.a);

  Report rep;
  rep.params = p;

  QuiverWithRelations full = build_full_quiver(p);
  QuiverWithRelations pruned = prune_decreasing_arrows(full);
  QuiverWithRelations fin = remove_vertex_zero(pruned);
  rep.stage_full = detail::summarize(full);
  rep.stage_pruned = detail::summarize(pruned);
  rep.stage_final = detail::summarize(fin);

  CartanEngine engine;
  if (config.engine) {
    engine = *config.engine;
  } else if (p.m <= kOracleDefaultMaxModulus) {
    engine = CartanEngine::both;
  } else {
    engine = CartanEngine::normal_form;
    rep.warning = "m > " + std::to_string(kOracleDefaultMaxModulus) +
                  ": oracle engine skipped by default policy; pass --engine both to force it";
  }
  rep.engine_used = engine;

  switch (engine) {
    case CartanEngine::normal_form:
      rep.cartan = cartan_matrix_normal_form(fin, config.path_budget);
      break;
    case CartanEngine::oracle:
      rep.cartan = cartan_matrix_oracle(fin, config.path_budget);
      break;
    case CartanEngine::both: {
      rep.cartan = cartan_matrix_normal_form(fin, config.path_budget);
      CartanMatrix check = cartan_matrix_oracle(fin, config.path_budget);
      if (!(rep.cartan == check))
        throw EngineDisagreement("Cartan engines disagree for m=" + std::to_string(p.m) +
                                 ":\n" + to_string(rep.cartan) + "\nvs\n" + to_string(check));
      rep.checks.push_back({"engine_agreement", true});
      break;
    }
  }

  rep.m_mat = m_matrix(rep.cartan, p.d());

  // (-1)^{d-2} Phi - I must reproduce M exactly
  {
    IntMatrix phi = coxeter_phi(rep.cartan);
    IntMatrix lhs = (p.d() - 2) % 2 == 0 ? phi : -phi;
    for (std::size_t i = 0; i < lhs.rows(); ++i) lhs(i, i) -= 1;
    if (!(lhs == rep.m_mat))
      throw CrossCheckFailure("coxeter identity failed for m=" + std::to_string(p.m));
    rep.checks.push_back({"coxeter_identity", true});
  }

  SnfResult snf = smith_normal_form(rep.m_mat);
  const std::size_t diag_len = std::min(snf.d.rows(), snf.d.cols());
  rep.snf_diagonal.reserve(diag_len);
  for (std::size_t k = 0; k < diag_len; ++k) rep.snf_diagonal.push_back(snf.d(k, k));
  rep.bound = detail::cokernel_from_diagonal(snf.d, rep.m_mat.rows());

  {
    Int det = rep.m_mat.rows() ? determinant(rep.m_mat) : Int(1);
    if (det != 0) {
      if (rep.bound.torsion_order() != abs(det))
        throw CrossCheckFailure("determinant law failed for m=" + std::to_string(p.m) +
                                ": torsion " + rep.bound.torsion_order().get_str() +
                                " vs |det| " + Int(abs(det)).get_str());
      rep.checks.push_back({"determinant_law", true});
    }
  }

  if (detail::is_kleinian(p)) {
    AbelianGroup expected;
    expected.invariant_factors.push_back(p.m);
    if (!(rep.bound == expected))
      throw CrossCheckFailure("Kleinian closed form failed for m=" + std::to_string(p.m) +
                              ": got " + rep.bound.to_string());
    rep.checks.push_back({"kleinian_closed_form", true});
  }

  return rep;
}

// Pipeline over the Kleinian family (m, [1, m-1]) for 2 <= m <= m_max; each
// bound must come out cyclic of order m.
inline std::vector<std::pair<int, AbelianGroup>> kleinian_sweep(
    int m_max, const PipelineConfig& config = {}) {
  if (m_max < 2) throw TooSmall("kleinian_sweep: m_max must be at least 2");
  std::vector<std::pair<int, AbelianGroup>> out;
  out.reserve(m_max - 1);
  for (int m = 2; m <= m_max; ++m) {
    Report rep = run_pipeline(CyclicParams{m, {1, m - 1}}, config);
    AbelianGroup expected;
    expected.invariant_factors.push_back(m);
    if (!(rep.bound == expected))
      throw SweepFailure("kleinian_sweep: bound for m=" + std::to_string(m) + " is " +
                         rep.bound.to_string() + ", expected Z/" + std::to_string(m));
    out.emplace_back(m, rep.bound);
  }
  return out;
}

// All weight vectors (any d >= 2) valid for the given modulus, one per
// reordering class, canonically nondecreasing; ordered by d then
// lexicographically. Empty for m < 2.
inline std::vector<CyclicParams> enumerate_valid_params(int m) {
  std::vector<CyclicParams> out;
  if (m < 2) return out;
  std::vector<int> acc;
  auto rec = [&](auto&& self, int remaining, int lo) -> void {
    if (remaining == 0) {
      if (acc.size() >= 2) out.push_back(CyclicParams{m, acc});
      return;
    }
    for (int v = lo; v <= std::min(remaining, m - 1); ++v) {
      if (std::gcd(v, m) != 1) continue;
      acc.push_back(v);
      self(self, remaining - v, v);
      acc.pop_back();
    }
  };
  rec(rec, m, 1);
  std::sort(out.begin(), out.end(), [](const CyclicParams& x, const CyclicParams& y) {
    if (x.a.size() != y.a.size()) return x.a.size() < y.a.size();
    return x.a < y.a;
  });
  return out;
}

inline std::string render_text(const Report& rep) {
  std::ostringstream os;
  os << "params: m=" << rep.params.m << " d=" << rep.params.d() << " a=[";
  for (std::size_t j = 0; j < rep.params.a.size(); ++j)
    os << (j ? "," : "") << rep.params.a[j];
  os << "]\n";
  auto stage_line = [&](const char* name, const StageSummary& s) {
    os << "stage " << name << ": vertices=" << s.vertices << " arrows=" << s.arrows
       << " relations(commutativity=" << s.commutativity << " zero=" << s.zero_path
       << " vacuous=" << s.vacuous << ")\n";
  };
  stage_line("full  ", rep.stage_full);
  stage_line("pruned", rep.stage_pruned);
  stage_line("final ", rep.stage_final);
  os << "engine: " << engine_name(rep.engine_used) << "\n";
  os << "cartan matrix C (" << rep.cartan.rows() << "x" << rep.cartan.cols() << "):\n"
     << to_string(rep.cartan) << "\n";
  os << "matrix M (" << rep.m_mat.rows() << "x" << rep.m_mat.cols() << "):\n"
     << to_string(rep.m_mat) << "\n";
  os << "snf diagonal: [";
  for (std::size_t k = 0; k < rep.snf_diagonal.size(); ++k)
    os << (k ? "," : "") << rep.snf_diagonal[k].get_str();
  os << "]\n";
  os << "checks:";
  for (const auto& c : rep.checks) os << " " << c.name << "=" << (c.pass ? "pass" : "FAIL");
  os << "\n";
  if (!rep.warning.empty()) os << "warning: " << rep.warning << "\n";
  os << "KH_-1 upper bound (quotient): " << rep.bound.to_string() << "\n";
  return os.str();
}

namespace detail {
inline nlohmann::ordered_json matrix_json(const IntMatrix& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  auto data = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) data.push_back(m(i, k).get_str());
  j["data"] = std::move(data);
  return j;
}

inline nlohmann::ordered_json stage_json(const StageSummary& s) {
  nlohmann::ordered_json j;
  j["vertices"] = s.vertices;
  j["arrows"] = s.arrows;
  j["relations"] = {{"commutativity", s.commutativity},
                    {"zero_path", s.zero_path},
                    {"vacuous", s.vacuous}};
  return j;
}
}  // namespace detail

inline nlohmann::ordered_json render_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["params"] = {{"m", rep.params.m}, {"d", rep.params.d()}, {"a", rep.params.a}};
  nlohmann::ordered_json stages;
  stages["full"] = detail::stage_json(rep.stage_full);
  stages["pruned"] = detail::stage_json(rep.stage_pruned);
  stages["final"] = detail::stage_json(rep.stage_final);
  j["stages"] = std::move(stages);
  j["cartan"] = detail::matrix_json(rep.cartan);
  j["m_matrix"] = detail::matrix_json(rep.m_mat);
  nlohmann::ordered_json snf;
  auto diag = nlohmann::ordered_json::array();
  for (const Int& v : rep.snf_diagonal) diag.push_back(v.get_str());
  snf["diagonal"] = std::move(diag);
  j["snf"] = std::move(snf);
  nlohmann::ordered_json bound;
  bound["free_rank"] = rep.bound.free_rank;
  auto factors = nlohmann::ordered_json::array();
  for (const Int& f : rep.bound.invariant_factors) factors.push_back(f.get_str());
  bound["invariant_factors"] = std::move(factors);
  j["bound"] = std::move(bound);
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}});
  j["checks"] = std::move(checks);
  if (!rep.warning.empty()) j["warning"] = rep.warning;
  return j;
}

}  // namespace khbound
