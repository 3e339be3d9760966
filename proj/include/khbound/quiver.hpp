#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "khbound/errors.hpp"

namespace khbound {

// Integer data (m; a_1..a_d) of a cyclic quotient singularity:
// 0 < a_j < m, gcd(a_j, m) = 1 for every j, and sum a_j = m.
struct CyclicParams {
  int m = 0;
  std::vector<int> a;

  int d() const { return static_cast<int>(a.size()); }
  bool operator==(const CyclicParams&) const = default;
};

inline CyclicParams validate_params(int m, std::vector<int> a) {
  if (m < 2) throw TooSmall("m must be at least 2, got " + std::to_string(m));
  if (a.size() < 2)
    throw TooSmall("need at least 2 weights, got " + std::to_string(a.size()));
  long long sum = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] <= 0 || a[j] >= m)
      throw RangeViolation("weight a_" + std::to_string(j + 1) + " = " +
                           std::to_string(a[j]) + " outside (0, " + std::to_string(m) + ")");
    if (std::gcd(a[j], m) != 1)
      throw GcdViolation("gcd(a_" + std::to_string(j + 1) + " = " + std::to_string(a[j]) +
                         ", m = " + std::to_string(m) + ") = " +
                         std::to_string(std::gcd(a[j], m)));
    sum += a[j];
  }
  if (sum != m)
    throw SumViolation("weights sum to " + std::to_string(sum) + ", expected m = " +
                       std::to_string(m));
  return CyclicParams{m, std::move(a)};
}

// One arrow base -> (base + a_branch) mod m. Ids are assigned by
// (base, branch) lexicographic order and stay fixed across pruning stages.
struct Arrow {
  int id = 0;
  int base = 0;
  int branch = 0;  // 1-based branch index j
  int target = 0;

  bool operator==(const Arrow&) const = default;
};

enum class RelationStatus { commutativity, zero_path, vacuous };

// Commutation relation at a base vertex for an unordered branch pair
// {branch_a, branch_b}: the two length-2 sides are stored as arrow-id pairs.
// Pruning can only move a relation commutativity -> zero_path -> vacuous.
struct Relation {
  int base = 0;
  int branch_a = 0, branch_b = 0;    // branch_a < branch_b
  std::array<int, 2> left{};         // branch_a first, then branch_b
  std::array<int, 2> right{};        // branch_b first, then branch_a
  bool left_alive = true;
  bool right_alive = true;

  RelationStatus status() const {
    if (left_alive && right_alive) return RelationStatus::commutativity;
    if (left_alive || right_alive) return RelationStatus::zero_path;
    return RelationStatus::vacuous;
  }

  const std::array<int, 2>& surviving_side() const {
    if (status() != RelationStatus::zero_path)
      throw std::logic_error("surviving_side: relation is not a zero relation");
    return left_alive ? left : right;
  }
};

enum class Stage { full, pruned, final };

struct QuiverWithRelations {
  CyclicParams params;
  Stage stage = Stage::full;
  std::vector<int> vertices;        // surviving labels, ascending
  std::vector<Arrow> arrows;        // surviving arrows, ascending by id
  std::vector<Relation> relations;  // all relations, with alive flags

  int relation_count(RelationStatus s) const {
    int n = 0;
    for (const auto& r : relations)
      if (r.status() == s) ++n;
    return n;
  }
};

inline QuiverWithRelations build_full_quiver(const CyclicParams& p) {
  const int m = p.m, d = p.d();
  QuiverWithRelations q;
  q.params = p;
  q.stage = Stage::full;
  q.vertices.resize(m);
  std::iota(q.vertices.begin(), q.vertices.end(), 0);
  q.arrows.reserve(static_cast<std::size_t>(m) * d);
  for (int i = 0; i < m; ++i)
    for (int j = 1; j <= d; ++j)
      q.arrows.push_back(Arrow{i * d + (j - 1), i, j, (i + p.a[j - 1]) % m});
  auto arrow_id = [d](int base, int branch) { return base * d + (branch - 1); };
  for (int i = 0; i < m; ++i)
    for (int j = 1; j <= d; ++j)
      for (int jp = j + 1; jp <= d; ++jp) {
        Relation r;
        r.base = i;
        r.branch_a = j;
        r.branch_b = jp;
        int mid_left = (i + p.a[j - 1]) % m;
        int mid_right = (i + p.a[jp - 1]) % m;
        r.left = {arrow_id(i, j), arrow_id(mid_left, jp)};
        r.right = {arrow_id(i, jp), arrow_id(mid_right, j)};
        q.relations.push_back(r);
      }
  return q;
}

namespace detail {
inline void reclassify_relations(QuiverWithRelations& q) {
  std::unordered_set<int> alive;
  alive.reserve(q.arrows.size() * 2);
  for (const auto& a : q.arrows) alive.insert(a.id);
  for (auto& r : q.relations) {
    r.left_alive = r.left_alive && alive.contains(r.left[0]) && alive.contains(r.left[1]);
    r.right_alive = r.right_alive && alive.contains(r.right[0]) && alive.contains(r.right[1]);
  }
}
}  // namespace detail

// Drop every arrow whose target label (canonical representative in 0..m-1)
// is not larger than its base label.
inline QuiverWithRelations prune_decreasing_arrows(const QuiverWithRelations& q) {
  if (q.stage != Stage::full)
    throw std::logic_error("prune_decreasing_arrows: quiver not at the full stage");
  QuiverWithRelations out = q;
  out.stage = Stage::pruned;
  std::erase_if(out.arrows, [](const Arrow& a) { return a.base >= a.target; });
  detail::reclassify_relations(out);
  return out;
}

// Drop vertex 0 together with every incident arrow; the result is acyclic
// with every arrow strictly increasing the vertex label.
inline QuiverWithRelations remove_vertex_zero(const QuiverWithRelations& q) {
  if (q.stage != Stage::pruned)
    throw std::logic_error("remove_vertex_zero: quiver not at the pruned stage");
  QuiverWithRelations out = q;
  out.stage = Stage::final;
  std::erase(out.vertices, 0);
  std::erase_if(out.arrows, [](const Arrow& a) { return a.base == 0 || a.target == 0; });
  detail::reclassify_relations(out);
  return out;
}

// Deterministic Graphviz rendering of any stage.
inline std::string to_dot(const QuiverWithRelations& q) {
  const char* stage_name = q.stage == Stage::full    ? "full"
                           : q.stage == Stage::pruned ? "pruned"
                                                      : "final";
  std::ostringstream os;
  os << "digraph quiver_" << stage_name << " {\n";
  os << "  rankdir=LR;\n";
  for (int v : q.vertices) os << "  " << v << " [shape=circle];\n";
  for (const auto& a : q.arrows)
    os << "  " << a.base << " -> " << a.target << " [label=\"x^" << a.base << "_"
       << a.branch << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace khbound
