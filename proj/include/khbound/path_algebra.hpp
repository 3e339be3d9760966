#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "khbound/int_matrix.hpp"
#include "khbound/quiver.hpp"
#include "khbound/union_find.hpp"

namespace khbound {

inline constexpr std::uint64_t kDefaultPathBudget = 1'000'000;

// Composable chain of arrows; empty means the trivial path at source.
struct Path {
  int source = 0;
  int target = 0;
  std::vector<int> arrows;

  bool operator==(const Path&) const = default;
};

// The Cartan matrix is an IntMatrix whose (i, j) entry counts the nonzero
// path classes from vertex j+1 to vertex i+1 of the final-stage quiver.
using CartanMatrix = IntMatrix;

namespace detail {

// All paths between one vertex pair, stored back to back. DFS emits arrow-id
// sequences in lexicographic order, and distinct paths with the same
// endpoints are never prefixes of each other (the quiver is acyclic), so
// lookup is a plain binary search.
struct PathSet {
  int source = 0;
  int target = 0;
  std::vector<std::int32_t> arena;
  std::vector<std::uint32_t> offsets{0};

  std::size_t size() const { return offsets.size() - 1; }

  std::span<const std::int32_t> operator[](std::size_t k) const {
    return {arena.data() + offsets[k], arena.data() + offsets[k + 1]};
  }

  std::optional<std::size_t> find(std::span<const std::int32_t> key) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      auto p = (*this)[mid];
      if (std::lexicographical_compare(p.begin(), p.end(), key.begin(), key.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < size()) {
      auto p = (*this)[lo];
      if (std::equal(p.begin(), p.end(), key.begin(), key.end())) return lo;
    }
    return std::nullopt;
  }
};

// Outgoing arrows by base vertex, ascending by arrow id.
inline std::vector<std::vector<const Arrow*>> adjacency(const QuiverWithRelations& q) {
  std::vector<std::vector<const Arrow*>> out(q.params.m);
  for (const auto& a : q.arrows) out[a.base].push_back(&a);
  return out;
}

inline void require_final_pair(const QuiverWithRelations& q, int from, int to) {
  if (q.stage != Stage::final)
    throw std::logic_error("path enumeration requires the final-stage quiver");
  if (from < 1 || from >= q.params.m || to < 1 || to >= q.params.m)
    throw std::logic_error("path enumeration: vertex outside 1..m-1");
}

// Number of paths v -> to for every vertex v, saturated just above `cap`.
inline std::vector<std::uint64_t> path_counts_to(
    const std::vector<std::vector<const Arrow*>>& adj, int m, int to, std::uint64_t cap) {
  const std::uint64_t sat = cap == std::numeric_limits<std::uint64_t>::max() ? cap : cap + 1;
  std::vector<std::uint64_t> count(m, 0);
  count[to] = 1;
  for (int v = to - 1; v >= 1; --v) {
    std::uint64_t total = 0;
    for (const Arrow* a : adj[v]) {
      if (a->target > to) continue;
      std::uint64_t c = count[a->target];
      total = (total > sat - c) ? sat : total + c;
      if (total >= sat) {
        total = sat;
        break;
      }
    }
    count[v] = total;
  }
  return count;
}

// Every engine touches every vertex pair, so the budget is checked for all
// of them up front; beyond-scale instances fail before any enumeration.
inline void check_budget_all_pairs(const QuiverWithRelations& q,
                                   const std::vector<std::vector<const Arrow*>>& adj,
                                   std::uint64_t budget) {
  const int n = q.params.m - 1;
  for (int to = 1; to <= n; ++to) {
    auto counts = path_counts_to(adj, q.params.m, to, budget);
    for (int from = 1; from <= to; ++from)
      if (counts[from] > budget)
        throw PathBudgetExceeded(
            "path count from " + std::to_string(from) + " to " + std::to_string(to) +
            " exceeds budget " + std::to_string(budget));
  }
}

inline PathSet enumerate_path_set(const QuiverWithRelations& q,
                                  const std::vector<std::vector<const Arrow*>>& adj,
                                  int from, int to, std::uint64_t budget) {
  require_final_pair(q, from, to);
  PathSet set;
  set.source = from;
  set.target = to;
  if (to < from) return set;
  auto counts = path_counts_to(adj, q.params.m, to, budget);
  if (counts[from] > budget)
    throw PathBudgetExceeded(
        "path count from " + std::to_string(from) + " to " + std::to_string(to) +
        " exceeds budget " + std::to_string(budget));
  set.arena.reserve(counts[from] * 2);
  set.offsets.reserve(counts[from] + 1);
  std::vector<std::int32_t> acc;
  auto dfs = [&](auto&& self, int v) -> void {
    if (v == to) {  // acyclic: no continuation returns to `to`
      set.arena.insert(set.arena.end(), acc.begin(), acc.end());
      set.offsets.push_back(static_cast<std::uint32_t>(set.arena.size()));
      return;
    }
    for (const Arrow* a : adj[v]) {
      if (a->target > to || counts[a->target] == 0) continue;
      acc.push_back(a->id);
      self(self, a->target);
      acc.pop_back();
    }
  };
  dfs(dfs, from);
  return set;
}

// Length-2 windows that relations act on, keyed by the ordered arrow-id pair.
struct WindowAction {
  bool zero = false;               // window is the surviving side of a zero relation
  std::array<int, 2> replacement{};  // for commutation windows: the other side
};

inline std::unordered_map<std::uint64_t, WindowAction> window_actions(
    const QuiverWithRelations& q) {
  auto key = [](const std::array<int, 2>& w) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(w[0])) << 32) |
           static_cast<std::uint32_t>(w[1]);
  };
  std::unordered_map<std::uint64_t, WindowAction> map;
  for (const auto& r : q.relations) {
    switch (r.status()) {
      case RelationStatus::commutativity:
        map.emplace(key(r.left), WindowAction{false, r.right});
        map.emplace(key(r.right), WindowAction{false, r.left});
        break;
      case RelationStatus::zero_path:
        map.emplace(key(r.surviving_side()), WindowAction{true, {}});
        break;
      case RelationStatus::vacuous:
        break;
    }
  }
  return map;
}

// Classes of one vertex pair: paths identified by commutation moves, classes
// touching a zero path discarded. Returns the number of surviving classes.
inline Int count_path_classes(const PathSet& paths,
                              const std::unordered_map<std::uint64_t, WindowAction>& windows) {
  const std::size_t n = paths.size();
  UnionFind uf(n);
  std::vector<char> zero(n, 0);
  std::vector<std::int32_t> swapped;
  for (std::size_t k = 0; k < n; ++k) {
    auto p = paths[k];
    for (std::size_t pos = 0; pos + 1 < p.size(); ++pos) {
      std::uint64_t key =
          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[pos])) << 32) |
          static_cast<std::uint32_t>(p[pos + 1]);
      auto it = windows.find(key);
      if (it == windows.end()) continue;
      if (it->second.zero) {
        zero[k] = 1;
        continue;
      }
      swapped.assign(p.begin(), p.end());
      swapped[pos] = it->second.replacement[0];
      swapped[pos + 1] = it->second.replacement[1];
      auto other = paths.find(swapped);
      if (!other)
        throw std::logic_error("commutation image missing from the path set");
      uf.unite(k, *other);
    }
  }
  std::vector<char> class_zero(n, 0);
  for (std::size_t k = 0; k < n; ++k)
    if (zero[k]) class_zero[uf.find(k)] = 1;
  Int classes = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (uf.find(k) == k && !class_zero[k]) ++classes;
  return classes;
}

// Exact rank of a set of sparse integer rows (the span of the relation
// vectors). Division-free: rows are combined by cross-multiplication and
// divided by their content, which is plain Gaussian elimination over Q in
// integer clothing. Pivot rows are kept reduced against later pivots so
// reduction chains stay short.
class SparseRankEliminator {
public:
  using Entry = std::pair<std::int32_t, Int>;
  using Row = std::vector<Entry>;  // sorted by index, no zero coefficients

  void add(Row r) {
    std::size_t scan = 0;
    while (scan < r.size()) {
      auto it = lead_.find(r[scan].first);
      if (it == lead_.end()) {
        ++scan;
        continue;
      }
      reduce_by(r, rows_[it->second]);
    }
    if (r.empty()) return;
    normalize(r);
    const std::int32_t lead = r[0].first;
    const std::int32_t pos = static_cast<std::int32_t>(rows_.size());
    for (std::size_t k = 1; k < r.size(); ++k) refs_[r[k].first].push_back(pos);
    rows_.push_back(std::move(r));
    lead_.emplace(lead, pos);
    ++rank_;

    // keep earlier pivot rows reduced against the new pivot
    auto rit = refs_.find(lead);
    if (rit == refs_.end()) return;
    std::vector<std::int32_t> touched = std::move(rit->second);
    refs_.erase(rit);
    for (std::int32_t p : touched) {
      if (p == pos) continue;
      Row& row = rows_[p];
      bool has = std::any_of(row.begin() + 1, row.end(),
                             [&](const Entry& e) { return e.first == lead; });
      if (!has) continue;  // stale reference
      reduce_by(row, rows_[pos]);
      normalize(row);
      for (std::size_t k = 1; k < row.size(); ++k) refs_[row[k].first].push_back(p);
    }
  }

  std::size_t rank() const { return rank_; }

private:
  // r <- lead(p) * r - r[p.lead] * p, eliminating p's leading index from r.
  static void reduce_by(Row& r, const Row& p) {
    const std::int32_t target = p[0].first;
    auto rit = std::lower_bound(r.begin(), r.end(), target,
                                [](const Entry& e, std::int32_t i) { return e.first < i; });
    const Int c = rit->second;
    const Int lp = p[0].second;
    Row out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
      if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
        out.emplace_back(r[i].first, Int(lp * r[i].second));
        ++i;
      } else if (i == r.size() || p[j].first < r[i].first) {
        out.emplace_back(p[j].first, Int(-c * p[j].second));
        ++j;
      } else {
        Int val = lp * r[i].second - c * p[j].second;
        if (val != 0) out.emplace_back(r[i].first, std::move(val));
        ++i;
        ++j;
      }
    }
    r = std::move(out);
  }

  // divide by the content, make the leading coefficient positive
  static void normalize(Row& r) {
    Int g = 0;
    for (const auto& e : r) {
      g = gcd(g, e.second);
      if (g == 1) break;
    }
    if (sgn(r[0].second) < 0) g = -g;
    if (g != 1)
      for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
  }

  std::vector<Row> rows_;
  std::unordered_map<std::int32_t, std::int32_t> lead_;
  std::unordered_map<std::int32_t, std::vector<std::int32_t>> refs_;
  std::size_t rank_ = 0;
};

}  // namespace detail

// Complete, duplicate-free list of the composable paths from `from` to `to`
// in lexicographic arrow-id order; includes the trivial path iff from == to.
inline std::vector<Path> enumerate_paths(const QuiverWithRelations& q, int from, int to,
                                         std::uint64_t budget = kDefaultPathBudget) {
  auto adj = detail::adjacency(q);
  detail::PathSet set = detail::enumerate_path_set(q, adj, from, to, budget);
  std::vector<Path> out(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    auto p = set[k];
    out[k] = Path{from, to, std::vector<int>(p.begin(), p.end())};
  }
  return out;
}

// Cartan matrix by closure: enumerate the paths of each vertex pair, merge
// along commutation relations with union-find, discard zero classes.
inline CartanMatrix cartan_matrix_normal_form(const QuiverWithRelations& q,
                                              std::uint64_t budget = kDefaultPathBudget) {
  if (q.stage != Stage::final)
    throw std::logic_error("cartan_matrix_normal_form: quiver not at the final stage");
  const int n = q.params.m - 1;
  auto adj = detail::adjacency(q);
  detail::check_budget_all_pairs(q, adj, budget);
  auto windows = detail::window_actions(q);
  CartanMatrix c(n, n);
  for (int src = 1; src <= n; ++src)
    for (int tgt = src; tgt <= n; ++tgt) {
      detail::PathSet paths = detail::enumerate_path_set(q, adj, src, tgt, budget);
      if (paths.size() == 0) continue;
      c(tgt - 1, src - 1) = detail::count_path_classes(paths, windows);
    }
  return c;
}

// Independent Cartan engine: for each vertex pair, span the relation ideal's
// degree piece inside the vector space with the paths as basis (one vector
// u*r*v per relation r and composable prefix/suffix pair) and subtract its
// rank from the path count.
inline CartanMatrix cartan_matrix_oracle(const QuiverWithRelations& q,
                                         std::uint64_t budget = kDefaultPathBudget) {
  if (q.stage != Stage::final)
    throw std::logic_error("cartan_matrix_oracle: quiver not at the final stage");
  const int m = q.params.m;
  const int n = m - 1;
  auto adj = detail::adjacency(q);
  detail::check_budget_all_pairs(q, adj, budget);

  std::vector<const Arrow*> arrow_by_id(static_cast<std::size_t>(m) * q.params.d(), nullptr);
  for (const auto& a : q.arrows) arrow_by_id[a.id] = &a;
  auto side_end = [&](const std::array<int, 2>& side) { return arrow_by_id[side[1]]->target; };

  // reachable[v][w]: some path v -> w exists (trivially true for v == w)
  std::vector<std::vector<char>> reachable(m, std::vector<char>(m, 0));
  for (int w = 1; w <= n; ++w) {
    reachable[w][w] = 1;
    for (int v = w - 1; v >= 1; --v)
      for (const Arrow* a : adj[v])
        if (a->target <= w && reachable[a->target][w]) {
          reachable[v][w] = 1;
          break;
        }
  }

  CartanMatrix c(n, n);
  std::vector<std::int32_t> spliced;
  for (int src = 1; src <= n; ++src) {
    for (int tgt = src; tgt <= n; ++tgt) {
      detail::PathSet basis = detail::enumerate_path_set(q, adj, src, tgt, budget);
      if (basis.size() == 0) continue;
      std::map<int, detail::PathSet> prefixes, suffixes;
      detail::SparseRankEliminator elim;
      for (const auto& r : q.relations) {
        if (r.status() == RelationStatus::vacuous) continue;
        const bool binomial = r.status() == RelationStatus::commutativity;
        const std::array<int, 2>& side = binomial ? r.left : r.surviving_side();
        const int rel_base = r.base;
        const int rel_end = side_end(side);
        if (rel_base < src || rel_end > tgt) continue;
        // both gates must pass before any enumeration
        if (!reachable[src][rel_base] || !reachable[rel_end][tgt]) continue;
        auto pit = prefixes.find(rel_base);
        if (pit == prefixes.end())
          pit = prefixes.emplace(rel_base,
                                 detail::enumerate_path_set(q, adj, src, rel_base, budget)).first;
        auto sit = suffixes.find(rel_end);
        if (sit == suffixes.end())
          sit = suffixes.emplace(rel_end,
                                 detail::enumerate_path_set(q, adj, rel_end, tgt, budget)).first;
        const detail::PathSet& pre = pit->second;
        const detail::PathSet& suf = sit->second;
        auto splice = [&](std::span<const std::int32_t> u, const std::array<int, 2>& s,
                          std::span<const std::int32_t> v) {
          spliced.clear();
          spliced.insert(spliced.end(), u.begin(), u.end());
          spliced.push_back(s[0]);
          spliced.push_back(s[1]);
          spliced.insert(spliced.end(), v.begin(), v.end());
          auto idx = basis.find(spliced);
          if (!idx) throw std::logic_error("spliced relation path missing from basis");
          return static_cast<std::int32_t>(*idx);
        };
        for (std::size_t ui = 0; ui < pre.size(); ++ui)
          for (std::size_t vi = 0; vi < suf.size(); ++vi) {
            detail::SparseRankEliminator::Row row;
            if (binomial) {
              std::int32_t x = splice(pre[ui], r.left, suf[vi]);
              std::int32_t y = splice(pre[ui], r.right, suf[vi]);
              if (x == y) continue;
              if (x > y) std::swap(x, y);
              row.emplace_back(x, Int(1));
              row.emplace_back(y, Int(-1));
            } else {
              row.emplace_back(splice(pre[ui], side, suf[vi]), Int(1));
            }
            elim.add(std::move(row));
          }
      }
      c(tgt - 1, src - 1) = Int(static_cast<unsigned long>(basis.size() - elim.rank()));
    }
  }
  return c;
}

}  // namespace khbound
