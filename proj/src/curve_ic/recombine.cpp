#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "dlkit/curve_ic/curve_ic.hpp"
#include "dlkit/error.hpp"

namespace dlkit::curve_ic {

std::vector<PartialRelation> recombine_single_lp(const std::vector<PartialRelation>& partials, u64 ell) {
  std::map<u32, std::vector<const PartialRelation*>> groups;
  for (const auto& p : partials) {
    if (p.lp.size() == 1) groups[p.lp[0].first].push_back(&p);
  }
  std::vector<PartialRelation> out;
  for (const auto& [lp, group] : groups) {
    const PartialRelation* first = group[0];
    const i64 c1 = first->lp[0].second;
    for (std::size_t i = 1; i < group.size(); ++i) {
      out.push_back(combine({group[i], first}, {c1, -static_cast<i64>(group[i]->lp[0].second)}, ell));
    }
  }
  return out;
}

namespace {

// Signed graph on large primes; vertex 0 is the "1" node, which absorbs any
// coefficient. A combination is a list of (edge, coefficient).
class LpGraph {
 public:
  struct Edge {
    int x, y;      // x may be 0
    int cx, cy;    // lp coefficients at x and y (cx unused when x == 0)
    std::size_t rel;
  };
  using Combo = std::vector<std::pair<int, i64>>;

  int vertex(u32 lp) {
    auto [it, inserted] = ids_.emplace(lp, static_cast<int>(adj_.size()));
    if (inserted) add_vertex();
    return it->second;
  }

  LpGraph() { add_vertex(); }

  // Returns relations (as combos) emitted by this edge.
  std::vector<Combo> add_edge(Edge e) {
    std::vector<Combo> emitted;
    const int id = static_cast<int>(edges_.size());
    edges_.push_back(e);
    used_[e.x] = used_[e.y] = true;
    int rx = find(e.x), ry = find(e.y);
    if (rx == ry) {
      if (auto c = close_cycle(id)) emitted.push_back(std::move(*c));
      return emitted;
    }
    adj_[e.x].push_back({e.y, id});
    adj_[e.y].push_back({e.x, id});
    auto sx = std::move(stored_[rx]);
    auto sy = std::move(stored_[ry]);
    stored_[rx].reset();
    stored_[ry].reset();
    parent_[rx] = ry;
    const bool zero = find(0) == ry;
    if (sx && sy) {
      emitted.push_back(cancel_with(std::move(*sx), *sy));
      stored_[ry] = std::move(sy);
    } else if (sx || sy) {
      auto& s = sx ? sx : sy;
      if (zero) {
        emitted.push_back(move_residual(std::move(*s), 0));
      } else {
        stored_[ry] = std::move(s);
      }
    }
    return emitted;
  }

  const Edge& edge(int id) const { return edges_[id]; }
  std::size_t edges() const { return edges_.size(); }
  std::size_t vertices() const { return static_cast<std::size_t>(std::count(used_.begin(), used_.end(), true)); }
  std::size_t components() {
    std::set<int> roots;
    for (std::size_t v = 0; v < used_.size(); ++v) {
      if (used_[v]) roots.insert(find(static_cast<int>(v)));
    }
    return roots.size();
  }
  std::size_t unbalanced() const {
    return static_cast<std::size_t>(std::count_if(stored_.begin(), stored_.end(), [](const auto& s) { return s.has_value(); }));
  }

 private:
  struct Stored {
    Combo combo;
    int vertex;
    i64 residual;
  };

  void add_vertex() {
    adj_.emplace_back();
    parent_.push_back(static_cast<int>(parent_.size()));
    stored_.emplace_back();
    used_.push_back(false);
  }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  int coeff_at(int id, int v) const {
    const auto& e = edges_[id];
    if (v == 0) return 0;
    return e.x == v ? e.cx : e.cy;
  }

  int other(int id, int v) const { return edges_[id].x == v ? edges_[id].y : edges_[id].x; }

  // Forest path from s to t as (edges in order).
  std::vector<int> path(int s, int t) const {
    std::vector<int> via(adj_.size(), -1);
    std::vector<bool> seen(adj_.size(), false);
    std::deque<int> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      if (v == t) break;
      for (const auto& [w, id] : adj_[v]) {
        if (seen[w]) continue;
        seen[w] = true;
        via[w] = id;
        queue.push_back(w);
      }
    }
    std::vector<int> out;
    for (int v = t; v != s; v = other(via[v], v)) out.push_back(via[v]);
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Walk from `start` along `edges`, choosing multipliers so interior
  // vertices cancel; the first edge gets multiplier `first`. Returns the
  // final vertex and its leftover coefficient.
  std::pair<int, i64> chain(int start, const std::vector<int>& edges, i64 first, Combo& out) const {
    int v = start;
    i64 lambda = first;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const int id = edges[i];
      out.push_back({id, lambda});
      const int w = other(id, v);
      if (i + 1 < edges.size()) lambda = -lambda * coeff_at(id, w) * coeff_at(edges[i + 1], w);
      v = w;
    }
    return {v, edges.empty() ? 0 : lambda * coeff_at(edges.back(), v)};
  }

  // Adds 2 * path from the residual vertex to `target`, cancelling the residual there.
  Combo move_residual(Stored s, int target) const {
    if (s.vertex == target) return std::move(s.combo);
    auto p = path(s.vertex, target);
    const i64 first = -(s.residual / 2) * coeff_at(p.front(), s.vertex);
    Combo chain_combo;
    chain(s.vertex, p, first, chain_combo);
    for (auto& [id, c] : chain_combo) s.combo.push_back({id, 2 * c});
    return std::move(s.combo);
  }

  // Residual left at the far end of the moved path.
  Combo cancel_with(Stored s, const Stored& keep) const {
    Combo combo = std::move(s.combo);
    i64 residual = s.residual;
    if (s.vertex != keep.vertex) {
      auto p = path(s.vertex, keep.vertex);
      const i64 first = -(s.residual / 2) * coeff_at(p.front(), s.vertex);
      Combo chain_combo;
      auto [end, left] = chain(s.vertex, p, first, chain_combo);
      (void)end;
      for (auto& [id, c] : chain_combo) combo.push_back({id, 2 * c});
      residual = 2 * left;
    }
    const i64 sign = residual == -keep.residual ? 1 : -1;
    for (const auto& [id, c] : keep.combo) combo.push_back({id, sign * c});
    return combo;
  }

  std::optional<Combo> close_cycle(int id) {
    const auto& e = edges_[id];
    auto p = path(e.y, e.x);
    std::vector<int> cyc{id};
    cyc.insert(cyc.end(), p.begin(), p.end());
    // vertex sequence x, y, ..., x
    std::vector<int> verts{e.x};
    for (int eid : cyc) verts.push_back(other(eid, verts.back()));
    auto zero = std::find(verts.begin(), verts.end() - 1, 0);
    Combo combo;
    if (zero != verts.end() - 1) {
      const std::size_t k = static_cast<std::size_t>(zero - verts.begin());
      std::rotate(cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(k), cyc.end());
      chain(0, cyc, 1, combo);
      return combo;
    }
    auto [end, left] = chain(e.x, cyc, 1, combo);
    (void)end;
    const i64 residual = left + coeff_at(cyc.front(), e.x);
    if (residual == 0) return combo;
    Stored s{std::move(combo), e.x, residual};
    const int root = find(e.x);
    if (find(0) == root) return move_residual(std::move(s), 0);
    if (stored_[root]) return cancel_with(std::move(s), *stored_[root]);
    stored_[root] = std::move(s);
    return std::nullopt;
  }

  std::unordered_map<u32, int> ids_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<int> parent_;
  std::vector<std::optional<Stored>> stored_;
  std::vector<bool> used_;
  std::vector<Edge> edges_;
};

}  // namespace

std::vector<PartialRelation> recombine_double_lp(const std::vector<PartialRelation>& partials, u64 ell,
                                                 LpGraphStats* stats) {
  LpGraph graph;
  std::set<std::pair<u32, u32>> seen_pairs;
  LpGraphStats st;
  std::vector<PartialRelation> out;
  for (std::size_t i = 0; i < partials.size(); ++i) {
    const auto& p = partials[i];
    LpGraph::Edge e{};
    e.rel = i;
    if (p.lp.size() == 1) {
      e.x = 0;
      e.cx = 0;
      e.y = graph.vertex(p.lp[0].first);
      e.cy = p.lp[0].second;
    } else if (p.lp.size() == 2) {
      auto key = std::minmax(p.lp[0].first, p.lp[1].first);
      if (!seen_pairs.insert(key).second) {
        ++st.duplicates;
        continue;
      }
      e.x = graph.vertex(p.lp[0].first);
      e.cx = p.lp[0].second;
      e.y = graph.vertex(p.lp[1].first);
      e.cy = p.lp[1].second;
    } else {
      continue;
    }
    for (const auto& combo : graph.add_edge(e)) {
      std::vector<const PartialRelation*> rels;
      std::vector<i64> coeffs;
      for (const auto& [id, c] : combo) {
        rels.push_back(&partials[graph.edge(id).rel]);
        coeffs.push_back(c);
      }
      auto rel = combine(rels, coeffs, ell);
      if (!rel.lp.empty()) throw Error(ErrorCode::VerificationFailed, "large primes did not cancel in a cycle");
      out.push_back(std::move(rel));
    }
  }
  st.edges = graph.edges();
  st.vertices = graph.vertices();
  st.components = graph.components();
  st.unbalanced = graph.unbalanced();
  if (stats) *stats = st;
  return out;
}

}  // namespace dlkit::curve_ic
