#include "arbgas/forest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arbgas {

double ForestWeight::value() const { return std::exp(log_weight); }

ForestState::ForestState(const Graph& g) : graph_(&g), adj_(g.adjacency()) {
  present_.assign((g.edge_count() + 63) / 64, 0);
  comp_.resize(g.n);
  // Labels are abstract ids (not vertex ids): a split hands the smaller side
  // a fresh label from the free list, so labels never collide. At most n
  // components exist, and each split consumes one label while each merge
  // releases one, so 2n ids suffice.
  size_.assign(2 * g.n, 0);
  free_labels_.clear();
  for (int i = 2 * g.n - 1; i >= g.n; --i) free_labels_.push_back(i);
  for (int i = 0; i < g.n; ++i) {
    comp_[i] = i;
    size_[i] = 1;
  }
  edges_present_ = 0;
}

void ForestState::set_edge(int e, bool on) {
  uint64_t bit = uint64_t(1) << (e & 63);
  if (on)
    present_[e >> 6] |= bit;
  else
    present_[e >> 6] &= ~bit;
  edges_present_ += on ? 1 : -1;
}

int ForestState::collect_side(int start, int skip_edge, std::vector<int>& out) const {
  size_t begin = out.size();
  out.push_back(start);
  scratch_parent_.clear();
  scratch_parent_.push_back(-1);
  for (size_t head = begin; head < out.size(); ++head) {
    int v = out[head];
    int pv = scratch_parent_[head - begin];
    for (auto [w, e] : adj_[v]) {
      if (e == skip_edge || !edge_present(e) || w == pv) continue;
      out.push_back(w);
      scratch_parent_.push_back(v);
    }
  }
  return static_cast<int>(out.size() - begin);
}

int ForestState::smaller_side(int e, std::vector<int>& out, bool& u_side) const {
  const Graph::Edge& ed = graph_->edges[e];
  // Two interleaved tree searches; the one that exhausts first is the
  // smaller side. Parent links replace a visited array (the subgraph is a
  // tree, so each vertex is reached exactly once).
  scratch_a_.clear();
  scratch_b_.clear();
  scratch_pa_.clear();
  scratch_pb_.clear();
  scratch_a_.push_back(ed.u);
  scratch_pa_.push_back(ed.v);  // pretend parent across e, so e is never crossed
  scratch_b_.push_back(ed.v);
  scratch_pb_.push_back(ed.u);
  size_t ha = 0, hb = 0;
  for (;;) {
    if (ha >= scratch_a_.size()) {
      out = scratch_a_;
      u_side = true;
      return static_cast<int>(out.size());
    }
    {
      int v = scratch_a_[ha];
      int pv = scratch_pa_[ha];
      ++ha;
      for (auto [w, ee] : adj_[v]) {
        if (ee == e || !edge_present(ee) || w == pv) continue;
        scratch_a_.push_back(w);
        scratch_pa_.push_back(v);
      }
    }
    if (hb >= scratch_b_.size()) {
      out = scratch_b_;
      u_side = false;
      return static_cast<int>(out.size());
    }
    {
      int v = scratch_b_[hb];
      int pv = scratch_pb_[hb];
      ++hb;
      for (auto [w, ee] : adj_[v]) {
        if (ee == e || !edge_present(ee) || w == pv) continue;
        scratch_b_.push_back(w);
        scratch_pb_.push_back(v);
      }
    }
  }
}

std::pair<int, int> ForestState::split_sizes(int e) const {
  if (!edge_present(e)) throw std::invalid_argument("split_sizes: edge not present");
  std::vector<int> side;
  bool u_side = false;
  int s = smaller_side(e, side, u_side);
  int total = size_[comp_[graph_->edges[e].u]];
  int su = u_side ? s : total - s;
  return {su, total - su};
}

ToggleOutcome ForestState::toggle(int e) {
  const Graph::Edge& ed = graph_->edges[e];
  if (edge_present(e)) {
    std::vector<int> side;
    bool u_side = false;
    int s = smaller_side(e, side, u_side);
    int old_label = comp_[ed.u];
    int total = size_[old_label];
    set_edge(e, false);
    int fresh = free_labels_.back();
    free_labels_.pop_back();
    for (int v : side) comp_[v] = fresh;
    size_[fresh] = s;
    size_[old_label] = total - s;  // big side keeps the old label
    int su = u_side ? s : total - s;
    return {ToggleKind::Removed, su, total - su};
  }
  int ru = comp_[ed.u], rv = comp_[ed.v];
  if (ru == rv) return {ToggleKind::Rejected, 0, 0};
  int su = size_[ru], sv = size_[rv];
  int keep = (su >= sv) ? ru : rv;
  int drop = (su >= sv) ? rv : ru;
  int small_start = (su >= sv) ? ed.v : ed.u;
  std::vector<int> side;
  collect_side(small_start, -1, side);
  for (int v : side) comp_[v] = keep;
  size_[keep] = su + sv;
  size_[drop] = 0;
  free_labels_.push_back(drop);
  set_edge(e, true);
  return {ToggleKind::Added, su + sv, 0};
}

ForestWeight ForestState::weight(double beta, double h) const {
  ForestWeight w;
  w.edge_count = edges_present_;
  std::vector<char> seen(size_.size(), 0);
  for (int v = 0; v < graph_->n; ++v) {
    int r = comp_[v];
    if (!seen[r]) {
      seen[r] = 1;
      w.tree_sizes.push_back(size_[r]);
    }
  }
  std::sort(w.tree_sizes.begin(), w.tree_sizes.end(), std::greater<int>());
  double lw = 0.0;
  if (w.edge_count > 0) lw += w.edge_count * std::log(beta);
  for (int s : w.tree_sizes) lw += std::log1p(h * s);
  w.log_weight = lw;
  return w;
}

std::vector<int> ForestState::edge_list() const {
  std::vector<int> out;
  for (int e = 0; e < graph_->edge_count(); ++e)
    if (edge_present(e)) out.push_back(e);
  return out;
}

void ForestState::load_edges(const std::vector<int>& edge_indices) {
  *this = ForestState(*graph_);
  for (int e : edge_indices) {
    if (e < 0 || e >= graph_->edge_count()) throw std::invalid_argument("load_edges: bad edge index");
    if (toggle(e).kind != ToggleKind::Added) throw std::invalid_argument("load_edges: edge set contains a cycle");
  }
}

bool ForestState::check_consistency() const {
  int n = graph_->n;
  std::vector<int> label(n, -1);
  std::vector<int> stack;
  int comps = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    ++comps;
    stack.push_back(s);
    label[s] = s;
    std::vector<int> members;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (auto [w, e] : adj_[v]) {
        if (!edge_present(e)) continue;
        if (label[w] < 0) {
          label[w] = s;
          stack.push_back(w);
        }
      }
    }
    int rep = comp_[s];
    if (size_[rep] != static_cast<int>(members.size())) return false;
    for (int v : members)
      if (comp_[v] != rep) return false;
  }
  return edges_present_ == n - comps;
}

}  // namespace arbgas
