#pragma once

#include <cstdint>
#include <vector>

#include "arbgas/lattice.hpp"

namespace arbgas {

enum class ToggleKind { Added, Removed, Rejected };

struct ToggleOutcome {
  ToggleKind kind = ToggleKind::Rejected;
  // Added: size_a = merged tree size. Removed: (size_a, size_b) are the sizes
  // of the trees containing the edge's (u, v) endpoints after the split.
  int size_a = 0;
  int size_b = 0;
};

// Unnormalised arboreal-gas weight beta^k * prod_T (1 + h|V(T)|), kept in log
// form together with the factored data it came from.
struct ForestWeight {
  double log_weight = 0.0;
  int edge_count = 0;
  std::vector<int> tree_sizes;  // sorted descending
  double value() const;
};

// Acyclic edge subset of a fixed graph with incremental connectivity.
// Components are labelled by a representative vertex; merges and splits
// relabel the smaller side, splits size the smaller side by bidirectional
// search before relabelling.
class ForestState {
 public:
  explicit ForestState(const Graph& g);

  const Graph& graph() const { return *graph_; }
  bool edge_present(int e) const { return (present_[e >> 6] >> (e & 63)) & 1; }
  int edge_count() const { return edges_present_; }
  int component(int x) const { return comp_[x]; }
  int tree_size(int x) const { return size_[comp_[x]]; }
  bool same_tree(int x, int y) const { return comp_[x] == comp_[y]; }

  ToggleOutcome toggle(int e);

  // Tree sizes on the two sides of edge e if it were removed; e must be
  // present. Returns (size of u-side, size of v-side).
  std::pair<int, int> split_sizes(int e) const;

  ForestWeight weight(double beta, double h) const;

  // Sorted indices of present edges (the serialization format).
  std::vector<int> edge_list() const;
  void load_edges(const std::vector<int>& edge_indices);  // resets, then adds; throws on cycle

  // Recompute connectivity from scratch and compare; used by tests and the
  // debug checksum path.
  bool check_consistency() const;

 private:
  void set_edge(int e, bool on);
  // Search the tree side containing `start`, not crossing `skip_edge`;
  // appends visited vertices to out. Returns its size.
  int collect_side(int start, int skip_edge, std::vector<int>& out) const;
  // Bidirectional variant: finds the smaller of the two sides of present
  // edge e, filling `out` with exactly that side's vertices.
  int smaller_side(int e, std::vector<int>& out, bool& u_side) const;

  const Graph* graph_;
  std::vector<std::vector<std::pair<int, int>>> adj_;  // (neighbor, edge)
  std::vector<uint64_t> present_;
  std::vector<int> comp_;          // vertex -> component label
  std::vector<int> size_;          // label -> size (0 if label free)
  std::vector<int> free_labels_;
  int edges_present_ = 0;

  mutable std::vector<int> scratch_a_, scratch_b_, scratch_pa_, scratch_pb_, scratch_parent_;
};

}  // namespace arbgas
