#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tbcavi/rng.hpp"

namespace tbcavi {

using NodeId = std::int32_t;

struct Edge {
  NodeId u;
  NodeId v;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph stored as sorted neighbor lists (CSR).
/// Node ids are dense in [0, n). No self-loops, no parallel edges.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), offsets_(n + 1, 0) {}

  struct BuildStats {
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
  };

  /// Builds from an arbitrary edge list. Self-loops and repeated pairs (in
  /// either orientation) are dropped and counted in `stats`. Throws
  /// DomainError on ids outside [0, n).
  static Graph from_edges(std::size_t n, std::span<const Edge> edges, BuildStats* stats = nullptr);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  bool has_edge(NodeId i, NodeId j) const;

  /// Canonical edge list: u < v, lexicographically sorted.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

struct DegreeStats {
  std::vector<std::size_t> degrees;
  double avg = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
};

DegreeStats degree_stats(const Graph& g);

enum class IdMapping {
  identity,  // n = 1 + max id; gaps become isolated nodes
  remap,     // sorted distinct ids mapped to 0..m-1
};

struct EdgeListResult {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
  // original_ids[dense id] = id as written in the file (remap mode only).
  std::vector<std::int64_t> original_ids;

  std::size_t dropped() const noexcept { return self_loops_dropped + duplicates_dropped; }
};

/// Parses a whitespace-separated edge list. Lines starting with '#' are
/// comments, except the directive "# nodes N" which raises n to at least N
/// (identity mode only) so trailing isolated nodes survive a round trip.
EdgeListResult load_edge_list(std::string_view text, IdMapping mapping = IdMapping::identity);
EdgeListResult load_edge_list_file(const std::filesystem::path& path,
                                   IdMapping mapping = IdMapping::identity);

/// Writes "# nodes N" followed by the canonical edge list.
std::string serialize_edge_list(const Graph& g);

struct LabelEntry {
  std::int64_t id;
  int label;
};

/// Parses "id label" lines ('#' comments allowed). Labels must be >= 0.
std::vector<LabelEntry> load_labels(std::string_view text);
std::vector<LabelEntry> load_labels_file(const std::filesystem::path& path);

/// Bernoulli edge split: each edge goes to `first` independently with
/// probability tau, otherwise to `second`.
std::pair<Graph, Graph> split_edges(const Graph& g, double tau, Rng& rng);

struct Subgraph {
  Graph graph;
  std::vector<NodeId> parent_ids;  // parent_ids[new id] = id in the source graph
};

Subgraph largest_connected_component(const Graph& g);

/// Relabels node i as perm[i].
Graph permute_nodes(const Graph& g, std::span<const NodeId> perm);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace tbcavi
