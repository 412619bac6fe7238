#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oimlofa {

using NodeId = std::uint32_t;

struct Edge {
  NodeId target;
  double prob;
};

struct EdgeSpec {
  NodeId source;
  NodeId target;
  double prob;

  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

/// Immutable directed graph with per-edge activation probabilities, stored as
/// compressed adjacency (out-edges of each node sorted by target id).
///
/// Invariants: targets < node_count, prob in [0,1], no self loops, at most one
/// edge per ordered pair. Optional node labels hold the original ids of a
/// loaded file.
class Graph {
 public:
  Graph() = default;

  /// Validates and builds. Throws Error on any invariant violation.
  static Graph from_edges(std::size_t node_count, std::span<const EdgeSpec> edges,
                          std::vector<std::string> labels = {});

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> out_edges(NodeId u) const noexcept {
    return {edges_.data() + offsets_[u], edges_.data() + offsets_[u + 1]};
  }

  std::size_t in_degree(NodeId v) const noexcept { return in_degree_[v]; }

  /// All edges in (source, target) order.
  std::vector<EdgeSpec> edges() const;

  bool has_labels() const noexcept { return !labels_.empty(); }
  /// Original id of `u`, or its decimal index when the graph is unlabeled.
  std::string label(NodeId u) const;
  /// Dense id for an original label (or decimal index when unlabeled).
  std::optional<NodeId> find(std::string_view label) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::size_t node_count_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Edge> edges_;
  std::vector<std::size_t> in_degree_;
  std::vector<std::string> labels_;
};

/// How edge probabilities are assigned after loading.
struct ProbabilityMode {
  enum class Kind { file, constant, weighted_cascade };
  Kind kind = Kind::file;
  double constant = 0.0;

  /// Parses "file", "const:<p>" or "wc".
  static ProbabilityMode parse(std::string_view text);
  std::string to_string() const;
};

/// Parses edge-list text: "src dst [prob]" per line, '#' comments, blank
/// lines ignored, LF or CRLF. Node tokens are remapped to dense ids in order
/// of first appearance.
Graph parse_edge_list(std::istream& in, std::optional<double> default_prob = std::nullopt);
Graph load_edge_list(const std::string& path, std::optional<double> default_prob = std::nullopt);

/// Loads and applies a probability mode. In `file` mode every line must carry
/// a probability; the other modes overwrite whatever the file holds.
Graph load_graph(const std::string& path, const ProbabilityMode& mode);

void write_edge_list(std::ostream& out, const Graph& graph);

Graph with_constant_probability(const Graph& graph, double p);
/// p(u,v) = 1 / in_degree(v).
Graph with_weighted_cascade(const Graph& graph);

Graph make_line_graph(std::size_t n, double p);
Graph make_star_graph(std::size_t leaves, double p);
/// Preferential-attachment graph: each new node links to `attach` distinct
/// existing nodes; every undirected link becomes two directed edges.
Graph make_scale_free_graph(std::size_t n, std::size_t attach, double p, std::uint64_t seed);

}  // namespace oimlofa
