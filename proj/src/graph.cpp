#include "oimlofa/graph.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "oimlofa/error.hpp"
#include "oimlofa/rng.hpp"

namespace oimlofa {

namespace {

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                std::string(what) + ": probability " + std::to_string(p) + " outside [0,1]");
  }
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  // from_chars for double is not available on every libstdc++ we target.
  std::string buf(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  return v;
}

}  // namespace

Graph Graph::from_edges(std::size_t node_count, std::span<const EdgeSpec> edges,
                        std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != node_count) {
    throw Error(ErrorKind::invalid_argument, "label table size does not match node count");
  }
  std::vector<EdgeSpec> sorted(edges.begin(), edges.end());
  for (const auto& e : sorted) {
    if (e.source >= node_count || e.target >= node_count) {
      throw Error(ErrorKind::invalid_argument, "edge endpoint out of range");
    }
    if (e.source == e.target) {
      throw Error(ErrorKind::invalid_argument, "self-loop on node " + std::to_string(e.source));
    }
    check_prob(e.prob, "edge");
  }
  std::sort(sorted.begin(), sorted.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].source == sorted[i - 1].source && sorted[i].target == sorted[i - 1].target) {
      throw Error(ErrorKind::invalid_argument, "duplicate edge " + std::to_string(sorted[i].source) +
                                                   " -> " + std::to_string(sorted[i].target));
    }
  }

  Graph g;
  g.node_count_ = node_count;
  g.offsets_.assign(node_count + 1, 0);
  g.in_degree_.assign(node_count, 0);
  g.edges_.reserve(sorted.size());
  for (const auto& e : sorted) {
    ++g.offsets_[e.source + 1];
    ++g.in_degree_[e.target];
    g.edges_.push_back({e.target, e.prob});
  }
  for (std::size_t u = 0; u < node_count; ++u) g.offsets_[u + 1] += g.offsets_[u];
  g.labels_ = std::move(labels);
  return g;
}

std::vector<EdgeSpec> Graph::edges() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (NodeId u = 0; u < node_count_; ++u) {
    for (const Edge& e : out_edges(u)) out.push_back({u, e.target, e.prob});
  }
  return out;
}

std::string Graph::label(NodeId u) const {
  return labels_.empty() ? std::to_string(u) : labels_[u];
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  if (labels_.empty()) {
    NodeId id = 0;
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), id);
    if (ec != std::errc{} || ptr != label.data() + label.size() || id >= node_count_) {
      return std::nullopt;
    }
    return id;
  }
  for (NodeId u = 0; u < labels_.size(); ++u) {
    if (labels_[u] == label) return u;
  }
  return std::nullopt;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.node_count_ != b.node_count_ || a.offsets_ != b.offsets_ || a.labels_ != b.labels_) {
    return false;
  }
  return std::equal(a.edges_.begin(), a.edges_.end(), b.edges_.begin(), b.edges_.end(),
                    [](const Edge& x, const Edge& y) {
                      return x.target == y.target && x.prob == y.prob;
                    });
}

ProbabilityMode ProbabilityMode::parse(std::string_view text) {
  if (text == "file") return {};
  if (text == "wc") return {Kind::weighted_cascade, 0.0};
  if (text.starts_with("const:")) {
    auto p = parse_double(text.substr(6));
    if (!p) throw Error(ErrorKind::parse, "bad probability in mode '" + std::string(text) + "'");
    check_prob(*p, "const mode");
    return {Kind::constant, *p};
  }
  throw Error(ErrorKind::invalid_argument,
              "unknown probability mode '" + std::string(text) + "' (expected file, const:<p>, wc)");
}

std::string ProbabilityMode::to_string() const {
  switch (kind) {
    case Kind::file:
      return "file";
    case Kind::weighted_cascade:
      return "wc";
    case Kind::constant: {
      std::ostringstream os;
      os.precision(17);
      os << "const:" << constant;
      return os.str();
    }
  }
  return "file";
}

Graph parse_edge_list(std::istream& in, std::optional<double> default_prob) {
  if (default_prob) check_prob(*default_prob, "default probability");

  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<EdgeSpec> edges;
  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_ws(line);
    if (fields.empty() || fields[0].starts_with('#')) continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 2 || fields.size() > 3) throw fail("expected 'src dst [prob]'");

    double prob;
    if (fields.size() == 3) {
      auto p = parse_double(fields[2]);
      if (!p) throw fail("non-numeric probability '" + std::string(fields[2]) + "'");
      if (!(*p >= 0.0 && *p <= 1.0)) throw fail("probability outside [0,1]");
      prob = *p;
    } else if (default_prob) {
      prob = *default_prob;
    } else {
      throw fail("missing probability column and no default probability");
    }
    const NodeId src = intern(fields[0]);
    const NodeId dst = intern(fields[1]);
    if (src == dst) throw fail("self-loop");
    edges.push_back({src, dst, prob});
  }

  // Files whose ids are already exactly 0..n-1 keep them; only sparse or
  // non-numeric ids are remapped.
  std::vector<NodeId> dense(labels.size());
  bool already_dense = true;
  for (NodeId u = 0; u < labels.size() && already_dense; ++u) {
    NodeId id = 0;
    const auto& s = labels[u];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
    already_dense = ec == std::errc{} && ptr == s.data() + s.size() && id < labels.size() &&
                    std::to_string(id) == s;
    if (already_dense) dense[u] = id;
  }
  if (already_dense) {
    for (auto& e : edges) {
      e.source = dense[e.source];
      e.target = dense[e.target];
    }
    labels.clear();
  }

  try {
    return Graph::from_edges(ids.size(), edges, std::move(labels));
  } catch (const Error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
}

Graph load_edge_list(const std::string& path, std::optional<double> default_prob) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open graph file '" + path + "'");
  return parse_edge_list(in, default_prob);
}

Graph load_graph(const std::string& path, const ProbabilityMode& mode) {
  switch (mode.kind) {
    case ProbabilityMode::Kind::file:
      return load_edge_list(path);
    case ProbabilityMode::Kind::constant:
      return with_constant_probability(load_edge_list(path, 1.0), mode.constant);
    case ProbabilityMode::Kind::weighted_cascade:
      return with_weighted_cascade(load_edge_list(path, 1.0));
  }
  return {};
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  char buf[32];
  for (const auto& e : graph.edges()) {
    auto res = std::to_chars(buf, buf + sizeof buf, e.prob);
    out << graph.label(e.source) << ' ' << graph.label(e.target) << ' '
        << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

namespace {

std::vector<std::string> labels_of(const Graph& g) {
  if (!g.has_labels()) return {};
  std::vector<std::string> out;
  out.reserve(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) out.push_back(g.label(u));
  return out;
}

}  // namespace

Graph with_constant_probability(const Graph& graph, double p) {
  check_prob(p, "constant mode");
  auto edges = graph.edges();
  for (auto& e : edges) e.prob = p;
  return Graph::from_edges(graph.node_count(), edges, labels_of(graph));
}

Graph with_weighted_cascade(const Graph& graph) {
  auto edges = graph.edges();
  for (auto& e : edges) e.prob = 1.0 / static_cast<double>(graph.in_degree(e.target));
  return Graph::from_edges(graph.node_count(), edges, labels_of(graph));
}

Graph make_line_graph(std::size_t n, double p) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "line graph needs n >= 1");
  check_prob(p, "line graph");
  std::vector<EdgeSpec> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, p});
  return Graph::from_edges(n, edges);
}

Graph make_star_graph(std::size_t leaves, double p) {
  check_prob(p, "star graph");
  std::vector<EdgeSpec> edges;
  for (NodeId i = 1; i <= leaves; ++i) edges.push_back({0, i, p});
  return Graph::from_edges(leaves + 1, edges);
}

Graph make_scale_free_graph(std::size_t n, std::size_t attach, double p, std::uint64_t seed) {
  check_prob(p, "scale-free graph");
  if (attach < 1 || n <= attach) {
    throw Error(ErrorKind::invalid_argument, "scale-free graph needs 1 <= attach < n");
  }
  Rng rng(seed);
  std::vector<EdgeSpec> edges;
  // Endpoint multiset: sampling uniformly from it is degree-proportional.
  std::vector<NodeId> endpoints;
  // Seed clique over the first attach+1 nodes.
  for (NodeId u = 0; u <= attach; ++u) {
    for (NodeId v = u + 1; v <= attach; ++v) {
      edges.push_back({u, v, p});
      edges.push_back({v, u, p});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> chosen;
  for (NodeId u = static_cast<NodeId>(attach + 1); u < n; ++u) {
    chosen.clear();
    while (chosen.size() < attach) {
      const NodeId v = endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
    }
    for (NodeId v : chosen) {
      edges.push_back({u, v, p});
      edges.push_back({v, u, p});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace oimlofa
