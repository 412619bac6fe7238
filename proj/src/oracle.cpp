#include "oimlofa/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "oimlofa/cascade.hpp"
#include "oimlofa/error.hpp"
#include "oimlofa/rng.hpp"

namespace oimlofa {

double exact_expected_activated(const Graph& graph, std::span<const NodeId> seeds) {
  const std::size_t n = graph.node_count();
  for (NodeId s : seeds) {
    if (s >= n) throw Error(ErrorKind::invalid_argument, "seed out of range");
  }

  // Per node: (target, random-edge index or -1 for certain edges).
  std::vector<std::vector<std::pair<NodeId, int>>> live(n);
  std::vector<double> probs;
  for (NodeId u = 0; u < n; ++u) {
    for (const Edge& e : graph.out_edges(u)) {
      if (e.prob <= 0.0) continue;
      if (e.prob >= 1.0) {
        live[u].emplace_back(e.target, -1);
      } else {
        live[u].emplace_back(e.target, static_cast<int>(probs.size()));
        probs.push_back(e.prob);
      }
    }
  }
  if (probs.size() > kMaxRandomEdges) {
    throw Error(ErrorKind::too_large, "exact enumeration over " + std::to_string(probs.size()) +
                                          " random edges exceeds the cap of " +
                                          std::to_string(kMaxRandomEdges));
  }

  std::vector<char> seen(n);
  std::vector<NodeId> stack;
  double expected = 0.0;
  const std::uint64_t realizations = std::uint64_t{1} << probs.size();
  for (std::uint64_t mask = 0; mask < realizations; ++mask) {
    double weight = 1.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      weight *= (mask >> i) & 1 ? probs[i] : 1.0 - probs[i];
    }
    if (weight == 0.0) continue;
    std::fill(seen.begin(), seen.end(), 0);
    stack.clear();
    std::size_t reached = 0;
    for (NodeId s : seeds) {
      if (!seen[s]) {
        seen[s] = 1;
        stack.push_back(s);
        ++reached;
      }
    }
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (auto [v, idx] : live[u]) {
        if (seen[v] || (idx >= 0 && !((mask >> idx) & 1))) continue;
        seen[v] = 1;
        stack.push_back(v);
        ++reached;
      }
    }
    expected += weight * static_cast<double>(reached);
  }
  return expected;
}

double exact_spread(const Graph& graph, std::span<const NodeId> seeds) {
  if (graph.node_count() == 0) return 0.0;
  return exact_expected_activated(graph, seeds) / static_cast<double>(graph.node_count());
}

namespace {

std::uint64_t count_sets_up_to(std::size_t n, std::size_t k) {
  // Sum of C(n, s) for s <= k, saturating just past the cap.
  std::uint64_t total = 1;
  std::uint64_t c = 1;
  for (std::size_t s = 1; s <= k && s <= n; ++s) {
    c = c * (n - s + 1) / s;
    total += c;
    if (total > kMaxBruteForceSets) return kMaxBruteForceSets + 1;
  }
  return total;
}

std::vector<double> prefix_gains(const Graph& graph, const std::vector<NodeId>& set) {
  std::vector<double> gains;
  std::vector<NodeId> prefix;
  double prev = 0.0;
  for (NodeId u : set) {
    prefix.push_back(u);
    const double value = exact_spread(graph, prefix);
    gains.push_back(value - prev);
    prev = value;
  }
  return gains;
}

}  // namespace

OracleResult brute_force_best(const Graph& graph, std::size_t k) {
  const std::size_t n = graph.node_count();
  if (k > n) throw Error(ErrorKind::invalid_argument, "k exceeds node count");
  if (count_sets_up_to(n, k) > kMaxBruteForceSets) {
    throw Error(ErrorKind::too_large, "brute force over more than " +
                                          std::to_string(kMaxBruteForceSets) + " sets");
  }

  std::vector<NodeId> best;
  double best_value = 0.0;
  std::vector<NodeId> combo;
  for (std::size_t size = 1; size <= k; ++size) {
    combo.resize(size);
    for (std::size_t i = 0; i < size; ++i) combo[i] = static_cast<NodeId>(i);
    while (true) {
      const double value = exact_expected_activated(graph, combo);
      if (value > best_value || (value == best_value && combo < best)) {
        best_value = value;
        best = combo;
      }
      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && combo[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  }

  OracleResult r;
  r.seed_set = best;
  r.estimated_value = n == 0 ? 0.0 : best_value / static_cast<double>(n);
  r.per_step_gains = prefix_gains(graph, best);
  return r;
}

namespace {

// CELF core. `initial` holds the expected activated count of every singleton.
OracleResult lazy_greedy_from(const Graph& graph, std::size_t k, std::vector<double> initial,
                              const SpreadEvaluator& spread) {
  const std::size_t n = graph.node_count();
  struct Candidate {
    double gain;
    NodeId node;
    std::size_t stamp;  // |S| when gain was computed
  };
  auto less = [](const Candidate& a, const Candidate& b) {
    return a.gain != b.gain ? a.gain < b.gain : a.node > b.node;
  };

  std::vector<Candidate> heap;
  heap.reserve(n);
  for (NodeId u = 0; u < n; ++u) heap.push_back({initial[u], u, 0});
  std::make_heap(heap.begin(), heap.end(), less);

  OracleResult r;
  std::vector<NodeId> set;
  double current = 0.0;
  while (set.size() < k) {
    std::pop_heap(heap.begin(), heap.end(), less);
    Candidate top = heap.back();
    heap.pop_back();
    if (top.stamp == set.size()) {
      set.push_back(top.node);
      r.per_step_gains.push_back(top.gain / static_cast<double>(n));
      current = set.size() == k ? current + top.gain : spread(set);
      continue;
    }
    set.push_back(top.node);
    top.gain = spread(set) - current;
    set.pop_back();
    top.stamp = set.size();
    heap.push_back(top);
    std::push_heap(heap.begin(), heap.end(), less);
  }
  r.seed_set = std::move(set);
  r.estimated_value = n == 0 ? 0.0 : current / static_cast<double>(n);
  return r;
}

}  // namespace

OracleResult lazy_greedy(const Graph& graph, std::size_t k, const SpreadEvaluator& spread) {
  if (k > graph.node_count()) throw Error(ErrorKind::invalid_argument, "k exceeds node count");
  std::vector<double> initial(graph.node_count());
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    const NodeId single[] = {u};
    initial[u] = spread(single);
  }
  return lazy_greedy_from(graph, k, std::move(initial), spread);
}

double monte_carlo_activated(const Graph& graph, std::span<const NodeId> seeds,
                             std::uint64_t samples, std::uint64_t seed, std::uint64_t stream) {
  if (samples == 0) throw Error(ErrorKind::invalid_argument, "samples must be positive");
  CascadeSimulator sim(graph);
  Rng rng = Rng::stream(seed, stream);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < samples; ++i) total += sim.run(seeds, rng);
  return static_cast<double>(total) / static_cast<double>(samples);
}

OracleResult offline_greedy(const Graph& graph, std::size_t k, std::uint64_t eval_samples,
                            std::uint64_t seed, unsigned jobs) {
  const std::size_t n = graph.node_count();
  if (k > n) throw Error(ErrorKind::invalid_argument, "k exceeds node count");
  if (eval_samples == 0) throw Error(ErrorKind::invalid_argument, "eval_samples must be positive");

  // Stream i < n is the singleton estimate of node i; later estimates take
  // consecutive streams after that, in call order.
  std::vector<double> singles(n);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        CascadeSimulator sim(graph);
        for (NodeId u = w; u < n; u += jobs) {
          Rng rng = Rng::stream(seed, u);
          const NodeId single[] = {u};
          std::uint64_t total = 0;
          for (std::uint64_t i = 0; i < eval_samples; ++i) total += sim.run(single, rng);
          singles[u] = static_cast<double>(total) / static_cast<double>(eval_samples);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  std::uint64_t next_stream = n;
  SpreadEvaluator spread = [&](std::span<const NodeId> seeds) -> double {
    if (seeds.empty()) return 0.0;
    return monte_carlo_activated(graph, seeds, eval_samples, seed, next_stream++);
  };
  OracleResult r = lazy_greedy_from(graph, k, std::move(singles), spread);
  const std::uint64_t final_stream = ~std::uint64_t{0};
  r.estimated_value = n == 0 ? 0.0
                             : monte_carlo_activated(graph, r.seed_set, eval_samples, seed,
                                                     final_stream) /
                                   static_cast<double>(n);
  r.samples_used = eval_samples;
  return r;
}

std::optional<BenchmarkRecord> find_benchmark(const std::string& path, std::size_t k,
                                              const std::string& mode) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::optional<BenchmarkRecord> found;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    BenchmarkRecord rec;
    std::string value;
    if (!(is >> rec.k >> rec.mode >> value)) {
      throw Error(ErrorKind::parse, "malformed benchmark cache line in '" + path + "'");
    }
    rec.value = std::strtod(value.c_str(), nullptr);
    for (std::string s; is >> s;) rec.seeds.push_back(s);
    // Later lines win so a recomputation supersedes an older entry.
    if (rec.k == k && rec.mode == mode) found = std::move(rec);
  }
  return found;
}

void append_benchmark(const std::string& path, const BenchmarkRecord& record) {
  if (record.mode.empty() || record.mode.find_first_of(" \t\n") != std::string::npos) {
    throw Error(ErrorKind::invalid_argument, "benchmark mode must be a single token");
  }
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write benchmark cache '" + path + "'");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", record.value);
  out << record.k << ' ' << record.mode << ' ' << buf;
  for (const auto& s : record.seeds) out << ' ' << s;
  out << '\n';
}

}  // namespace oimlofa
