#include "mep/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "mep/error.hpp"

namespace mep {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }

  std::vector<std::size_t> parent;
};

std::string describe_components(DisjointSets& sets, std::size_t n) {
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);
  std::string out;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    out += out.empty() ? "{" : ", {";
    for (std::size_t k = 0; k < g.size(); ++k) out += (k ? " " : "") + std::to_string(g[k]);
    out += "}";
  }
  return out;
}

}  // namespace

std::size_t LandscapeGraph::add_node(ParamVector params, double min_loss) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({id, std::move(params), min_loss});
  return id;
}

std::optional<std::size_t> LandscapeGraph::find_edge(std::size_t u, std::size_t v) const {
  for (const auto& e : edges_) {
    if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return e.id;
  }
  return std::nullopt;
}

const GraphEdge& LandscapeGraph::edge(std::size_t id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id, [](const GraphEdge& e, std::size_t key) { return e.id < key; });
  if (it == edges_.end() || it->id != id) throw Error(ErrorKind::InvalidArgument, "unknown edge id " + std::to_string(id));
  return *it;
}

std::size_t LandscapeGraph::add_edge(std::size_t u, std::size_t v, double saddle_loss, std::optional<Chain> chain) {
  if (u >= nodes_.size() || v >= nodes_.size()) throw Error(ErrorKind::InvalidArgument, "edge references an unknown node");
  if (u == v) throw Error(ErrorKind::InvalidArgument, "self loops are not allowed");
  if (!std::isfinite(saddle_loss)) throw Error(ErrorKind::NonFinite, "saddle loss is not finite");
  if (saddle_loss < std::max(nodes_[u].min_loss, nodes_[v].min_loss) - 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "saddle loss below an endpoint minimum");
  }
  if (auto existing = find_edge(u, v)) {
    auto it = std::find_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) { return e.id == *existing; });
    if (it->saddle_loss <= saddle_loss) return it->id;
    ignored_.erase(it->id);
    edges_.erase(it);
  }
  const std::size_t id = next_edge_id_++;
  edges_.push_back({id, u, v, saddle_loss, std::move(chain)});
  return id;
}

std::vector<std::size_t> kruskal_mst(const LandscapeGraph& graph) {
  const auto n = graph.nodes().size();
  std::vector<const GraphEdge*> order;
  for (const auto& e : graph.edges()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const GraphEdge* a, const GraphEdge* b) {
    return a->saddle_loss != b->saddle_loss ? a->saddle_loss < b->saddle_loss : a->id < b->id;
  });
  DisjointSets sets(n);
  std::vector<std::size_t> tree;
  for (const auto* e : order) {
    if (sets.unite(e->u, e->v)) tree.push_back(e->id);
  }
  if (n > 0 && tree.size() + 1 != n) {
    throw Error(ErrorKind::Disconnected, "graph is disconnected, components: " + describe_components(sets, n));
  }
  return tree;
}

double ultrametric_bound(const LandscapeGraph& graph, std::size_t a, std::size_t c) {
  const auto n = graph.nodes().size();
  if (a >= n || c >= n) throw Error(ErrorKind::InvalidArgument, "unknown node");
  if (a == c) return graph.nodes()[a].min_loss;

  const auto tree = kruskal_mst(graph);
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (auto id : tree) {
    const auto& e = graph.edge(id);
    adj[e.u].push_back({e.v, e.saddle_loss});
    adj[e.v].push_back({e.u, e.saddle_loss});
  }
  // Tree walk from a, carrying the running maximum.
  std::vector<double> worst(n, 0.0);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{a};
  seen[a] = true;
  worst[a] = -std::numeric_limits<double>::infinity();
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      worst[v] = std::max(worst[u], w);
      stack.push_back(v);
    }
  }
  return worst[c];
}

namespace {

double mst_max(const LandscapeGraph& g, const std::vector<std::size_t>& tree) {
  double m = -std::numeric_limits<double>::infinity();
  for (auto id : tree) m = std::max(m, g.edge(id).saddle_loss);
  return m;
}

bool similar_saddles(const LandscapeGraph& g, const std::vector<std::size_t>& tree, double stop_ratio) {
  if (tree.empty()) return true;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto id : tree) {
    lo = std::min(lo, g.edge(id).saddle_loss);
    hi = std::max(hi, g.edge(id).saddle_loss);
  }
  if (hi == lo) return true;
  if (hi == 0.0) return false;
  return (hi - lo) / std::abs(hi) < stop_ratio;
}

}  // namespace

ExploreResult explore(const std::vector<ParamVector>& minima, const Landscape& landscape,
                      const AutoNebSchedule& schedule, const ExploreConfig& cfg) {
  const auto n = minima.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "explore needs at least two minima");
  if (cfg.budget + 1 < n) throw Error(ErrorKind::InvalidArgument, "budget must cover the star phase (minima - 1 runs)");

  ExploreResult result;
  LandscapeGraph& g = result.graph;
  for (const auto& m : minima) g.add_node(m, landscape.loss(m));

  auto connect = [&](std::size_t u, std::size_t v) {
    auto run = auto_neb(g.nodes()[u].params, g.nodes()[v].params, landscape, schedule);
    ++result.runs;
    return g.add_edge(u, v, run.saddle.loss, std::move(run.chain));
  };

  for (std::size_t v = 1; v < n; ++v) connect(0, v);
  result.mst = kruskal_mst(g);
  result.history.push_back({result.runs, mst_max(g, result.mst), std::nullopt, false});

  std::mt19937_64 rng(cfg.seed);
  const std::size_t all_pairs = n * (n - 1) / 2;
  while (g.edges().size() < all_pairs && result.runs < cfg.budget && !similar_saddles(g, result.mst, cfg.stop_ratio)) {
    // Worst MST edge that is not ignored.
    std::optional<std::size_t> worst;
    for (auto id : result.mst) {
      if (g.is_ignored(id)) continue;
      const auto& e = g.edge(id);
      if (!worst || e.saddle_loss > g.edge(*worst).saddle_loss ||
          (e.saddle_loss == g.edge(*worst).saddle_loss && id < *worst)) {
        worst = id;
      }
    }
    if (!worst) break;

    // Components of the MST with the worst edge removed.
    DisjointSets sets(n);
    for (auto id : result.mst) {
      if (id != *worst) sets.unite(g.edge(id).u, g.edge(id).v);
    }
    const auto side = sets.find(g.edge(*worst).u);
    std::vector<std::pair<std::size_t, std::size_t>> eligible;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        const bool crosses = (sets.find(u) == side) != (sets.find(v) == side);
        if (crosses && !g.has_edge(u, v)) eligible.push_back({u, v});
      }
    }
    if (eligible.empty()) {
      g.ignore(*worst);
      continue;
    }

    const double old_loss = g.edge(*worst).saddle_loss;
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    const auto [u, v] = eligible[pick(rng)];
    const auto new_id = connect(u, v);
    result.mst = kruskal_mst(g);
    result.history.push_back({result.runs, mst_max(g, result.mst), *worst, g.edge(new_id).saddle_loss < old_loss});
  }
  return result;
}

}  // namespace mep
