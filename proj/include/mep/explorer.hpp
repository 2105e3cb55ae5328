#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "mep/autoneb.hpp"
#include "mep/chain.hpp"
#include "mep/landscape.hpp"

namespace mep {

struct GraphNode {
  std::size_t id;
  ParamVector params;
  double min_loss;
};

struct GraphEdge {
  std::size_t id;
  std::size_t u;
  std::size_t v;
  double saddle_loss;
  std::optional<Chain> chain;  // path from node u to node v
};

/// Minima and the best known local MEP per unordered pair.
class LandscapeGraph {
 public:
  std::size_t add_node(ParamVector params, double min_loss);

  /// Stores the edge unless a lower one is already known for the pair; a
  /// lower saddle replaces the stored edge and gets a fresh id. Returns the id
  /// of the edge that is stored afterwards.
  std::size_t add_edge(std::size_t u, std::size_t v, double saddle_loss, std::optional<Chain> chain = std::nullopt);

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(std::size_t id) const;
  std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const;
  bool has_edge(std::size_t u, std::size_t v) const { return find_edge(u, v).has_value(); }

  void ignore(std::size_t edge_id) { ignored_.insert(edge_id); }
  bool is_ignored(std::size_t edge_id) const { return ignored_.count(edge_id) != 0; }

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;  // sorted by id
  std::set<std::size_t> ignored_;
  std::size_t next_edge_id_ = 0;
};

/// Kruskal, ties broken by lower edge id. Returns edge ids.
std::vector<std::size_t> kruskal_mst(const LandscapeGraph& graph);

/// Minimax path value between two nodes: the largest saddle on the MST path.
/// bound(a, a) is min_loss(a).
double ultrametric_bound(const LandscapeGraph& graph, std::size_t a, std::size_t c);

struct ExploreConfig {
  std::size_t budget = 0;  // auto_neb runs, star phase included
  double stop_ratio = 0.1;
  std::uint64_t seed = 0;
};

struct ExploreStep {
  std::size_t runs;          // auto_neb runs so far
  double mst_max_saddle;
  std::optional<std::size_t> removed_edge;
  bool improved = false;
};

struct ExploreResult {
  LandscapeGraph graph;
  std::vector<std::size_t> mst;
  std::vector<ExploreStep> history;  // entry 0 is the star tree
  std::size_t runs = 0;
};

/// Connects minimum 0 to all others, then repeatedly tries to route around the
/// worst MST edge until every pair is known, the budget is spent, or the MST
/// saddles satisfy (max - min) / |max| < stop_ratio.
ExploreResult explore(const std::vector<ParamVector>& minima, const Landscape& landscape,
                      const AutoNebSchedule& schedule, const ExploreConfig& cfg);

}  // namespace mep
