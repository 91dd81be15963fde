#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "casflow/common.hpp"
#include "casflow/ingest.hpp"

namespace casflow {

enum class ActionType : std::uint8_t { Reply = 0, Mention = 1, Retweet = 2 };

const char* action_name(ActionType t);

// Dense node indices in first-appearance order; external outputs stay keyed
// by the original user id.
class NodeTable {
 public:
  NodeIndex intern(UserId id, Group g);
  std::optional<NodeIndex> find(UserId id) const;
  UserId id_of(NodeIndex i) const { return ids_[i]; }
  Group group_of(NodeIndex i) const { return groups_[i]; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<UserId>& ids() const { return ids_; }
  const std::vector<Group>& groups() const { return groups_; }

 private:
  std::vector<UserId> ids_;
  std::vector<Group> groups_;
  std::unordered_map<UserId, NodeIndex> index_;
};

struct InteractionEdge {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  ActionType type = ActionType::Mention;
  std::int64_t ts = 0;
};

// Directed multigraph of actions; one edge per recorded reply, mention or
// detected retweet. Self-loops are dropped.
struct InteractionGraph {
  NodeTable nodes;
  std::vector<InteractionEdge> edges;

  std::vector<std::uint64_t> in_degrees() const;
  std::vector<std::uint64_t> out_degrees() const;
};

// Simple digraph, earliest edge per ordered pair. Edge (i,j) means "i follows
// j"; information flows j -> i. Stored as forward CSR plus a derived reverse.
struct FollowerGraph {
  NodeTable nodes;
  std::vector<std::uint64_t> fwd_offsets;   // size nodes+1
  std::vector<NodeIndex> fwd_targets;
  std::vector<std::int64_t> fwd_ts;         // earliest interaction per kept edge
  std::vector<std::uint64_t> rev_offsets;
  std::vector<NodeIndex> rev_targets;

  std::size_t edge_count() const { return fwd_targets.size(); }
  std::span<const NodeIndex> follows(NodeIndex i) const {
    return {fwd_targets.data() + fwd_offsets[i],
            fwd_targets.data() + fwd_offsets[i + 1]};
  }
  std::span<const std::int64_t> follow_ts(NodeIndex i) const {
    return {fwd_ts.data() + fwd_offsets[i], fwd_ts.data() + fwd_offsets[i + 1]};
  }
  std::vector<std::uint64_t> in_degrees() const;
  std::vector<std::uint64_t> out_degrees() const;

  void rebuild_reverse();
};

InteractionGraph build_interaction_graph(const std::vector<TweetRecord>& records,
                                         const TrollRegistry& registry);

FollowerGraph collapse_to_follower_graph(const InteractionGraph& ig);

struct CcdfPoint {
  std::uint64_t value = 0;
  double fraction = 0.0;  // share of non-zero entities with value >= this
};

struct CcdfTable {
  std::vector<CcdfPoint> points;
};

// CCDF over the non-zero entries of `values`.
CcdfTable ccdf_from_values(std::span<const std::uint64_t> values);

enum class Direction { In, Out };

CcdfTable degree_ccdf(const InteractionGraph& g, Direction dir, Group group);
CcdfTable degree_ccdf(const FollowerGraph& g, Direction dir, Group group);

struct Components {
  std::vector<std::uint32_t> component_of;  // per node
  std::vector<std::uint64_t> sizes;         // per component id
  std::uint32_t largest = 0;                // id of the largest component
};

// Components of the undirected view of the follower graph.
Components connected_components(const FollowerGraph& fg);

// Undirected simple graph in CSR form; antiparallel pairs collapse to one
// edge and self-loops are absent.
struct UndirectedGraph {
  std::vector<std::uint64_t> offsets;
  std::vector<NodeIndex> neighbors;

  std::size_t node_count() const {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
  std::span<const NodeIndex> adj(NodeIndex i) const {
    return {neighbors.data() + offsets[i], neighbors.data() + offsets[i + 1]};
  }
};

UndirectedGraph make_undirected(
    std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges);

// Largest-component subgraph of the undirected view, with the mapping from
// local index back to follower-graph node index.
struct ComponentSubgraph {
  UndirectedGraph graph;
  std::vector<NodeIndex> global_index;  // local -> follower node
};

ComponentSubgraph largest_component_subgraph(const FollowerGraph& fg,
                                             const Components& comps);

// Coreness per node via bucket peeling (Batagelj-Zaversnik).
std::vector<std::uint32_t> kcore_decomposition(const UndirectedGraph& g);

struct GroupAverages {
  std::optional<double> regular;
  std::optional<double> troll;
};

GroupAverages group_averages(std::span<const double> values,
                             std::span<const Group> groups);

enum class DegreeMetric { InDegree, OutDegree };

GroupAverages group_averages(const InteractionGraph& g, DegreeMetric m);
GroupAverages group_averages(const FollowerGraph& g, DegreeMetric m);

// FGR1 compact binary follower-graph adjacency.
void write_follower_bin(const FollowerGraph& fg, const std::string& path);
// Node ids/groups are not part of FGR1; the caller supplies them (nodes.tsv).
FollowerGraph read_follower_bin(const std::string& path,
                                std::vector<UserId> ids,
                                std::vector<Group> groups);

}  // namespace casflow
