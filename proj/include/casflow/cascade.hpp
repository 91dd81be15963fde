#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "casflow/common.hpp"
#include "casflow/graph.hpp"
#include "casflow/ingest.hpp"

namespace casflow {

struct FlowNode {
  UserId user = 0;
  std::int64_t first_ts = 0;  // first retweet time; root: original post time
};

// Per-cascade digraph of possible influence. Node 0 is always the root, the
// remaining nodes are the distinct retweeters ordered by first retweet time.
// The root has an edge to every retweeter; an edge u -> v between retweeters
// exists iff v follows u, the follow predates v's retweet, and u retweeted
// strictly before v.
struct FlowGraph {
  std::uint64_t cascade_key_hash = 0;
  std::vector<FlowNode> nodes;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

FlowGraph build_flow_graph(const Cascade& c, const FollowerGraph& fg);

// Time-inferred spanning tree: each retweeter hangs off the most recently
// retweeting friend, or the root when no friend qualifies.
struct CascadeTree {
  std::uint64_t cascade_key_hash = 0;
  std::vector<FlowNode> nodes;                       // same order as the flow graph
  std::vector<NodeIndex> parent;                     // parent[0] == kNoNode
  std::vector<std::vector<NodeIndex>> children;

  std::size_t node_count() const { return nodes.size(); }
};

CascadeTree build_cascade_tree(const FlowGraph& g);

// Average distance over all ordered node pairs of the undirected tree.
// Requires n >= 2; computed from subtree sizes, exactly.
double structural_virality(const CascadeTree& t);

// Child count per node.
std::vector<std::uint32_t> influence_degree(const CascadeTree& t);

// Total children over all trees a user participates in; sorted by user id.
std::vector<std::pair<UserId, std::uint64_t>> global_influence(
    std::span<const CascadeTree> trees);

struct CascadeSizeRow {
  std::uint64_t key_hash = 0;
  UserId root_user_id = 0;
  std::uint64_t n_distinct = 0;   // unique retweeters, root excluded
  std::uint64_t n_retweets = 0;   // total retweet events
  Group root_group = Group::Regular;
};

struct CascadeStats {
  std::vector<CascadeSizeRow> rows;           // cascade order
  CcdfTable retweeters_ccdf[2];               // indexed by Group
  CcdfTable retweets_ccdf[2];
};

CascadeStats cascade_stats(std::span<const Cascade> cascades,
                           const TrollRegistry& registry);

struct ViralityRow {
  std::uint64_t key_hash = 0;
  std::uint64_t n_nodes = 0;
  double virality = 0.0;
  Group root_group = Group::Regular;
};

// One row per tree with n >= 2, in input order.
std::vector<ViralityRow> virality_vs_size(std::span<const CascadeTree> trees,
                                          const TrollRegistry& registry);

}  // namespace casflow
