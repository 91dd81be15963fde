#include "casflow/cascade.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace casflow {

FlowGraph build_flow_graph(const Cascade& c, const FollowerGraph& fg) {
  FlowGraph out;
  out.cascade_key_hash = c.key_hash;

  // First retweet time per distinct retweeter; events are (ts, id)-sorted so
  // the first occurrence wins. The root's own retweets do not add a node.
  std::vector<FlowNode> retweeters;
  std::unordered_map<UserId, NodeIndex> flow_index;
  flow_index.reserve(c.events.size());
  for (const auto& ev : c.events) {
    if (ev.retweeter_id == c.root_user_id) continue;
    if (flow_index.count(ev.retweeter_id)) continue;
    flow_index.emplace(ev.retweeter_id,
                       static_cast<NodeIndex>(retweeters.size() + 1));
    retweeters.push_back(FlowNode{ev.retweeter_id, ev.created_at});
  }
  if (retweeters.empty())
    throw DataError("cascade has no retweeters besides the root");

  std::int64_t root_ts = c.root_post_ts
                             ? *c.root_post_ts
                             : retweeters.front().first_ts - 1;
  out.nodes.push_back(FlowNode{c.root_user_id, root_ts});
  out.nodes.insert(out.nodes.end(), retweeters.begin(), retweeters.end());

  // The root's screen name is visible in every retweet, so the root reaches
  // every retweeter regardless of follow relations.
  for (NodeIndex v = 1; v < out.nodes.size(); ++v) out.edges.emplace_back(0, v);

  // u -> v between retweeters: v follows u (earliest interaction before v's
  // retweet) and u's first retweet strictly precedes v's.
  for (NodeIndex v = 1; v < out.nodes.size(); ++v) {
    const FlowNode& nv = out.nodes[v];
    auto fgi = fg.nodes.find(nv.user);
    if (!fgi) continue;
    auto targets = fg.follows(*fgi);
    auto stamps = fg.follow_ts(*fgi);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (stamps[k] >= nv.first_ts) continue;
      UserId followed = fg.nodes.id_of(targets[k]);
      auto it = flow_index.find(followed);
      if (it == flow_index.end()) continue;
      const FlowNode& nu = out.nodes[it->second];
      if (nu.first_ts < nv.first_ts) out.edges.emplace_back(it->second, v);
    }
  }
  return out;
}

CascadeTree build_cascade_tree(const FlowGraph& g) {
  CascadeTree t;
  t.cascade_key_hash = g.cascade_key_hash;
  t.nodes = g.nodes;
  const std::size_t n = g.nodes.size();
  t.parent.assign(n, 0);
  if (n > 0) t.parent[0] = kNoNode;

  // parent(v) = in-neighbor u (not the root) with the latest first_ts,
  // ties to the smaller user id; fall back to the root.
  for (const auto& [u, v] : g.edges) {
    if (u == 0) continue;
    NodeIndex cur = t.parent[v];
    if (cur == 0) {
      t.parent[v] = u;
      continue;
    }
    const FlowNode& nu = g.nodes[u];
    const FlowNode& nc = g.nodes[cur];
    if (nu.first_ts > nc.first_ts ||
        (nu.first_ts == nc.first_ts && nu.user < nc.user))
      t.parent[v] = u;
  }

  t.children.assign(n, {});
  for (NodeIndex v = 1; v < n; ++v) t.children[t.parent[v]].push_back(v);
  return t;
}

double structural_virality(const CascadeTree& t) {
  const std::size_t n = t.node_count();
  if (n < 2)
    throw std::domain_error("structural virality needs at least 2 nodes");

  // Sum of pairwise distances on a tree: every edge (p, v) lies on the paths
  // between the s nodes below it and the n - s above, so it contributes
  // s * (n - s) unordered pairs. Subtree sizes come from one reverse pass
  // over a BFS order.
  std::vector<NodeIndex> order;
  order.reserve(n);
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (NodeIndex ch : t.children[order[head]]) order.push_back(ch);

  std::vector<std::uint64_t> subtree(n, 1);
  std::uint64_t pair_sum = 0;
  for (std::size_t i = order.size(); i-- > 1;) {
    NodeIndex v = order[i];
    subtree[t.parent[v]] += subtree[v];
    pair_sum += subtree[v] * (n - subtree[v]);
  }
  return 2.0 * static_cast<double>(pair_sum) /
         (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<std::uint32_t> influence_degree(const CascadeTree& t) {
  std::vector<std::uint32_t> deg(t.node_count(), 0);
  for (std::size_t v = 0; v < t.node_count(); ++v)
    deg[v] = static_cast<std::uint32_t>(t.children[v].size());
  return deg;
}

std::vector<std::pair<UserId, std::uint64_t>> global_influence(
    std::span<const CascadeTree> trees) {
  std::unordered_map<UserId, std::uint64_t> totals;
  for (const auto& t : trees) {
    for (std::size_t v = 0; v < t.node_count(); ++v)
      totals[t.nodes[v].user] += t.children[v].size();
  }
  std::vector<std::pair<UserId, std::uint64_t>> out(totals.begin(),
                                                    totals.end());
  std::sort(out.begin(), out.end());
  return out;
}

CascadeStats cascade_stats(std::span<const Cascade> cascades,
                           const TrollRegistry& registry) {
  CascadeStats stats;
  std::vector<std::uint64_t> retweeters[2], retweets[2];
  for (const auto& c : cascades) {
    Group g = registry.group_of(c.root_user_id);
    CascadeSizeRow row;
    row.key_hash = c.key_hash;
    row.root_user_id = c.root_user_id;
    row.n_distinct = c.n_distinct;
    row.n_retweets = c.events.size();
    row.root_group = g;
    stats.rows.push_back(row);
    int gi = g == Group::Troll ? 1 : 0;
    retweeters[gi].push_back(row.n_distinct);
    retweets[gi].push_back(row.n_retweets);
  }
  for (int gi = 0; gi < 2; ++gi) {
    stats.retweeters_ccdf[gi] = ccdf_from_values(retweeters[gi]);
    stats.retweets_ccdf[gi] = ccdf_from_values(retweets[gi]);
  }
  return stats;
}

std::vector<ViralityRow> virality_vs_size(std::span<const CascadeTree> trees,
                                          const TrollRegistry& registry) {
  std::vector<ViralityRow> rows;
  rows.reserve(trees.size());
  for (const auto& t : trees) {
    if (t.node_count() < 2) continue;
    ViralityRow row;
    row.key_hash = t.cascade_key_hash;
    row.n_nodes = t.node_count();
    row.virality = structural_virality(t);
    row.root_group = registry.group_of(t.nodes[0].user);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace casflow
