#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "casflow/cascade.hpp"
#include "casflow/common.hpp"
#include "casflow/ingest.hpp"

namespace casflow {

// Shapley-value degree centrality of every node of a directed graph:
// SV(u) = sum over out-neighbors w of 1 / (1 + indegree(w)).
// Linear in nodes + edges; leaves score zero; disconnected graphs are fine.
std::vector<double> shapley_degree(
    std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges);

std::vector<double> shapley_degree(const FlowGraph& g);

// Exact Shapley value of the fringe game v(C) = |C ∪ N_out(C)| by full
// coalition enumeration, minus each node's self share 1/(1 + indegree).
// Reference oracle; refuses graphs with more than 12 nodes.
std::vector<double> brute_force_shapley(
    std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges);

struct CascadeScores {
  std::uint64_t key_hash = 0;
  std::vector<UserId> users;    // flow-graph node order
  std::vector<double> values;
};

CascadeScores per_cascade_shapley(const FlowGraph& g);

// Global value per user: compensated sum over the cascades the user appears
// in, restricted to `filter` keys when given. Sorted by user id.
std::vector<std::pair<UserId, double>> global_shapley(
    std::span<const CascadeScores> scores,
    const std::unordered_set<std::uint64_t>* filter = nullptr);

struct RankedEntry {
  std::uint32_t rank = 0;
  UserId user = 0;
  double score = 0.0;
  Group group = Group::Regular;
};

// Dense deterministic ranking: descending score, ties by ascending user id.
std::vector<RankedEntry> rank_scores(
    std::span<const std::pair<UserId, double>> scores,
    const TrollRegistry& registry);

// Ranks of all registry trolls present in the ranking, in rank order.
std::vector<RankedEntry> troll_ranks(std::span<const RankedEntry> ranking);

// Anchor URLs spread by trolls: the URL set of every cascade a registry
// troll posted (root) or retweeted (event).
struct UrlFilter {
  std::unordered_set<std::string> urls;
  bool matches(const Cascade& c) const;
};

UrlFilter build_troll_url_filter(std::span<const Cascade> cascades,
                                 const TrollRegistry& registry);

std::unordered_set<std::uint64_t> matching_cascade_keys(
    std::span<const Cascade> cascades, const UrlFilter& filter);

}  // namespace casflow
