#include "casflow/shapley.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace casflow {

std::vector<double> shapley_degree(
    std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges) {
  std::vector<std::uint32_t> indeg(n, 0);
  for (const auto& [u, v] : edges) ++indeg[v];
  std::vector<double> share(n);
  for (std::size_t v = 0; v < n; ++v) share[v] = 1.0 / (1.0 + indeg[v]);
  std::vector<double> sv(n, 0.0);
  for (const auto& [u, v] : edges) sv[u] += share[v];
  return sv;
}

std::vector<double> shapley_degree(const FlowGraph& g) {
  return shapley_degree(g.node_count(), g.edges);
}

std::vector<double> brute_force_shapley(
    std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges) {
  if (n > 12)
    throw std::invalid_argument(
        "brute-force Shapley refused: coalition enumeration beyond 12 nodes");
  std::vector<double> sv(n, 0.0);
  if (n == 0) return sv;

  // reach[i]: i itself plus its out-neighbors, as a bitmask.
  std::vector<std::uint32_t> reach(n), indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i) reach[i] = 1u << i;
  for (const auto& [u, v] : edges) {
    reach[u] |= 1u << v;
    ++indeg[v];
  }

  // v(C) = |C ∪ N_out(C)| = popcount of the union of member reach masks,
  // memoized incrementally: union(C) = union(C minus lowest bit) | reach[bit].
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<std::uint32_t> value(full + 1u, 0);
  std::vector<std::uint32_t> unions(full + 1u, 0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t low = mask & (mask - 1);
    int bit = std::countr_zero(mask);
    unions[mask] = unions[low] | reach[bit];
    value[mask] = static_cast<std::uint32_t>(std::popcount(unions[mask]));
  }

  // Standard Shapley weights: |S|! (n-|S|-1)! / n!
  std::vector<double> fact(n + 1, 1.0);
  for (std::size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  std::vector<double> weight(n);
  for (std::size_t s = 0; s < n; ++s)
    weight[s] = fact[s] * fact[n - 1 - s] / fact[n];

  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t ibit = 1u << i;
    KahanSum acc;
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
      if (mask & ibit) continue;
      int s = std::popcount(mask);
      double marginal = static_cast<double>(value[mask | ibit]) -
                        static_cast<double>(value[mask]);
      acc.add(weight[s] * marginal);
    }
    // Drop the self share: a node cannot inform itself.
    sv[i] = acc.value() - 1.0 / (1.0 + indeg[i]);
  }
  return sv;
}

CascadeScores per_cascade_shapley(const FlowGraph& g) {
  CascadeScores s;
  s.key_hash = g.cascade_key_hash;
  s.users.reserve(g.node_count());
  for (const auto& node : g.nodes) s.users.push_back(node.user);
  s.values = shapley_degree(g);
  return s;
}

std::vector<std::pair<UserId, double>> global_shapley(
    std::span<const CascadeScores> scores,
    const std::unordered_set<std::uint64_t>* filter) {
  // Accumulation order is the cascade order, which is fixed upstream, so the
  // compensated totals are identical for any worker count.
  std::unordered_map<UserId, KahanSum> totals;
  for (const auto& cs : scores) {
    if (filter && filter->count(cs.key_hash) == 0) continue;
    for (std::size_t i = 0; i < cs.users.size(); ++i)
      totals[cs.users[i]].add(cs.values[i]);
  }
  std::vector<std::pair<UserId, double>> out;
  out.reserve(totals.size());
  for (const auto& [user, acc] : totals) out.emplace_back(user, acc.value());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<RankedEntry> rank_scores(
    std::span<const std::pair<UserId, double>> scores,
    const TrollRegistry& registry) {
  std::vector<RankedEntry> out;
  out.reserve(scores.size());
  for (const auto& [user, score] : scores)
    out.push_back(RankedEntry{0, user, score, registry.group_of(user)});
  std::sort(out.begin(), out.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.user < b.user;
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].rank = static_cast<std::uint32_t>(i + 1);
  return out;
}

std::vector<RankedEntry> troll_ranks(std::span<const RankedEntry> ranking) {
  std::vector<RankedEntry> out;
  for (const auto& e : ranking)
    if (e.group == Group::Troll) out.push_back(e);
  return out;
}

bool UrlFilter::matches(const Cascade& c) const {
  for (const auto& u : c.urls)
    if (urls.count(u)) return true;
  return false;
}

UrlFilter build_troll_url_filter(std::span<const Cascade> cascades,
                                 const TrollRegistry& registry) {
  UrlFilter filter;
  for (const auto& c : cascades) {
    bool troll_touched = registry.is_troll(c.root_user_id);
    if (!troll_touched) {
      for (const auto& ev : c.events) {
        if (registry.is_troll(ev.retweeter_id)) {
          troll_touched = true;
          break;
        }
      }
    }
    if (troll_touched)
      for (const auto& u : c.urls) filter.urls.insert(u);
  }
  return filter;
}

std::unordered_set<std::uint64_t> matching_cascade_keys(
    std::span<const Cascade> cascades, const UrlFilter& filter) {
  std::unordered_set<std::uint64_t> keys;
  for (const auto& c : cascades)
    if (filter.matches(c)) keys.insert(c.key_hash);
  return keys;
}

}  // namespace casflow
