#include "casflow/graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>

namespace casflow {

const char* action_name(ActionType t) {
  switch (t) {
    case ActionType::Reply:
      return "reply";
    case ActionType::Mention:
      return "mention";
    case ActionType::Retweet:
      return "retweet";
  }
  return "unknown";
}

NodeIndex NodeTable::intern(UserId id, Group g) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  NodeIndex idx = static_cast<NodeIndex>(ids_.size());
  ids_.push_back(id);
  groups_.push_back(g);
  index_.emplace(id, idx);
  return idx;
}

std::optional<NodeIndex> NodeTable::find(UserId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint64_t> InteractionGraph::in_degrees() const {
  std::vector<std::uint64_t> deg(nodes.size(), 0);
  for (const auto& e : edges) ++deg[e.dst];
  return deg;
}

std::vector<std::uint64_t> InteractionGraph::out_degrees() const {
  std::vector<std::uint64_t> deg(nodes.size(), 0);
  for (const auto& e : edges) ++deg[e.src];
  return deg;
}

std::vector<std::uint64_t> FollowerGraph::in_degrees() const {
  std::vector<std::uint64_t> deg(nodes.size(), 0);
  for (NodeIndex t : fwd_targets) ++deg[t];
  return deg;
}

std::vector<std::uint64_t> FollowerGraph::out_degrees() const {
  std::vector<std::uint64_t> deg(nodes.size(), 0);
  for (std::size_t i = 0; i + 1 < fwd_offsets.size(); ++i)
    deg[i] = fwd_offsets[i + 1] - fwd_offsets[i];
  return deg;
}

void FollowerGraph::rebuild_reverse() {
  const std::size_t n = nodes.size();
  rev_offsets.assign(n + 1, 0);
  for (NodeIndex t : fwd_targets) ++rev_offsets[t + 1];
  for (std::size_t i = 0; i < n; ++i) rev_offsets[i + 1] += rev_offsets[i];
  rev_targets.assign(fwd_targets.size(), 0);
  std::vector<std::uint64_t> cursor(rev_offsets.begin(), rev_offsets.end() - 1);
  // Filling in (src, dst) order keeps every reverse list sorted by source.
  for (std::size_t src = 0; src < n; ++src) {
    for (std::uint64_t k = fwd_offsets[src]; k < fwd_offsets[src + 1]; ++k) {
      NodeIndex dst = fwd_targets[k];
      rev_targets[cursor[dst]++] = static_cast<NodeIndex>(src);
    }
  }
}

InteractionGraph build_interaction_graph(const std::vector<TweetRecord>& records,
                                         const TrollRegistry& registry) {
  InteractionGraph g;
  auto intern = [&](UserId id) {
    return g.nodes.intern(id, registry.group_of(id));
  };
  auto add_edge = [&](UserId src, UserId dst, ActionType type, std::int64_t ts) {
    if (src == dst) return;  // self-loops carry no inter-user influence
    NodeIndex s = intern(src);
    NodeIndex d = intern(dst);
    g.edges.push_back(InteractionEdge{s, d, type, ts});
  };

  for (const auto& rec : records) {
    if (rec.in_reply_to_user_id)
      add_edge(rec.user_id, *rec.in_reply_to_user_id, ActionType::Reply,
               rec.created_at);

    auto rt = detect_retweet(rec);
    if (rt) {
      add_edge(rec.user_id, rt->root_user_id, ActionType::Retweet,
               rec.created_at);
      // The root always appears in the mentions of a retweet; that one
      // mention is the retweet itself, not an extra action.
      bool consumed = false;
      for (const auto& m : rec.mentions) {
        if (!consumed && m.user_id == rt->root_user_id) {
          consumed = true;
          continue;
        }
        add_edge(rec.user_id, m.user_id, ActionType::Mention, rec.created_at);
      }
    } else {
      for (const auto& m : rec.mentions)
        add_edge(rec.user_id, m.user_id, ActionType::Mention, rec.created_at);
    }
  }
  return g;
}

FollowerGraph collapse_to_follower_graph(const InteractionGraph& ig) {
  struct Triple {
    NodeIndex src, dst;
    std::int64_t ts;
  };
  std::vector<Triple> triples;
  triples.reserve(ig.edges.size());
  for (const auto& e : ig.edges) triples.push_back({e.src, e.dst, e.ts});
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.ts < b.ts;
  });

  FollowerGraph fg;
  fg.nodes = ig.nodes;
  const std::size_t n = fg.nodes.size();
  fg.fwd_offsets.assign(n + 1, 0);

  std::vector<Triple> kept;
  kept.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (i > 0 && triples[i].src == triples[i - 1].src &&
        triples[i].dst == triples[i - 1].dst)
      continue;  // later timestamp for the same pair
    kept.push_back(triples[i]);
  }

  fg.fwd_targets.reserve(kept.size());
  fg.fwd_ts.reserve(kept.size());
  for (const auto& t : kept) ++fg.fwd_offsets[t.src + 1];
  for (std::size_t i = 0; i < n; ++i) fg.fwd_offsets[i + 1] += fg.fwd_offsets[i];
  for (const auto& t : kept) {
    fg.fwd_targets.push_back(t.dst);
    fg.fwd_ts.push_back(t.ts);
  }
  fg.rebuild_reverse();
  return fg;
}

CcdfTable ccdf_from_values(std::span<const std::uint64_t> values) {
  std::vector<std::uint64_t> nz;
  nz.reserve(values.size());
  for (auto v : values)
    if (v != 0) nz.push_back(v);
  CcdfTable table;
  if (nz.empty()) return table;
  std::sort(nz.begin(), nz.end());
  const double total = static_cast<double>(nz.size());
  std::size_t i = 0;
  while (i < nz.size()) {
    std::size_t j = i;
    while (j < nz.size() && nz[j] == nz[i]) ++j;
    // entities with value >= nz[i] are exactly those at positions i..end
    table.points.push_back(
        CcdfPoint{nz[i], static_cast<double>(nz.size() - i) / total});
    i = j;
  }
  return table;
}

namespace {

CcdfTable group_degree_ccdf(const std::vector<std::uint64_t>& degrees,
                            const std::vector<Group>& groups, Group want) {
  std::vector<std::uint64_t> vals;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (groups[i] == want) vals.push_back(degrees[i]);
  return ccdf_from_values(vals);
}

}  // namespace

CcdfTable degree_ccdf(const InteractionGraph& g, Direction dir, Group group) {
  auto deg = dir == Direction::In ? g.in_degrees() : g.out_degrees();
  return group_degree_ccdf(deg, g.nodes.groups(), group);
}

CcdfTable degree_ccdf(const FollowerGraph& g, Direction dir, Group group) {
  auto deg = dir == Direction::In ? g.in_degrees() : g.out_degrees();
  return group_degree_ccdf(deg, g.nodes.groups(), group);
}

namespace {

struct UnionFind {
  std::vector<NodeIndex> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  NodeIndex find(NodeIndex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(NodeIndex a, NodeIndex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);  // smaller index becomes the root
    parent[b] = a;
  }
};

}  // namespace

Components connected_components(const FollowerGraph& fg) {
  const std::size_t n = fg.nodes.size();
  UnionFind uf(n);
  for (std::size_t src = 0; src < n; ++src)
    for (NodeIndex dst : fg.follows(static_cast<NodeIndex>(src)))
      uf.unite(static_cast<NodeIndex>(src), dst);

  Components out;
  out.component_of.assign(n, 0);
  std::unordered_map<NodeIndex, std::uint32_t> comp_id;
  comp_id.reserve(n / 4 + 1);
  for (std::size_t i = 0; i < n; ++i) {
    NodeIndex root = uf.find(static_cast<NodeIndex>(i));
    auto it = comp_id.find(root);
    std::uint32_t id;
    if (it == comp_id.end()) {
      id = static_cast<std::uint32_t>(out.sizes.size());
      comp_id.emplace(root, id);
      out.sizes.push_back(0);
    } else {
      id = it->second;
    }
    out.component_of[i] = id;
    ++out.sizes[id];
  }
  out.largest = 0;
  for (std::uint32_t c = 1; c < out.sizes.size(); ++c)
    if (out.sizes[c] > out.sizes[out.largest]) out.largest = c;
  return out;
}

UndirectedGraph make_undirected(
    std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges) {
  std::vector<std::pair<NodeIndex, NodeIndex>> sym;
  sym.reserve(edges.size() * 2);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    sym.emplace_back(a, b);
    sym.emplace_back(b, a);
  }
  std::sort(sym.begin(), sym.end());
  sym.erase(std::unique(sym.begin(), sym.end()), sym.end());

  UndirectedGraph g;
  g.offsets.assign(n + 1, 0);
  for (auto [a, b] : sym) ++g.offsets[a + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.neighbors.reserve(sym.size());
  for (auto [a, b] : sym) g.neighbors.push_back(b);
  return g;
}

ComponentSubgraph largest_component_subgraph(const FollowerGraph& fg,
                                             const Components& comps) {
  ComponentSubgraph sub;
  const std::size_t n = fg.nodes.size();
  if (comps.sizes.empty()) {
    sub.graph.offsets.assign(1, 0);
    return sub;
  }
  std::vector<NodeIndex> local(n, kNoNode);
  for (std::size_t i = 0; i < n; ++i) {
    if (comps.component_of[i] == comps.largest) {
      local[i] = static_cast<NodeIndex>(sub.global_index.size());
      sub.global_index.push_back(static_cast<NodeIndex>(i));
    }
  }
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  for (NodeIndex g : sub.global_index)
    for (NodeIndex t : fg.follows(g))
      if (local[t] != kNoNode) edges.emplace_back(local[g], local[t]);
  sub.graph = make_undirected(sub.global_index.size(), edges);
  return sub;
}

std::vector<std::uint32_t> kcore_decomposition(const UndirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> degree(n), coreness(n, 0);
  std::uint32_t max_degree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    degree[i] = static_cast<std::uint32_t>(g.offsets[i + 1] - g.offsets[i]);
    max_degree = std::max(max_degree, degree[i]);
  }
  if (n == 0) return coreness;

  // Bucket peeling: vert holds nodes sorted by current degree, pos is the
  // inverse permutation, bin[d] marks where degree-d nodes start. Ties start
  // in ascending node-index order and the peel is fully deterministic.
  std::vector<std::uint64_t> bin(max_degree + 2, 0);
  for (std::size_t i = 0; i < n; ++i) ++bin[degree[i] + 1];
  for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
  std::vector<NodeIndex> vert(n);
  std::vector<std::uint64_t> pos(n);
  {
    std::vector<std::uint64_t> cursor(bin.begin(), bin.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      pos[i] = cursor[degree[i]]++;
      vert[pos[i]] = static_cast<NodeIndex>(i);
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    NodeIndex v = vert[k];
    coreness[v] = degree[v];
    for (NodeIndex u : g.adj(v)) {
      if (degree[u] > degree[v]) {
        // swap u with the first vertex of its degree bucket, then shrink
        std::uint64_t du = degree[u];
        std::uint64_t pu = pos[u];
        std::uint64_t pw = bin[du];
        NodeIndex w = vert[pw];
        if (u != w) {
          std::swap(vert[pu], vert[pw]);
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --degree[u];
      }
    }
  }
  return coreness;
}

GroupAverages group_averages(std::span<const double> values,
                             std::span<const Group> groups) {
  KahanSum sums[2];
  std::uint64_t counts[2] = {0, 0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    int g = groups[i] == Group::Troll ? 1 : 0;
    sums[g].add(values[i]);
    ++counts[g];
  }
  GroupAverages out;
  if (counts[0] > 0) out.regular = sums[0].value() / static_cast<double>(counts[0]);
  if (counts[1] > 0) out.troll = sums[1].value() / static_cast<double>(counts[1]);
  return out;
}

namespace {

GroupAverages degree_group_averages(const std::vector<std::uint64_t>& deg,
                                    const std::vector<Group>& groups) {
  std::vector<double> vals(deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i)
    vals[i] = static_cast<double>(deg[i]);
  return group_averages(vals, groups);
}

}  // namespace

GroupAverages group_averages(const InteractionGraph& g, DegreeMetric m) {
  return degree_group_averages(
      m == DegreeMetric::InDegree ? g.in_degrees() : g.out_degrees(),
      g.nodes.groups());
}

GroupAverages group_averages(const FollowerGraph& g, DegreeMetric m) {
  return degree_group_averages(
      m == DegreeMetric::InDegree ? g.in_degrees() : g.out_degrees(),
      g.nodes.groups());
}

namespace {

constexpr char kFgrMagic[4] = {'F', 'G', 'R', '1'};

template <typename T>
void write_pod(std::ofstream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_pod(std::ifstream& in, T* data, std::size_t count,
              const std::string& path) {
  in.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(count * sizeof(T)));
  if (!in) throw DataError("truncated follower binary: " + path);
}

}  // namespace

// Layout: magic "FGR1", u64 node count, u64 edge count, (n+1) u64 forward
// offsets, m u64 targets, m i64 timestamps. Little-endian throughout.
void write_follower_bin(const FollowerGraph& fg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out.write(kFgrMagic, 4);
  std::uint64_t n = fg.nodes.size();
  std::uint64_t m = fg.fwd_targets.size();
  write_pod(out, &n, 1);
  write_pod(out, &m, 1);
  write_pod(out, fg.fwd_offsets.data(), fg.fwd_offsets.size());
  std::vector<std::uint64_t> targets(fg.fwd_targets.begin(),
                                     fg.fwd_targets.end());
  write_pod(out, targets.data(), targets.size());
  write_pod(out, fg.fwd_ts.data(), fg.fwd_ts.size());
  out.close();
  if (out.fail()) throw DataError("write failed: " + path);
}

FollowerGraph read_follower_bin(const std::string& path,
                                std::vector<UserId> ids,
                                std::vector<Group> groups) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  char magic[4];
  read_pod(in, magic, 4, path);
  if (std::memcmp(magic, kFgrMagic, 4) != 0)
    throw DataError("bad magic in follower binary: " + path);
  std::uint64_t n = 0, m = 0;
  read_pod(in, &n, 1, path);
  read_pod(in, &m, 1, path);
  if (ids.size() != n || groups.size() != n)
    throw DataError("node table does not match follower binary: " + path);

  FollowerGraph fg;
  for (std::size_t i = 0; i < n; ++i) fg.nodes.intern(ids[i], groups[i]);
  fg.fwd_offsets.resize(n + 1);
  read_pod(in, fg.fwd_offsets.data(), n + 1, path);
  std::vector<std::uint64_t> targets(m);
  read_pod(in, targets.data(), m, path);
  fg.fwd_targets.assign(targets.begin(), targets.end());
  fg.fwd_ts.resize(m);
  read_pod(in, fg.fwd_ts.data(), m, path);
  if (fg.fwd_offsets[0] != 0 || fg.fwd_offsets[n] != m)
    throw DataError("inconsistent offsets in follower binary: " + path);
  fg.rebuild_reverse();
  return fg;
}

}  // namespace casflow
