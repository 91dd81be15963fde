#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// here (flood fill, peeling, all-pairs BFS, pair dedup) deliberately avoid
// the library's own algorithms.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "casflow/cascade.hpp"
#include "casflow/graph.hpp"
#include "casflow/ingest.hpp"
#include "casflow/timeutil.hpp"

namespace testutil {

using namespace casflow;

// 2016-09-21T00:00:00Z, the start of the observation window.
inline std::int64_t base_ts() { return days_from_civil(2016, 9, 21) * 86400; }

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("casflow_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// --- corpus line builders ----------------------------------------------------

inline std::string json_line(
    TweetId tweet_id, UserId user_id, const std::string& screen_name,
    std::int64_t ts, const std::string& text,
    const std::vector<std::pair<UserId, std::string>>& mentions,
    const std::vector<std::string>& urls,
    std::optional<UserId> reply_to = std::nullopt) {
  nlohmann::json j;
  j["tweet_id"] = tweet_id;
  j["user_id"] = user_id;
  j["screen_name"] = screen_name;
  j["created_at"] = format_timestamp_utc(ts);
  j["text"] = text;
  j["mentions"] = nlohmann::json::array();
  for (const auto& [id, name] : mentions)
    j["mentions"].push_back({{"user_id", id}, {"screen_name", name}});
  j["urls"] = urls;
  if (reply_to) j["in_reply_to_user_id"] = *reply_to;
  return j.dump();
}

inline TweetRecord make_record(
    TweetId tweet_id, UserId user_id, std::int64_t ts, const std::string& text,
    const std::vector<std::pair<UserId, std::string>>& mentions,
    const std::vector<std::string>& urls) {
  TweetRecord r;
  r.tweet_id = tweet_id;
  r.user_id = user_id;
  r.screen_name = "u" + std::to_string(user_id);
  r.created_at = ts;
  r.text = text;
  for (const auto& [id, name] : mentions) r.mentions.push_back({id, name});
  for (const auto& u : urls) r.urls.push_back(normalize_url(u));
  return r;
}

inline std::vector<TweetRecord> parse_lines(const std::vector<std::string>& lines,
                                            ParseStats* stats = nullptr) {
  std::string joined;
  for (const auto& l : lines) {
    joined += l;
    joined += '\n';
  }
  std::istringstream in(joined);
  return parse_corpus(in, stats);
}

// --- the toy cascade: one root, five retweeters -------------------------------
//
// ruth posts the original tweet; ann, ben, eve, cam, dan retweet it in that
// order. ben and eve follow ann, cam follows ben, dan follows nobody. The
// expected tree is ruth->{ann,dan}, ann->{ben,eve}, ben->{cam}.

struct ToyCascade {
  static constexpr UserId ruth = 101, ann = 102, ben = 103, cam = 104,
                          dan = 105, eve = 106;
  std::vector<std::string> lines;
};

inline ToyCascade toy_cascade_corpus() {
  ToyCascade toy;
  std::int64_t t0 = base_ts();
  const std::string url = "https://ex.am/p";
  const std::string text = "Vote now " + url;
  const std::string rt = "RT @ruth: " + text;
  auto& L = toy.lines;
  // follow preludes (a mention of x by y makes y a follower of x)
  L.push_back(json_line(1, ToyCascade::ben, "ben", t0 + 1, "@ann hi",
                        {{ToyCascade::ann, "ann"}}, {}));
  L.push_back(json_line(2, ToyCascade::eve, "eve", t0 + 2, "@ann hello",
                        {{ToyCascade::ann, "ann"}}, {}));
  L.push_back(json_line(3, ToyCascade::cam, "cam", t0 + 3, "@ben yo",
                        {{ToyCascade::ben, "ben"}}, {}));
  // original post
  L.push_back(json_line(4, ToyCascade::ruth, "ruth", t0 + 9, text, {}, {url}));
  // retweets
  L.push_back(json_line(5, ToyCascade::ann, "ann", t0 + 10, rt,
                        {{ToyCascade::ruth, "ruth"}}, {url}));
  L.push_back(json_line(6, ToyCascade::ben, "ben", t0 + 20, rt,
                        {{ToyCascade::ruth, "ruth"}}, {url}));
  L.push_back(json_line(7, ToyCascade::eve, "eve", t0 + 30, rt,
                        {{ToyCascade::ruth, "ruth"}}, {url}));
  L.push_back(json_line(8, ToyCascade::cam, "cam", t0 + 40, rt,
                        {{ToyCascade::ruth, "ruth"}}, {url}));
  L.push_back(json_line(9, ToyCascade::dan, "dan", t0 + 50, rt,
                        {{ToyCascade::ruth, "ruth"}}, {url}));
  return toy;
}

// --- independent oracles -------------------------------------------------------

// Flood-fill component partition over an undirected edge view.
inline std::vector<std::uint32_t> floodfill_components(
    std::size_t n, const std::vector<std::pair<NodeIndex, NodeIndex>>& edges) {
  std::vector<std::vector<NodeIndex>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::uint32_t> comp(n, 0xFFFFFFFFu);
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != 0xFFFFFFFFu) continue;
    std::deque<NodeIndex> queue{static_cast<NodeIndex>(s)};
    comp[s] = next;
    while (!queue.empty()) {
      NodeIndex v = queue.front();
      queue.pop_front();
      for (NodeIndex w : adj[v]) {
        if (comp[w] == 0xFFFFFFFFu) {
          comp[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Repeated-peeling coreness: for k = 0, 1, ... strip every node whose
// remaining degree is <= k until none is left.
inline std::vector<std::uint32_t> peeling_coreness(const UndirectedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> coreness(n, 0);
  std::vector<std::int64_t> degree(n);
  std::vector<bool> removed(n, false);
  for (std::size_t i = 0; i < n; ++i)
    degree[i] = static_cast<std::int64_t>(g.adj(static_cast<NodeIndex>(i)).size());
  std::size_t left = n;
  std::uint32_t k = 0;
  while (left > 0) {
    bool stripped = true;
    while (stripped) {
      stripped = false;
      for (std::size_t v = 0; v < n; ++v) {
        if (removed[v] || degree[v] > k) continue;
        removed[v] = true;
        coreness[v] = k;
        --left;
        stripped = true;
        for (NodeIndex w : g.adj(static_cast<NodeIndex>(v)))
          if (!removed[w]) --degree[w];
      }
    }
    ++k;
  }
  return coreness;
}

// All-pairs-BFS structural virality over a tree given as parent pointers.
inline double bfs_virality(const std::vector<NodeIndex>& parent) {
  const std::size_t n = parent.size();
  std::vector<std::vector<NodeIndex>> adj(n);
  for (std::size_t v = 1; v < n; ++v) {
    adj[v].push_back(parent[v]);
    adj[parent[v]].push_back(static_cast<NodeIndex>(v));
  }
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::int64_t> dist(n, -1);
    std::deque<NodeIndex> queue{static_cast<NodeIndex>(s)};
    dist[s] = 0;
    while (!queue.empty()) {
      NodeIndex v = queue.front();
      queue.pop_front();
      for (NodeIndex w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) total += static_cast<std::uint64_t>(dist[t]);
  }
  return static_cast<double>(total) /
         (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Random tree as parent pointers (node 0 is the root).
inline std::vector<NodeIndex> random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<NodeIndex> parent(n, 0);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, v - 1);
    parent[v] = static_cast<NodeIndex>(pick(rng));
  }
  return parent;
}

inline CascadeTree tree_from_parents(const std::vector<NodeIndex>& parent) {
  CascadeTree t;
  const std::size_t n = parent.size();
  t.nodes.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    t.nodes[v].user = 1000 + v;
    t.nodes[v].first_ts = base_ts() + static_cast<std::int64_t>(v);
  }
  t.parent = parent;
  if (n > 0) t.parent[0] = kNoNode;
  t.children.assign(n, {});
  for (std::size_t v = 1; v < n; ++v)
    t.children[parent[v]].push_back(static_cast<NodeIndex>(v));
  return t;
}

// Directed random graph without self-loops or duplicate edges.
inline std::vector<std::pair<NodeIndex, NodeIndex>> random_digraph(
    std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && coin(rng) < p)
        edges.emplace_back(static_cast<NodeIndex>(u), static_cast<NodeIndex>(v));
  return edges;
}

// Follower graph with given follow edges ("src follows dst" at ts), built
// through the interaction-graph path.
inline FollowerGraph make_follower(
    const std::vector<UserId>& users,
    const std::vector<std::tuple<UserId, UserId, std::int64_t>>& follows,
    const TrollRegistry& registry = {}) {
  InteractionGraph ig;
  for (UserId u : users) ig.nodes.intern(u, registry.group_of(u));
  for (const auto& [src, dst, ts] : follows) {
    NodeIndex s = ig.nodes.intern(src, registry.group_of(src));
    NodeIndex d = ig.nodes.intern(dst, registry.group_of(dst));
    ig.edges.push_back(InteractionEdge{s, d, ActionType::Mention, ts});
  }
  return collapse_to_follower_graph(ig);
}

inline Cascade make_cascade(UserId root,
                            const std::vector<std::pair<UserId, std::int64_t>>& events,
                            std::optional<std::int64_t> root_ts = std::nullopt,
                            const std::vector<std::string>& urls = {"https://ex.am/x"}) {
  Cascade c;
  c.normalized_text = "fixture text";
  c.root_user_id = root;
  c.key_hash = cascade_key_hash(c.normalized_text, root);
  c.root_post_ts = root_ts;
  for (const auto& [user, ts] : events) c.events.push_back({user, ts});
  std::sort(c.events.begin(), c.events.end(),
            [](const CascadeEvent& a, const CascadeEvent& b) {
              if (a.created_at != b.created_at)
                return a.created_at < b.created_at;
              return a.retweeter_id < b.retweeter_id;
            });
  std::set<UserId> distinct;
  for (const auto& ev : c.events)
    if (ev.retweeter_id != root) distinct.insert(ev.retweeter_id);
  c.n_distinct = distinct.size();
  c.urls = urls;
  return c;
}

}  // namespace testutil
