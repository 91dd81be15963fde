#include <doctest.h>

#include <map>

#include "casflow/pipeline.hpp"
#include "casflow/synth.hpp"
#include "casflow/tsv.hpp"
#include "test_util.hpp"

using namespace casflow;
using namespace testutil;

namespace {

TrollRegistry registry_of(const SynthCorpus& corpus) {
  TrollRegistry reg;
  for (UserId id : corpus.troll_ids) reg.insert(id);
  return reg;
}

// Runs the in-memory recovery chain and returns child->parent per cascade key.
std::map<std::uint64_t, std::map<UserId, UserId>> recover_parents(
    const SynthCorpus& corpus, std::uint64_t min_retweeters) {
  auto records = parse_lines(corpus.jsonl);
  auto cascades = group_cascades(records, min_retweeters);
  auto ig = build_interaction_graph(records, registry_of(corpus));
  auto fg = collapse_to_follower_graph(ig);
  std::map<std::uint64_t, std::map<UserId, UserId>> out;
  for (const auto& c : cascades) {
    auto tree = build_cascade_tree(build_flow_graph(c, fg));
    auto& parents = out[c.key_hash];
    for (NodeIndex v = 1; v < tree.node_count(); ++v)
      parents[tree.nodes[v].user] = tree.nodes[tree.parent[v]].user;
  }
  return out;
}

SynthPlan small_plan() {
  SynthPlan plan;
  plan.seed = 99;
  plan.n_users = 900;
  plan.n_cascades = 6;
  plan.min_size = 25;
  plan.max_size = 50;
  plan.chain_cap = 25;
  plan.troll_fraction = 0.05;
  plan.noise_tweets = 30;
  return plan;
}

}  // namespace

TEST_CASE("gen_synthetic: a fixed seed reproduces the corpus byte for byte") {
  auto a = gen_synthetic(small_plan());
  auto b = gen_synthetic(small_plan());
  CHECK(a.jsonl == b.jsonl);
  CHECK(a.troll_ids == b.troll_ids);
  CHECK(a.retweet_roots == b.retweet_roots);

  auto plan2 = small_plan();
  plan2.seed = 100;
  auto c = gen_synthetic(plan2);
  CHECK(a.jsonl != c.jsonl);
}

TEST_CASE("gen_synthetic: planted star comes back as a star") {
  SynthPlan plan = small_plan();
  plan.star_weight = 1.0;
  plan.chain_weight = 0.0;
  plan.tree_weight = 0.0;
  plan.n_cascades = 3;
  auto corpus = gen_synthetic(plan);
  auto recovered = recover_parents(corpus, plan.min_size);
  REQUIRE(recovered.size() == corpus.trees.size());
  for (const auto& truth : corpus.trees) {
    auto key = cascade_key_hash(truth.normalized_text, truth.root);
    REQUIRE(recovered.count(key) == 1);
    for (const auto& [child, parent] : truth.parents) {
      CHECK(parent == truth.root);  // star ground truth
      CHECK(recovered[key][child] == parent);
    }
  }
}

TEST_CASE("gen_synthetic: planted chain under a full follow graph comes back") {
  SynthPlan plan = small_plan();
  plan.star_weight = 0.0;
  plan.chain_weight = 1.0;
  plan.tree_weight = 0.0;
  plan.n_cascades = 2;
  plan.chain_cap = 20;
  auto corpus = gen_synthetic(plan);
  auto recovered = recover_parents(corpus, 10);
  REQUIRE(recovered.size() == corpus.trees.size());
  for (const auto& truth : corpus.trees) {
    auto key = cascade_key_hash(truth.normalized_text, truth.root);
    REQUIRE(recovered.count(key) == 1);
    REQUIRE(recovered[key].size() == truth.parents.size());
    std::size_t root_children = 0;
    for (const auto& [child, parent] : truth.parents) {
      CHECK(recovered[key][child] == parent);
      if (parent == truth.root) ++root_children;
    }
    CHECK(root_children == 1);  // a chain hangs exactly one node off the root
  }
}

TEST_CASE("gen_synthetic: random trees are recovered exactly") {
  SynthPlan plan = small_plan();
  plan.star_weight = 0.0;
  plan.chain_weight = 0.0;
  plan.tree_weight = 1.0;
  plan.n_cascades = 4;
  auto corpus = gen_synthetic(plan);
  auto recovered = recover_parents(corpus, plan.min_size);
  REQUIRE(recovered.size() == corpus.trees.size());
  for (const auto& truth : corpus.trees) {
    auto key = cascade_key_hash(truth.normalized_text, truth.root);
    REQUIRE(recovered.count(key) == 1);
    REQUIRE(recovered[key].size() == truth.parents.size());
    for (const auto& [child, parent] : truth.parents)
      CHECK(recovered[key][child] == parent);
  }
}

TEST_CASE("gen_synthetic: retweet-to-root mapping is perfect on a mixed corpus") {
  SynthPlan plan = small_plan();
  plan.quote_count = 5;
  plan.plant_duplicate_root = true;
  auto corpus = gen_synthetic(plan);
  auto records = parse_lines(corpus.jsonl);
  std::map<TweetId, UserId> truth(corpus.retweet_roots.begin(),
                                  corpus.retweet_roots.end());
  std::size_t seen = 0;
  for (const auto& rec : records) {
    auto rt = detect_retweet(rec);
    auto it = truth.find(rec.tweet_id);
    if (it != truth.end()) {
      REQUIRE(rt.has_value());
      CHECK(rt->root_user_id == it->second);
      ++seen;
    } else {
      CHECK(!rt.has_value());  // noise and preludes never look like retweets
    }
  }
  CHECK(seen == corpus.retweet_roots.size());
}

TEST_CASE("gen_synthetic: hub plan roots multiple cascades at one troll") {
  SynthPlan plan = small_plan();
  plan.hub_cascades = 3;
  plan.hub_size = 60;
  plan.n_users = 1500;
  auto corpus = gen_synthetic(plan);
  std::map<UserId, int> root_count;
  for (const auto& t : corpus.trees) ++root_count[t.root];
  UserId hub = 0;
  for (const auto& [root, n] : root_count)
    if (n == 3) hub = root;
  REQUIRE(hub != 0);
  auto reg = registry_of(corpus);
  CHECK(reg.is_troll(hub));
}

TEST_CASE("write_synth_corpus writes the corpus and both truth files") {
  TempDir tmp("synthout");
  auto corpus = gen_synthetic(small_plan());
  write_synth_corpus(corpus, tmp.str());
  CHECK(read_file(tmp.file("corpus.jsonl")).size() > 0);
  CHECK(read_file(tmp.file("trolls.txt")).size() > 0);
  auto parents = read_tsv(tmp.file("truth_parents.tsv"),
                          {"cascade_key_hash", "root_user_id", "child_user_id",
                           "parent_user_id"});
  std::size_t expected = 0;
  for (const auto& t : corpus.trees) expected += t.parents.size();
  CHECK(parents.size() == expected);
  auto retweets =
      read_tsv(tmp.file("truth_retweets.tsv"), {"tweet_id", "root_user_id"});
  CHECK(retweets.size() == corpus.retweet_roots.size());
}

TEST_CASE("gen_synthetic: invalid plans are refused") {
  SynthPlan plan;
  plan.n_users = 10;  // not enough for any cascade
  plan.n_cascades = 2;
  plan.min_size = 50;
  plan.max_size = 60;
  CHECK_THROWS_AS(gen_synthetic(plan), ConfigError);

  SynthPlan bad;
  bad.min_size = 10;
  bad.max_size = 5;
  CHECK_THROWS_AS(gen_synthetic(bad), ConfigError);
}
