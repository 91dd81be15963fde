#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "casflow/common.hpp"

namespace casflow {

enum class CascadeShape : std::uint8_t { Star, Chain, RandomTree };

// Plan for a reproducible synthetic corpus with planted cascades: known
// roots, known diffusion trees, plus the two documented recovery failure
// modes (duplicate identical root posts, quote tweets) on demand.
struct SynthPlan {
  std::uint64_t seed = 1;
  std::uint32_t n_users = 2000;
  std::uint32_t n_cascades = 10;
  double troll_fraction = 0.05;
  std::uint32_t min_size = 110;  // distinct retweeters per cascade
  std::uint32_t max_size = 200;
  // Shape mix. Chains plant a full follow graph among the participants, so
  // a positive chain_cap bounds their size (0 leaves them uncapped).
  double star_weight = 0.4;
  double chain_weight = 0.2;
  double tree_weight = 0.4;
  std::uint32_t chain_cap = 0;
  // Optional troll hub rooting several large star cascades.
  std::uint32_t hub_cascades = 0;
  std::uint32_t hub_size = 0;
  // Probability that a retweeter repeats the retweet at a later time.
  double repeat_prob = 0.05;
  std::uint32_t noise_tweets = 50;
  bool plant_duplicate_root = false;  // same author posts identical text twice
  std::uint32_t quote_count = 0;      // quote-style retweets with altered text
};

struct PlantedTree {
  std::string normalized_text;
  UserId root = 0;
  bool root_is_troll = false;
  // child -> parent over distinct retweeters; parent may be the root.
  std::vector<std::pair<UserId, UserId>> parents;
};

struct SynthCorpus {
  std::vector<std::string> jsonl;          // corpus lines in timestamp order
  std::vector<UserId> troll_ids;           // sorted
  std::vector<PlantedTree> trees;
  // Ground truth for every planted retweet line (including quotes).
  std::vector<std::pair<TweetId, UserId>> retweet_roots;
  std::uint64_t planted_retweets = 0;
};

SynthCorpus gen_synthetic(const SynthPlan& plan);

// Writes corpus.jsonl, trolls.tsv, truth_parents.tsv and truth_retweets.tsv.
void write_synth_corpus(const SynthCorpus& corpus, const std::string& out_dir);

}  // namespace casflow
