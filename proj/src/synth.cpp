#include "casflow/synth.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "casflow/ingest.hpp"
#include "casflow/timeutil.hpp"
#include "casflow/tsv.hpp"

namespace casflow {

using nlohmann::json;

namespace {

constexpr UserId kUserBase = 1000000;
constexpr TweetId kTweetBase = 5000000;

struct Emitter {
  std::vector<std::string>* out;
  std::int64_t next_ts;
  TweetId next_tweet_id = kTweetBase;

  TweetId emit(UserId user, const std::string& screen_name,
               const std::string& text,
               const std::vector<std::pair<UserId, std::string>>& mentions,
               const std::vector<std::string>& urls) {
    json j;
    j["tweet_id"] = next_tweet_id;
    j["user_id"] = user;
    j["screen_name"] = screen_name;
    j["created_at"] = format_timestamp_utc(next_ts);
    j["text"] = text;
    j["mentions"] = json::array();
    for (const auto& [id, name] : mentions)
      j["mentions"].push_back({{"user_id", id}, {"screen_name", name}});
    j["urls"] = urls;
    out->push_back(j.dump());
    ++next_ts;
    return next_tweet_id++;
  }
};

std::string screen_name_of(std::uint32_t user_index) {
  return "u" + std::to_string(user_index);
}

}  // namespace

SynthCorpus gen_synthetic(const SynthPlan& plan) {
  if (plan.n_users == 0 || plan.min_size == 0 || plan.max_size < plan.min_size)
    throw ConfigError("invalid synthetic plan parameters");
  if (plan.quote_count > 0 && plan.n_cascades == 0)
    throw ConfigError("quote fixtures need at least one cascade");

  std::mt19937_64 rng(plan.seed);
  SynthCorpus corpus;
  Emitter em{&corpus.jsonl,
             days_from_civil(2016, 9, 21) * 86400};

  // Deterministic troll subset.
  std::uint32_t n_trolls = static_cast<std::uint32_t>(
      plan.troll_fraction * static_cast<double>(plan.n_users));
  if (plan.hub_cascades > 0 && n_trolls == 0) n_trolls = 1;
  std::vector<std::uint32_t> perm(plan.n_users);
  for (std::uint32_t i = 0; i < plan.n_users; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<bool> troll(plan.n_users, false);
  for (std::uint32_t i = 0; i < n_trolls && i < plan.n_users; ++i) {
    troll[perm[i]] = true;
    corpus.troll_ids.push_back(kUserBase + perm[i]);
  }
  std::sort(corpus.troll_ids.begin(), corpus.troll_ids.end());

  // Sequential allocation keeps retweeter pools disjoint across cascades, so
  // the only follow relations a retweeter has are the planted ones.
  std::uint32_t cursor = 0;
  auto take_user = [&]() -> std::uint32_t {
    if (cursor >= plan.n_users)
      throw ConfigError("synthetic plan needs more users than n_users");
    return cursor++;
  };
  // Finds an unallocated troll for the hub; swaps the troll flag down to the
  // cursor position so allocation stays sequential. Ids are rebuilt at the end.
  auto take_troll_hub = [&]() -> std::uint32_t {
    for (std::uint32_t i = cursor; i < plan.n_users; ++i) {
      if (troll[i]) {
        if (i != cursor) std::swap(troll[i], troll[cursor]);
        return cursor++;
      }
    }
    throw ConfigError("no troll available for the hub plan");
  };

  struct CascadePlan {
    CascadeShape shape;
    std::uint32_t size;
    bool hub = false;
    bool duplicate_root = false;
  };
  std::vector<CascadePlan> cplans;
  {
    double total =
        plan.star_weight + plan.chain_weight + plan.tree_weight;
    if (total <= 0.0) throw ConfigError("shape weights must not all be zero");
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::uint32_t> size_dist(plan.min_size,
                                                           plan.max_size);
    for (std::uint32_t c = 0; c < plan.n_cascades; ++c) {
      double r = u01(rng) * total;
      CascadeShape shape = r < plan.star_weight ? CascadeShape::Star
                           : r < plan.star_weight + plan.chain_weight
                               ? CascadeShape::Chain
                               : CascadeShape::RandomTree;
      std::uint32_t size = size_dist(rng);
      if (shape == CascadeShape::Chain && plan.chain_cap > 0)
        size = std::min(size, plan.chain_cap);
      cplans.push_back(CascadePlan{shape, size, false, false});
    }
    for (std::uint32_t h = 0; h < plan.hub_cascades; ++h)
      cplans.push_back(CascadePlan{CascadeShape::Star, plan.hub_size, true, false});
    if (plan.plant_duplicate_root)
      cplans.push_back(
          CascadePlan{CascadeShape::Star, plan.min_size, false, true});
  }

  std::uint32_t hub_user_index = 0;
  bool hub_allocated = false;

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uint32_t cascade_seq = 0;
  std::string first_cascade_text;
  UserId first_cascade_root = 0;
  std::string first_cascade_root_name;
  std::string first_cascade_url;

  for (const auto& cp : cplans) {
    // Root allocation; the hub roots all of its cascades.
    std::uint32_t root_index;
    if (cp.hub) {
      if (!hub_allocated) {
        hub_user_index = take_troll_hub();
        hub_allocated = true;
      }
      root_index = hub_user_index;
    } else {
      root_index = take_user();
    }
    UserId root_id = kUserBase + root_index;
    std::string root_name = screen_name_of(root_index);

    std::string url = "https://ex.net/c" + std::to_string(cascade_seq);
    std::string text =
        "cascade " + std::to_string(cascade_seq) + " content " + url;

    if (cascade_seq == 0) {
      first_cascade_text = text;
      first_cascade_root = root_id;
      first_cascade_root_name = root_name;
      first_cascade_url = url;
    }

    std::vector<std::uint32_t> members(cp.size);
    for (auto& m : members) m = take_user();

    PlantedTree truth;
    truth.normalized_text = text;
    truth.root = root_id;
    truth.root_is_troll = troll[root_index];

    // Original root post for about two thirds of the cascades; the rest
    // exercise the unknown-root-timestamp path.
    bool emit_root_post = cp.duplicate_root || u01(rng) < 0.67;
    if (emit_root_post) em.emit(root_id, root_name, text, {}, {url});

    // Planted parents, then the follow preludes they require.
    std::vector<std::uint32_t> parent_of(cp.size);  // index into members; ~0 = root
    constexpr std::uint32_t kRootParent = 0xFFFFFFFFu;
    for (std::uint32_t k = 0; k < cp.size; ++k) {
      switch (cp.shape) {
        case CascadeShape::Star:
          parent_of[k] = kRootParent;
          break;
        case CascadeShape::Chain:
          parent_of[k] = k == 0 ? kRootParent : k - 1;
          break;
        case CascadeShape::RandomTree:
          if (k == 0 || u01(rng) < 0.3) {
            parent_of[k] = kRootParent;
          } else {
            std::uniform_int_distribution<std::uint32_t> pick(0, k - 1);
            parent_of[k] = pick(rng);
          }
          break;
      }
    }

    if (cp.shape == CascadeShape::Chain) {
      // Full follow graph among the members: every ordered pair mentions.
      for (std::uint32_t a = 0; a < cp.size; ++a)
        for (std::uint32_t b = 0; b < cp.size; ++b) {
          if (a == b) continue;
          std::uint32_t ua = members[a], ub = members[b];
          em.emit(kUserBase + ua, screen_name_of(ua),
                  "@" + screen_name_of(ub) + " hello",
                  {{kUserBase + ub, screen_name_of(ub)}}, {});
        }
    } else {
      for (std::uint32_t k = 0; k < cp.size; ++k) {
        if (parent_of[k] == kRootParent) continue;
        std::uint32_t child = members[k], par = members[parent_of[k]];
        em.emit(kUserBase + child, screen_name_of(child),
                "@" + screen_name_of(par) + " hello",
                {{kUserBase + par, screen_name_of(par)}}, {});
      }
    }

    if (cp.duplicate_root) {
      // Same author, identical text, later timestamp: must merge.
      em.emit(root_id, root_name, text, {}, {url});
    }

    // Retweets in planted order; parents always precede children in time.
    std::string rt_prefix_name = root_name;
    std::vector<std::uint32_t> repeats;
    for (std::uint32_t k = 0; k < cp.size; ++k) {
      std::uint32_t member = members[k];
      std::string name = rt_prefix_name;
      if (u01(rng) < 0.25 && !name.empty())
        name[0] = static_cast<char>(std::toupper(
            static_cast<unsigned char>(name[0])));  // case-insensitive match
      std::string rt_text = "RT @" + name + ": " + text;
      TweetId tid = em.emit(kUserBase + member, screen_name_of(member), rt_text,
                            {{root_id, root_name}}, {url});
      corpus.retweet_roots.emplace_back(tid, root_id);
      ++corpus.planted_retweets;
      if (u01(rng) < plan.repeat_prob) repeats.push_back(member);

      UserId parent_id = parent_of[k] == kRootParent
                             ? root_id
                             : kUserBase + members[parent_of[k]];
      truth.parents.emplace_back(kUserBase + member, parent_id);
    }
    for (std::uint32_t member : repeats) {
      std::string rt_text = "RT @" + root_name + ": " + text;
      TweetId tid = em.emit(kUserBase + member, screen_name_of(member), rt_text,
                            {{root_id, root_name}}, {url});
      corpus.retweet_roots.emplace_back(tid, root_id);
      ++corpus.planted_retweets;
    }

    corpus.trees.push_back(std::move(truth));
    ++cascade_seq;
  }

  // Quote-style retweets of the first cascade: the extra comment changes the
  // grouping text, so each quote lands in its own singleton group.
  for (std::uint32_t q = 0; q < plan.quote_count; ++q) {
    std::uint32_t quoter = take_user();
    std::string qt = "RT @" + first_cascade_root_name + ": " +
                     first_cascade_text + " my take " + std::to_string(q);
    TweetId tid = em.emit(kUserBase + quoter, screen_name_of(quoter), qt,
                          {{first_cascade_root, first_cascade_root_name}},
                          {first_cascade_url});
    corpus.retweet_roots.emplace_back(tid, first_cascade_root);
    ++corpus.planted_retweets;
  }

  // Noise: plain posts, RT-lookalikes without a resolvable mention, and
  // retweet-shaped texts without URLs. None of them may form cascades.
  if (plan.noise_tweets > 0) {
    std::uint32_t pool = std::min<std::uint32_t>(
        10, plan.n_users > cursor ? plan.n_users - cursor : 0);
    if (pool > 0) {
      std::vector<std::uint32_t> noise_users(pool);
      for (auto& nu : noise_users) nu = take_user();
      for (std::uint32_t i = 0; i < plan.noise_tweets; ++i) {
        std::uint32_t author = noise_users[i % pool];
        switch (i % 3) {
          case 0:
            em.emit(kUserBase + author, screen_name_of(author),
                    "just a plain post " + std::to_string(i), {}, {});
            break;
          case 1:
            em.emit(kUserBase + author, screen_name_of(author),
                    "RT this is great news " + std::to_string(i), {},
                    {"https://ex.net/noise"});
            break;
          case 2: {
            std::uint32_t other = noise_users[(i + 1) % pool];
            em.emit(kUserBase + author, screen_name_of(author),
                    "RT @" + screen_name_of(other) + ": look " +
                        std::to_string(i),
                    {{kUserBase + other, screen_name_of(other)}}, {});
            break;
          }
        }
      }
    }
  }

  // The hub swap above may have moved troll flags; rebuild the id list.
  corpus.troll_ids.clear();
  for (std::uint32_t i = 0; i < plan.n_users; ++i)
    if (troll[i]) corpus.troll_ids.push_back(kUserBase + i);
  return corpus;
}

void write_synth_corpus(const SynthCorpus& corpus, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream out(fs::path(out_dir) / "corpus.jsonl", std::ios::binary);
    if (!out) throw DataError("cannot write corpus.jsonl under " + out_dir);
    for (const auto& line : corpus.jsonl) out << line << '\n';
  }
  {
    std::ofstream out(fs::path(out_dir) / "trolls.txt", std::ios::binary);
    if (!out) throw DataError("cannot write trolls.txt under " + out_dir);
    for (UserId id : corpus.troll_ids) out << id << '\n';
  }
  {
    TsvWriter w((fs::path(out_dir) / "truth_parents.tsv").string(),
                {"cascade_key_hash", "root_user_id", "child_user_id",
                 "parent_user_id"});
    for (const auto& tree : corpus.trees) {
      std::string key =
          to_hex(cascade_key_hash(tree.normalized_text, tree.root));
      for (const auto& [child, parent] : tree.parents)
        w.row({key, std::to_string(tree.root), std::to_string(child),
               std::to_string(parent)});
    }
    w.close();
  }
  {
    TsvWriter w((fs::path(out_dir) / "truth_retweets.tsv").string(),
                {"tweet_id", "root_user_id"});
    for (const auto& [tid, root] : corpus.retweet_roots)
      w.row({std::to_string(tid), std::to_string(root)});
    w.close();
  }
}

}  // namespace casflow
