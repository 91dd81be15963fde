#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "casflow/common.hpp"

namespace casflow {

struct Mention {
  UserId user_id = 0;
  std::string screen_name;
};

// One ingested post. URLs are stored normalized.
struct TweetRecord {
  TweetId tweet_id = 0;
  UserId user_id = 0;
  std::string screen_name;
  std::int64_t created_at = 0;
  std::string text;
  std::vector<Mention> mentions;
  std::vector<std::string> urls;
  std::optional<UserId> in_reply_to_user_id;
};

struct RetweetInfo {
  UserId retweeter_id = 0;
  UserId root_user_id = 0;
  std::string root_screen_name;  // canonical casing from the mentions list
  std::int64_t created_at = 0;
  std::string normalized_text;   // "RT @name:" prefix stripped, whitespace collapsed
  std::vector<std::string> urls;
};

struct CascadeEvent {
  UserId retweeter_id = 0;
  std::int64_t created_at = 0;
};

// A recovered retweet cascade. Events are sorted by (created_at, retweeter_id)
// and include repeat retweets; n_distinct excludes the root user.
struct Cascade {
  std::uint64_t key_hash = 0;  // fnv over (normalized_text, root_user_id)
  std::string normalized_text;
  UserId root_user_id = 0;
  std::optional<TweetRecord> root_tweet;       // present when the original post is in the corpus
  std::optional<std::int64_t> root_post_ts;    // its timestamp (survives TSV round trips)
  std::vector<CascadeEvent> events;
  std::vector<std::string> urls;               // sorted, unique
  std::uint64_t n_distinct = 0;
};

std::uint64_t cascade_key_hash(const std::string& normalized_text,
                               UserId root_user_id);

class TrollRegistry {
 public:
  void insert(UserId id, const std::string& label = std::string());
  bool is_troll(UserId id) const { return ids_.count(id) != 0; }
  Group group_of(UserId id) const {
    return is_troll(id) ? Group::Troll : Group::Regular;
  }
  std::optional<std::string> label_of(UserId id) const;
  std::size_t size() const { return ids_.size(); }
  std::vector<UserId> sorted_ids() const;

 private:
  std::unordered_set<UserId> ids_;
  std::unordered_map<UserId, std::string> labels_;
};

// One id per line, optional "\t<label>". Duplicate lines collapse
// (first label wins). Unparseable lines are fatal with their line number.
TrollRegistry load_troll_registry(const std::string& path);

struct ParseStats {
  std::uint64_t total_lines = 0;
  std::uint64_t skipped = 0;
};

// JSON Lines corpus. Malformed lines are counted and skipped; more than 50%
// malformed is treated as a corpus-format error.
std::vector<TweetRecord> parse_corpus(std::istream& in, ParseStats* stats = nullptr);
std::vector<TweetRecord> parse_corpus_file(const std::string& path,
                                           ParseStats* stats = nullptr);

// Lowercases scheme and host, strips one trailing slash, keeps the query.
std::string normalize_url(const std::string& url);

// Collapses whitespace runs to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view text);

// A record is a retweet iff its text starts with "RT @<name>:", <name>
// resolves to a user id through the record's own mentions (case-insensitive)
// and the record carries at least one URL.
std::optional<RetweetInfo> detect_retweet(const TweetRecord& t);

// Groups detected retweets by (normalized_text, root_user_id) and keeps the
// groups with at least min_retweeters distinct retweeters (root excluded).
// Result is sorted by descending event count.
std::vector<Cascade> group_cascades(const std::vector<TweetRecord>& records,
                                    std::uint64_t min_retweeters);

}  // namespace casflow
