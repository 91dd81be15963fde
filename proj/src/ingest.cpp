#include "casflow/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "casflow/timeutil.hpp"

namespace casflow {

using nlohmann::json;

std::uint64_t cascade_key_hash(const std::string& normalized_text,
                               UserId root_user_id) {
  std::uint64_t h = fnv1a(normalized_text.data(), normalized_text.size());
  return fnv1a_u64(root_user_id, h);
}

void TrollRegistry::insert(UserId id, const std::string& label) {
  if (ids_.insert(id).second && !label.empty()) labels_.emplace(id, label);
}

std::optional<std::string> TrollRegistry::label_of(UserId id) const {
  auto it = labels_.find(id);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::vector<UserId> TrollRegistry::sorted_ids() const {
  std::vector<UserId> out(ids_.begin(), ids_.end());
  std::sort(out.begin(), out.end());
  return out;
}

TrollRegistry load_troll_registry(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open troll registry: " + path);
  TrollRegistry reg;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string id_part = line;
    std::string label;
    std::size_t tab = line.find('\t');
    if (tab != std::string::npos) {
      id_part = line.substr(0, tab);
      label = line.substr(tab + 1);
    }
    UserId id = 0;
    auto [p, ec] =
        std::from_chars(id_part.data(), id_part.data() + id_part.size(), id);
    if (ec != std::errc() || p != id_part.data() + id_part.size()) {
      std::ostringstream os;
      os << path << ":" << line_no << ": unparseable troll id '" << id_part
         << "'";
      throw DataError(os.str());
    }
    reg.insert(id, label);
  }
  return reg;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_run = false;
  for (char c : text) {
    bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
              c == '\v';
    if (ws) {
      in_run = true;
      continue;
    }
    if (in_run && !out.empty()) out.push_back(' ');
    in_run = false;
    out.push_back(c);
  }
  return out;
}

std::string normalize_url(const std::string& url) {
  std::string out = url;
  std::size_t scheme_end = out.find("://");
  if (scheme_end != std::string::npos) {
    for (std::size_t i = 0; i < scheme_end; ++i)
      out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
    std::size_t host_end = out.find('/', scheme_end + 3);
    if (host_end == std::string::npos) host_end = out.size();
    for (std::size_t i = scheme_end + 3; i < host_end; ++i)
      out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
  }
  // Strip one trailing slash from the path; queries and fragments stay as-is.
  if (out.size() > 1 && out.back() == '/' &&
      out.find('?') == std::string::npos && out.find('#') == std::string::npos)
    out.pop_back();
  return out;
}

namespace {

// Id fields arrive either as JSON integers or as decimal strings.
std::optional<UserId> read_id(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v < 0) return std::nullopt;
    return static_cast<std::uint64_t>(v);
  }
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    UserId v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      return std::nullopt;
    return v;
  }
  return std::nullopt;
}

std::optional<TweetRecord> parse_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;

  TweetRecord rec;
  auto tid = j.contains("tweet_id") ? read_id(j["tweet_id"]) : std::nullopt;
  auto uid = j.contains("user_id") ? read_id(j["user_id"]) : std::nullopt;
  if (!tid || !uid) return std::nullopt;
  rec.tweet_id = *tid;
  rec.user_id = *uid;

  if (!j.contains("screen_name") || !j["screen_name"].is_string())
    return std::nullopt;
  rec.screen_name = j["screen_name"].get<std::string>();

  if (!j.contains("created_at") || !j["created_at"].is_string())
    return std::nullopt;
  auto ts = parse_timestamp_utc(j["created_at"].get_ref<const std::string&>());
  if (!ts || *ts < kMinValidTimestamp) return std::nullopt;
  rec.created_at = *ts;

  if (!j.contains("text") || !j["text"].is_string()) return std::nullopt;
  rec.text = j["text"].get<std::string>();

  if (!j.contains("mentions") || !j["mentions"].is_array()) return std::nullopt;
  for (const auto& m : j["mentions"]) {
    if (!m.is_object() || !m.contains("user_id") || !m.contains("screen_name") ||
        !m["screen_name"].is_string())
      return std::nullopt;
    auto mid = read_id(m["user_id"]);
    if (!mid) return std::nullopt;
    std::string name = m["screen_name"].get<std::string>();
    if (name.empty()) return std::nullopt;
    rec.mentions.push_back(Mention{*mid, std::move(name)});
  }

  if (!j.contains("urls") || !j["urls"].is_array()) return std::nullopt;
  for (const auto& u : j["urls"]) {
    if (!u.is_string()) return std::nullopt;
    rec.urls.push_back(normalize_url(u.get<std::string>()));
  }

  if (j.contains("in_reply_to_user_id") && !j["in_reply_to_user_id"].is_null()) {
    auto rid = read_id(j["in_reply_to_user_id"]);
    if (!rid) return std::nullopt;
    rec.in_reply_to_user_id = *rid;
  }
  return rec;
}

}  // namespace

std::vector<TweetRecord> parse_corpus(std::istream& in, ParseStats* stats) {
  std::vector<TweetRecord> records;
  ParseStats local;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++local.total_lines;
    auto rec = parse_line(line);
    if (rec)
      records.push_back(std::move(*rec));
    else
      ++local.skipped;
  }
  if (in.bad()) throw DataError("I/O error while reading corpus");
  if (local.total_lines > 0 && local.skipped * 2 > local.total_lines) {
    std::ostringstream os;
    os << "corpus format error: " << local.skipped << " of "
       << local.total_lines << " lines malformed";
    throw DataError(os.str());
  }
  if (stats) *stats = local;
  return records;
}

std::vector<TweetRecord> parse_corpus_file(const std::string& path,
                                           ParseStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus: " + path);
  return parse_corpus(in, stats);
}

namespace {

bool is_screen_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool iequals_ascii(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = static_cast<char>(std::tolower(static_cast<unsigned char>(a[i])));
    char y = static_cast<char>(std::tolower(static_cast<unsigned char>(b[i])));
    if (x != y) return false;
  }
  return true;
}

}  // namespace

std::optional<RetweetInfo> detect_retweet(const TweetRecord& t) {
  constexpr std::string_view kPrefix = "RT @";
  if (t.text.size() < kPrefix.size() + 2) return std::nullopt;
  if (std::string_view(t.text).substr(0, kPrefix.size()) != kPrefix)
    return std::nullopt;

  std::size_t name_start = kPrefix.size();
  std::size_t pos = name_start;
  while (pos < t.text.size() && is_screen_name_char(t.text[pos])) ++pos;
  if (pos == name_start) return std::nullopt;            // empty name
  if (pos >= t.text.size() || t.text[pos] != ':') return std::nullopt;
  std::string_view name(t.text.data() + name_start, pos - name_start);

  // The root user is resolved through this tweet's own mentions only.
  const Mention* root = nullptr;
  for (const auto& m : t.mentions) {
    if (iequals_ascii(m.screen_name, name)) {
      root = &m;
      break;
    }
  }
  if (!root) return std::nullopt;
  if (t.urls.empty()) return std::nullopt;

  RetweetInfo info;
  info.retweeter_id = t.user_id;
  info.root_user_id = root->user_id;
  info.root_screen_name = root->screen_name;
  info.created_at = t.created_at;
  info.normalized_text = collapse_whitespace(
      std::string_view(t.text).substr(pos + 1));
  info.urls = t.urls;
  return info;
}

std::vector<Cascade> group_cascades(const std::vector<TweetRecord>& records,
                                    std::uint64_t min_retweeters) {
  struct GroupAcc {
    std::vector<CascadeEvent> events;
    std::vector<std::string> urls;
  };
  // Key: root_user_id + normalized_text.
  std::map<std::pair<UserId, std::string>, GroupAcc> groups;

  // Original root posts, keyed the same way; earliest post wins so that
  // repeated identical posts by the same author merge into one cascade.
  std::map<std::pair<UserId, std::string>, const TweetRecord*> root_posts;

  for (const auto& rec : records) {
    auto rt = detect_retweet(rec);
    if (rt) {
      auto& acc = groups[{rt->root_user_id, rt->normalized_text}];
      acc.events.push_back(CascadeEvent{rec.user_id, rec.created_at});
      for (const auto& u : rt->urls) acc.urls.push_back(u);
    } else {
      std::string collapsed = collapse_whitespace(rec.text);
      auto key = std::make_pair(rec.user_id, std::move(collapsed));
      auto it = root_posts.find(key);
      if (it == root_posts.end()) {
        root_posts.emplace(std::move(key), &rec);
      } else if (rec.created_at < it->second->created_at ||
                 (rec.created_at == it->second->created_at &&
                  rec.tweet_id < it->second->tweet_id)) {
        it->second = &rec;
      }
    }
  }

  std::vector<Cascade> cascades;
  for (auto& [key, acc] : groups) {
    const UserId root = key.first;
    const std::string& text = key.second;

    std::sort(acc.events.begin(), acc.events.end(),
              [](const CascadeEvent& a, const CascadeEvent& b) {
                if (a.created_at != b.created_at)
                  return a.created_at < b.created_at;
                return a.retweeter_id < b.retweeter_id;
              });

    std::vector<UserId> distinct;
    distinct.reserve(acc.events.size());
    for (const auto& ev : acc.events)
      if (ev.retweeter_id != root) distinct.push_back(ev.retweeter_id);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    if (distinct.size() < min_retweeters) continue;

    Cascade c;
    c.key_hash = cascade_key_hash(text, root);
    c.normalized_text = text;
    c.root_user_id = root;
    c.events = std::move(acc.events);
    std::sort(acc.urls.begin(), acc.urls.end());
    acc.urls.erase(std::unique(acc.urls.begin(), acc.urls.end()),
                   acc.urls.end());
    c.urls = std::move(acc.urls);
    c.n_distinct = distinct.size();
    auto rp = root_posts.find({root, text});
    if (rp != root_posts.end()) {
      c.root_tweet = *rp->second;
      c.root_post_ts = rp->second->created_at;
    }
    cascades.push_back(std::move(c));
  }

  std::sort(cascades.begin(), cascades.end(),
            [](const Cascade& a, const Cascade& b) {
              if (a.events.size() != b.events.size())
                return a.events.size() > b.events.size();
              if (a.root_user_id != b.root_user_id)
                return a.root_user_id < b.root_user_id;
              return a.normalized_text < b.normalized_text;
            });
  return cascades;
}

}  // namespace casflow
