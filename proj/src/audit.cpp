#include "casflow/audit.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "casflow/timeutil.hpp"
#include "casflow/tsv.hpp"

namespace casflow {

using nlohmann::json;

const char* account_state_name(AccountState s) {
  switch (s) {
    case AccountState::Active:
      return "active";
    case AccountState::Suspended:
      return "suspended";
    case AccountState::Deleted:
      return "deleted";
    case AccountState::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

std::optional<AccountState> state_from_name(const std::string& s) {
  if (s == "active") return AccountState::Active;
  if (s == "suspended") return AccountState::Suspended;
  if (s == "deleted") return AccountState::Deleted;
  if (s == "unknown") return AccountState::Unknown;
  return std::nullopt;
}

// Error-code contract of the status endpoint: 0 active, 63 suspended by the
// platform, 50 deleted by the user.
AccountState state_from_code(int code) {
  switch (code) {
    case 0:
      return AccountState::Active;
    case 63:
      return AccountState::Suspended;
    case 50:
      return AccountState::Deleted;
    default:
      throw DataError("status endpoint returned unexpected error_code " +
                      std::to_string(code));
  }
}

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint URL must include a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

struct JournalEntry {
  AccountState state;
  std::int64_t checked_at;
};

// Journal line: user_id \t date \t state \t checked_at
std::unordered_map<UserId, JournalEntry> load_journal(const std::string& path,
                                                      const std::string& day) {
  std::unordered_map<UserId, JournalEntry> latest;
  std::ifstream in(path, std::ios::binary);
  if (!in) return latest;  // absent journal is an empty cache
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t tab = line.find('\t'); true; tab = line.find('\t', start)) {
      if (tab == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (cells.size() != 4) throw DataError(path + ": malformed journal line");
    if (cells[1] != day) continue;
    auto state = state_from_name(cells[2]);
    if (!state) throw DataError(path + ": bad state '" + cells[2] + "'");
    UserId user = parse_u64_cell(cells[0], path, line_no);
    std::int64_t at = parse_i64_cell(cells[3], path, line_no);
    auto it = latest.find(user);
    if (it == latest.end() || at >= it->second.checked_at)
      latest[user] = JournalEntry{*state, at};
  }
  return latest;
}

void append_journal(const std::string& path, UserId user,
                    const std::string& day, AccountState state,
                    std::int64_t checked_at) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw DataError("cannot append to cache journal: " + path);
  out << user << '\t' << day << '\t' << account_state_name(state) << '\t'
      << checked_at << '\n';
}

}  // namespace

AuditClient::AuditClient(AuditConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.clock) {
    cfg_.clock = [] {
      return static_cast<std::int64_t>(
          std::chrono::duration_cast<std::chrono::seconds>(
              std::chrono::system_clock::now().time_since_epoch())
              .count());
    };
  }
}

std::optional<std::string> AuditClient::post_json(const std::string& endpoint,
                                                  const std::string& body) {
  SplitUrl url = split_endpoint(endpoint);
  httplib::Client client(url.base);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(30, 0);
  httplib::Headers headers;
  if (const char* token = std::getenv(cfg_.token_env.c_str()))
    headers.emplace("Authorization", std::string("Bearer ") + token);

  double delay_ms = cfg_.retry.initial_delay_ms;
  for (int attempt = 1; attempt <= cfg_.retry.max_attempts; ++attempt) {
    ++network_requests_;
    auto res = client.Post(url.path, headers, body, "application/json");
    if (res && res->status == 200) return res->body;
    if (attempt < cfg_.retry.max_attempts) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long>(delay_ms)));
      delay_ms *= cfg_.retry.multiplier;
    }
  }
  return std::nullopt;
}

std::vector<AccountStatus> AuditClient::fetch_statuses(
    std::span<const UserId> ids) {
  const std::int64_t now = cfg_.clock();
  const std::string day = format_date_utc(now);

  std::unordered_map<UserId, JournalEntry> cached;
  if (!cfg_.cache_path.empty()) cached = load_journal(cfg_.cache_path, day);

  std::unordered_map<UserId, AccountStatus> results;
  std::vector<UserId> to_fetch;
  for (UserId id : ids) {
    if (results.count(id)) continue;
    auto it = cached.find(id);
    if (it != cached.end()) {
      results[id] = AccountStatus{id, it->second.state, it->second.checked_at};
    } else {
      results[id] = AccountStatus{id, AccountState::Unknown, now};
      to_fetch.push_back(id);
    }
  }

  for (std::size_t off = 0; off < to_fetch.size(); off += cfg_.batch_size) {
    std::size_t end = std::min(off + cfg_.batch_size, to_fetch.size());
    json req;
    req["user_ids"] = json::array();
    for (std::size_t i = off; i < end; ++i)
      req["user_ids"].push_back(to_fetch[i]);

    auto body = post_json(cfg_.status_endpoint, req.dump());
    if (!body) continue;  // exhausted retries: the batch stays unknown

    json resp = json::parse(*body, nullptr, false);
    if (resp.is_discarded() || !resp.is_array())
      throw DataError("status endpoint returned malformed JSON");
    for (const auto& item : resp) {
      if (!item.is_object() || !item.contains("user_id") ||
          !item.contains("error_code"))
        throw DataError("status endpoint returned malformed entry");
      UserId user = item["user_id"].get<std::uint64_t>();
      AccountState state = state_from_code(item["error_code"].get<int>());
      results[user] = AccountStatus{user, state, now};
      if (!cfg_.cache_path.empty())
        append_journal(cfg_.cache_path, user, day, state, now);
    }
  }

  std::vector<AccountStatus> out;
  out.reserve(ids.size());
  std::unordered_map<UserId, bool> emitted;
  for (UserId id : ids) {
    if (emitted[id]) continue;
    emitted[id] = true;
    out.push_back(results[id]);
  }
  return out;
}

std::vector<BotScore> AuditClient::fetch_bot_scores(
    std::span<const UserId> ids) {
  std::vector<BotScore> out;
  std::vector<UserId> unique;
  std::unordered_map<UserId, bool> seen;
  for (UserId id : ids) {
    if (seen[id]) continue;
    seen[id] = true;
    unique.push_back(id);
  }

  for (std::size_t off = 0; off < unique.size(); off += cfg_.batch_size) {
    std::size_t end = std::min(off + cfg_.batch_size, unique.size());
    json req;
    req["user_ids"] = json::array();
    for (std::size_t i = off; i < end; ++i) req["user_ids"].push_back(unique[i]);

    auto body = post_json(cfg_.bot_endpoint, req.dump());
    if (!body) continue;

    json resp = json::parse(*body, nullptr, false);
    if (resp.is_discarded() || !resp.is_array())
      throw DataError("bot endpoint returned malformed JSON");
    for (const auto& item : resp) {
      if (!item.is_object() || !item.contains("user_id") ||
          !item.contains("cap_english") || !item.contains("cap_universal"))
        throw DataError("bot endpoint returned malformed entry");
      BotScore score;
      score.user = item["user_id"].get<std::uint64_t>();
      score.cap_english = item["cap_english"].get<double>();
      score.cap_universal = item["cap_universal"].get<double>();
      if (score.cap_english < 0.0 || score.cap_english > 1.0 ||
          score.cap_universal < 0.0 || score.cap_universal > 1.0)
        throw DataError("bot endpoint returned CAP score outside [0,1]");
      out.push_back(score);
    }
  }
  return out;
}

AuditReport audit_report(std::span<const RankedEntry> ranking, std::size_t k,
                         std::span<const AccountStatus> statuses,
                         std::span<const BotScore> scores, double threshold) {
  if (k > ranking.size())
    throw ConfigError("audit top-k exceeds ranking length");

  std::unordered_map<UserId, AccountState> state_of;
  for (const auto& s : statuses) state_of[s.user] = s.state;
  std::unordered_map<UserId, BotScore> score_of;
  for (const auto& s : scores) score_of[s.user] = s;

  AuditReport rep;
  rep.k = k;
  for (std::size_t i = 0; i < k; ++i) {
    const RankedEntry& e = ranking[i];
    AuditRow row;
    row.rank = e.rank;
    row.user = e.user;
    row.group = e.group;
    auto st = state_of.find(e.user);
    row.state = st == state_of.end() ? AccountState::Unknown : st->second;
    auto sc = score_of.find(e.user);
    if (sc != score_of.end()) {
      row.score = sc->second;
      row.bot = std::max(sc->second.cap_english, sc->second.cap_universal) >
                threshold;
    }
    switch (row.state) {
      case AccountState::Active:
        ++rep.active;
        break;
      case AccountState::Suspended:
        ++rep.suspended;
        break;
      case AccountState::Deleted:
        ++rep.deleted;
        break;
      case AccountState::Unknown:
        ++rep.unknown;
        break;
    }
    if (row.bot) ++rep.bots;
    rep.rows.push_back(std::move(row));
  }
  if (k > 0) {
    rep.fraction_suspended = static_cast<double>(rep.suspended) / k;
    rep.fraction_deleted = static_cast<double>(rep.deleted) / k;
    rep.fraction_bots = static_cast<double>(rep.bots) / k;
  }
  return rep;
}

}  // namespace casflow
