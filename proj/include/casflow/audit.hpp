#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "casflow/common.hpp"
#include "casflow/shapley.hpp"

namespace casflow {

enum class AccountState : std::uint8_t { Active, Suspended, Deleted, Unknown };

const char* account_state_name(AccountState s);

struct AccountStatus {
  UserId user = 0;
  AccountState state = AccountState::Unknown;
  std::int64_t checked_at = 0;
};

struct BotScore {
  UserId user = 0;
  double cap_english = 0.0;
  double cap_universal = 0.0;
};

struct RetryPolicy {
  int max_attempts = 3;
  int initial_delay_ms = 200;
  double multiplier = 2.0;
};

struct AuditConfig {
  std::string status_endpoint;  // e.g. http://127.0.0.1:8080/status
  std::string bot_endpoint;     // e.g. http://127.0.0.1:8080/botscores
  std::string cache_path;       // status journal; empty disables caching
  RetryPolicy retry;
  std::size_t batch_size = 100;
  double bot_threshold = 0.5;
  // Bearer token read from this environment variable; never logged.
  std::string token_env = "CASFLOW_API_TOKEN";
  // Injectable clock (unix seconds) so tests control the cache day key.
  std::function<std::int64_t()> clock;
};

// Thin JSON-over-HTTP client for the status and bot-score endpoints, with
// exponential backoff and an append-only status cache journal keyed by
// (user_id, date). Newest journal entry per user wins.
class AuditClient {
 public:
  explicit AuditClient(AuditConfig cfg);

  // One status per requested id, in request order. Transport failures after
  // exhausted retries yield state "unknown" and are not cached.
  std::vector<AccountStatus> fetch_statuses(std::span<const UserId> ids);

  // Scores for the ids the remote service knows; missing accounts (e.g.
  // suspended ones) simply have no entry.
  std::vector<BotScore> fetch_bot_scores(std::span<const UserId> ids);

  std::uint64_t network_requests() const { return network_requests_; }

 private:
  std::optional<std::string> post_json(const std::string& endpoint,
                                       const std::string& body);

  AuditConfig cfg_;
  std::uint64_t network_requests_ = 0;
};

struct AuditRow {
  std::uint32_t rank = 0;
  UserId user = 0;
  Group group = Group::Regular;
  AccountState state = AccountState::Unknown;
  std::optional<BotScore> score;
  bool bot = false;
};

struct AuditReport {
  std::size_t k = 0;
  std::uint64_t active = 0;
  std::uint64_t suspended = 0;
  std::uint64_t deleted = 0;
  std::uint64_t unknown = 0;
  std::uint64_t bots = 0;
  double fraction_suspended = 0.0;
  double fraction_deleted = 0.0;
  double fraction_bots = 0.0;
  std::vector<AuditRow> rows;  // rank order
};

AuditReport audit_report(std::span<const RankedEntry> ranking, std::size_t k,
                         std::span<const AccountStatus> statuses,
                         std::span<const BotScore> scores,
                         double threshold = 0.5);

}  // namespace casflow
