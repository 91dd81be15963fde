#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace casflow {

using UserId = std::uint64_t;
using TweetId = std::uint64_t;
using NodeIndex = std::uint32_t;

constexpr NodeIndex kNoNode = 0xFFFFFFFFu;

enum class Group : std::uint8_t { Regular = 0, Troll = 1 };

inline const char* group_name(Group g) {
  return g == Group::Troll ? "troll" : "regular";
}

// Exit-code mapping used by the CLI: ConfigError -> 2, DataError -> 3,
// StageError (and anything unexpected) -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& cause)
      : std::runtime_error("stage '" + stage + "' failed: " + cause),
        stage_name(stage) {}
  std::string stage_name;
};

// FNV-1a 64. Used for cascade keys and manifest content hashes.
constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h = kFnvOffset) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xFFu;
    h *= kFnvPrime;
  }
  return h;
}

std::string to_hex(std::uint64_t v);

// Compensated summation; global Shapley totals span tens of thousands of
// per-cascade terms and must stay stable under re-ordering-free accumulation.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace casflow
