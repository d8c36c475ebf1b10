#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "eci/trace.hpp"

namespace eci {

/// Access-pair taxonomy. The first letter is the current op, the last the
/// previous op to the same block; CR/CW mark the first-ever touch of a block.
enum class AccessClass : std::uint8_t { CR, CW, RAR, RAW, WAR, WAW };

const char* to_string(AccessClass cls);

struct ClassCounts {
  std::uint64_t cr = 0;
  std::uint64_t cw = 0;
  std::uint64_t rar = 0;
  std::uint64_t raw = 0;
  std::uint64_t war = 0;
  std::uint64_t waw = 0;

  std::uint64_t total() const { return cr + cw + rar + raw + war + waw; }
  std::uint64_t count(AccessClass cls) const;
  void add(AccessClass cls);

  ClassCounts& operator+=(const ClassCounts& o);
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct ClassifiedRequest {
  IoRequest req;
  AccessClass cls;
};

/// Streaming per-VM classifier. History spans the whole stream: a block first
/// seen long ago stays warm, so a rewrite in a later interval is WAW, not CW.
/// Each access's class depends only on the immediately preceding access to
/// the same block.
class Classifier {
 public:
  /// Classifies one single-block request and updates history.
  AccessClass classify(const IoRequest& req);

  /// Classifies a stream segment, optionally accumulating class counts.
  std::vector<ClassifiedRequest> classify(std::span<const IoRequest> reqs,
                                          ClassCounts* counts = nullptr);

  std::size_t blocks_seen() const { return last_op_.size(); }

 private:
  std::unordered_map<std::uint64_t, Op> last_op_;
};

/// (WAW + WAR) / total. Throws std::invalid_argument when total is zero.
double write_ratio(const ClassCounts& counts);

}  // namespace eci
