#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "eci/classifier.hpp"

namespace eci {

enum class DistanceMode : std::uint8_t { TRD, URD };

/// Reuse-distance histograms for one single-VM stream. A reuse pair's
/// distance is the number of distinct other blocks touched strictly between
/// the two accesses. The TRD histogram samples every reuse pair; the URD
/// histogram samples only read reuses (RAR and RAW) — write reuses refresh
/// recency but are not worth caching for. max_* is -1 when no pair of that
/// kind exists.
struct ReuseProfile {
  std::map<std::uint64_t, std::uint64_t> trd_hist;
  std::map<std::uint64_t, std::uint64_t> urd_hist;
  std::int64_t max_trd = -1;
  std::int64_t max_urd = -1;
  std::uint64_t total_accesses = 0;

  std::uint64_t trd_samples() const;
  std::uint64_t urd_samples() const;
  const std::map<std::uint64_t, std::uint64_t>& hist(DistanceMode mode) const {
    return mode == DistanceMode::TRD ? trd_hist : urd_hist;
  }
  std::int64_t max_distance(DistanceMode mode) const {
    return mode == DistanceMode::TRD ? max_trd : max_urd;
  }
};

/// One O(n log n) pass filling both histograms, using an order-statistic
/// count over last-access positions. Requires a classified single-VM,
/// single-block stream; throws std::invalid_argument otherwise.
ReuseProfile stack_distance(std::span<const ClassifiedRequest> stream);

/// Non-decreasing step function from cache size in blocks to read-hit ratio.
/// Below the first breakpoint it is 0; at or above the last it stays at the
/// final value.
struct HitRatioFn {
  std::vector<std::uint64_t> breakpoints;  // ascending sizes m_1..m_k
  std::vector<double> values;              // h_1 <= ... <= h_k

  double operator()(std::uint64_t c) const;
  bool empty() const { return breakpoints.empty(); }
  std::uint64_t max_breakpoint() const { return breakpoints.empty() ? 0 : breakpoints.back(); }
};

/// H(c) = (reuse accesses of the selected mode with distance <= c-1) / total
/// accesses. Breakpoints sit at distance+1: a cache of c blocks captures
/// exactly the reuses with distance below c. Empty profiles give the
/// constant-zero function.
HitRatioFn hit_ratio_fn(const ReuseProfile& profile, DistanceMode mode);

/// Cache size that captures every read reuse: max_urd + 1 blocks (0 when the
/// stream has no read reuse; the partitioner clamps to its minimum).
std::uint64_t urd_based_size(const ReuseProfile& profile);

/// Baseline sizing over all reuse pairs: max_trd + 1 blocks.
std::uint64_t trd_based_size(const ReuseProfile& profile);

}  // namespace eci
