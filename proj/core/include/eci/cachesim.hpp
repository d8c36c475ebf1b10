#pragma once

#include <cstdint>
#include <list>
#include <span>
#include <unordered_map>

#include "eci/classifier.hpp"

namespace eci {

enum class WritePolicy : std::uint8_t { WB, WT, RO };

const char* to_string(WritePolicy policy);

struct CacheConfig {
  std::uint64_t size_blocks = 0;
  WritePolicy policy = WritePolicy::WB;
  double t_hdd_us = 5000.0;  // device defaults; must satisfy t_ssd < t_hdd
  double t_ssd_us = 100.0;
};

struct SimReport {
  std::uint64_t read_hits = 0;
  std::uint64_t read_misses = 0;
  std::uint64_t write_hits = 0;  // writes that found their block resident
  std::uint64_t ssd_writes = 0;
  std::uint64_t hdd_reads = 0;
  std::uint64_t hdd_writes = 0;
  double latency_us = 0.0;
  ClassCounts class_counts;

  std::uint64_t requests() const { return class_counts.total(); }
  /// Per-interval delta against an earlier snapshot of the same simulator.
  SimReport since(const SimReport& snapshot) const;
};

/// Exact per-VM LRU cache with WB/WT/RO write policies.
///
/// Reads: hit serves from cache at t_ssd; miss reads HDD at t_hdd and fills
/// the cache (one SSD write), evicting the LRU block when full — a dirty
/// evictee is written back to HDD first. Writes: WB caches the block dirty
/// (one SSD write, t_ssd); WT writes both SSD and HDD (t_hdd); RO sends the
/// write to HDD and invalidates any resident copy. A zero-size cache
/// degenerates to pure HDD.
class LruCacheSim {
 public:
  explicit LruCacheSim(const CacheConfig& cfg);

  void access(const ClassifiedRequest& cr);

  /// Shrinking drops LRU-end blocks immediately (dirty ones are written
  /// back); growing leaves contents untouched and the new region cold.
  void resize(std::uint64_t new_size_blocks);

  /// Leaving WB flushes dirty blocks to HDD before the policy flips.
  void set_policy(WritePolicy policy);

  const SimReport& report() const { return report_; }
  const CacheConfig& config() const { return cfg_; }
  std::uint64_t resident() const { return map_.size(); }
  bool contains(std::uint64_t block) const { return map_.count(block) != 0; }

 private:
  void insert_mru(std::uint64_t block, bool dirty);
  void evict_lru();

  CacheConfig cfg_;
  SimReport report_;
  std::list<std::uint64_t> lru_;  // front = MRU
  struct Entry {
    std::list<std::uint64_t>::iterator pos;
    bool dirty;
  };
  std::unordered_map<std::uint64_t, Entry> map_;
};

/// Replays a whole classified stream through a fresh simulator.
SimReport simulate(std::span<const ClassifiedRequest> stream, const CacheConfig& cfg);

/// Analytic WB write count of a workload: CR + CW + WAR + WAW. Matches the
/// simulator exactly when the cache never evicts.
std::uint64_t total_writes_model(const ClassCounts& counts);

}  // namespace eci
