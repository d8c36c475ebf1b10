#include "eci/cachesim.hpp"

#include <stdexcept>

namespace eci {

const char* to_string(WritePolicy policy) {
  switch (policy) {
    case WritePolicy::WB: return "WB";
    case WritePolicy::WT: return "WT";
    case WritePolicy::RO: return "RO";
  }
  return "?";
}

SimReport SimReport::since(const SimReport& s) const {
  SimReport d;
  d.read_hits = read_hits - s.read_hits;
  d.read_misses = read_misses - s.read_misses;
  d.write_hits = write_hits - s.write_hits;
  d.ssd_writes = ssd_writes - s.ssd_writes;
  d.hdd_reads = hdd_reads - s.hdd_reads;
  d.hdd_writes = hdd_writes - s.hdd_writes;
  d.latency_us = latency_us - s.latency_us;
  d.class_counts.cr = class_counts.cr - s.class_counts.cr;
  d.class_counts.cw = class_counts.cw - s.class_counts.cw;
  d.class_counts.rar = class_counts.rar - s.class_counts.rar;
  d.class_counts.raw = class_counts.raw - s.class_counts.raw;
  d.class_counts.war = class_counts.war - s.class_counts.war;
  d.class_counts.waw = class_counts.waw - s.class_counts.waw;
  return d;
}

LruCacheSim::LruCacheSim(const CacheConfig& cfg) : cfg_(cfg) {
  if (!(cfg.t_ssd_us < cfg.t_hdd_us))
    throw std::invalid_argument("t_ssd must be below t_hdd");
}

void LruCacheSim::insert_mru(std::uint64_t block, bool dirty) {
  if (map_.size() == cfg_.size_blocks) evict_lru();
  lru_.push_front(block);
  map_[block] = {lru_.begin(), dirty};
  ++report_.ssd_writes;
}

void LruCacheSim::evict_lru() {
  std::uint64_t victim = lru_.back();
  auto it = map_.find(victim);
  if (it->second.dirty) ++report_.hdd_writes;
  map_.erase(it);
  lru_.pop_back();
}

void LruCacheSim::access(const ClassifiedRequest& cr) {
  if (cr.req.len_blocks != 1)
    throw std::invalid_argument("cache simulator takes single-block requests; expand first");
  report_.class_counts.add(cr.cls);

  const std::uint64_t block = cr.req.block;
  auto it = map_.find(block);
  const bool resident = it != map_.end();

  if (cr.req.op == Op::Read) {
    if (resident) {
      ++report_.read_hits;
      report_.latency_us += cfg_.t_ssd_us;
      lru_.splice(lru_.begin(), lru_, it->second.pos);
    } else {
      ++report_.read_misses;
      ++report_.hdd_reads;
      report_.latency_us += cfg_.t_hdd_us;
      if (cfg_.size_blocks > 0) insert_mru(block, false);
    }
    return;
  }

  // Write path.
  if (resident) ++report_.write_hits;
  if (cfg_.size_blocks == 0) {
    ++report_.hdd_writes;
    report_.latency_us += cfg_.t_hdd_us;
    return;
  }
  switch (cfg_.policy) {
    case WritePolicy::WB:
      if (resident) {
        it->second.dirty = true;
        lru_.splice(lru_.begin(), lru_, it->second.pos);
        ++report_.ssd_writes;
      } else {
        insert_mru(block, true);
      }
      report_.latency_us += cfg_.t_ssd_us;
      break;
    case WritePolicy::WT:
      if (resident) {
        it->second.dirty = false;
        lru_.splice(lru_.begin(), lru_, it->second.pos);
        ++report_.ssd_writes;
      } else {
        insert_mru(block, false);
      }
      ++report_.hdd_writes;
      report_.latency_us += cfg_.t_hdd_us;
      break;
    case WritePolicy::RO:
      // Invalidate rather than update: the cached copy is stale and RO never
      // writes the SSD on the write path.
      if (resident) {
        lru_.erase(it->second.pos);
        map_.erase(it);
      }
      ++report_.hdd_writes;
      report_.latency_us += cfg_.t_hdd_us;
      break;
  }
}

void LruCacheSim::resize(std::uint64_t new_size_blocks) {
  while (map_.size() > new_size_blocks) evict_lru();
  cfg_.size_blocks = new_size_blocks;
}

void LruCacheSim::set_policy(WritePolicy policy) {
  if (cfg_.policy == WritePolicy::WB && policy != WritePolicy::WB) {
    for (auto& [block, entry] : map_) {
      if (entry.dirty) {
        entry.dirty = false;
        ++report_.hdd_writes;
      }
    }
  }
  cfg_.policy = policy;
}

SimReport simulate(std::span<const ClassifiedRequest> stream, const CacheConfig& cfg) {
  LruCacheSim sim(cfg);
  for (const auto& cr : stream) sim.access(cr);
  return sim.report();
}

std::uint64_t total_writes_model(const ClassCounts& counts) {
  return counts.cr + counts.cw + counts.war + counts.waw;
}

}  // namespace eci
