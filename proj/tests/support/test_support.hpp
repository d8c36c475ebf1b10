#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately use the slowest obvious formulation so they cannot share a
// bug with the production path.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eci/cachesim.hpp"
#include "eci/classifier.hpp"
#include "eci/partitioner.hpp"
#include "eci/rdist.hpp"
#include "eci/trace.hpp"

namespace eci::test {

/// The seven-request sample workload: W s1, R s2, R s1, W s3, R s4, W s5,
/// W s2 on five sectors. Expected classes CW CR RAW CW CR CW WAR, max TRD 4,
/// max URD 1.
inline std::vector<IoRequest> sample7_trace(std::uint64_t ts0 = 0, std::uint16_t vm = 0) {
  auto req = [&](std::uint64_t i, std::uint64_t block, Op op) {
    return IoRequest{vm, ts0 + i, block, op, 1};
  };
  return {req(0, 1, Op::Write), req(1, 2, Op::Read),  req(2, 1, Op::Read), req(3, 3, Op::Write),
          req(4, 4, Op::Read),  req(5, 5, Op::Write), req(6, 2, Op::Write)};
}

/// sample7 repeated once per interval window.
inline std::vector<IoRequest> repeated_sample7(std::uint32_t intervals,
                                               std::uint64_t interval_ts) {
  std::vector<IoRequest> out;
  for (std::uint32_t k = 0; k < intervals; ++k) {
    auto part = sample7_trace(k * interval_ts);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline std::vector<ClassifiedRequest> classify_fresh(const std::vector<IoRequest>& reqs) {
  Classifier cls;
  return cls.classify(reqs);
}

struct StreamSpec {
  std::size_t length = 500;
  std::uint64_t blocks = 32;
  double write_fraction = 0.4;
};

inline std::vector<IoRequest> random_stream(const StreamSpec& spec, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> block(0, spec.blocks - 1);
  std::bernoulli_distribution is_write(spec.write_fraction);
  std::vector<IoRequest> reqs(spec.length);
  for (std::size_t i = 0; i < spec.length; ++i)
    reqs[i] = {0, i, block(rng), is_write(rng) ? Op::Write : Op::Read, 1};
  return reqs;
}

/// Reference stack-distance scan: for every reuse, walk backward to the
/// previous access of the same block counting distinct blocks in between.
inline ReuseProfile oracle_stack_distance(const std::vector<ClassifiedRequest>& stream) {
  ReuseProfile profile;
  profile.total_accesses = stream.size();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    std::set<std::uint64_t> between;
    bool found = false;
    for (std::size_t j = i; j-- > 0;) {
      if (stream[j].req.block == stream[i].req.block) {
        found = true;
        break;
      }
      between.insert(stream[j].req.block);
    }
    if (!found) continue;
    std::uint64_t dist = between.size();
    profile.trd_hist[dist] += 1;
    profile.max_trd = std::max<std::int64_t>(profile.max_trd, static_cast<std::int64_t>(dist));
    if (stream[i].cls == AccessClass::RAR || stream[i].cls == AccessClass::RAW) {
      profile.urd_hist[dist] += 1;
      profile.max_urd = std::max<std::int64_t>(profile.max_urd, static_cast<std::int64_t>(dist));
    }
  }
  return profile;
}

/// Exhaustive-search optimum of the sum of per-VM latencies over every
/// combination of candidate sizes (c_min plus each in-range breakpoint).
inline double oracle_best_latency(const PartitionProblem& p) {
  std::vector<std::vector<std::uint64_t>> cands(p.vms.size());
  for (std::size_t i = 0; i < p.vms.size(); ++i) {
    cands[i].push_back(p.vms[i].c_min);
    for (auto b : p.vms[i].hit_fn.breakpoints)
      if (b > p.vms[i].c_min && b <= p.vms[i].c_urd) cands[i].push_back(b);
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(p.vms.size(), 0);
  for (;;) {
    std::uint64_t used = 0;
    double latency = 0.0;
    bool fits = true;
    for (std::size_t i = 0; i < p.vms.size(); ++i) {
      std::uint64_t c = cands[i][idx[i]];
      used += c;
      if (used > p.capacity_blocks) {
        fits = false;
        break;
      }
      latency += vm_latency(p.vms[i].hit_fn, c, p.t_hdd_us, p.t_ssd_us);
    }
    if (fits) best = std::min(best, latency);
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == cands[d].size()) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return best;
}

/// Unique scratch directory under the build tree; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("eci_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace eci::test
