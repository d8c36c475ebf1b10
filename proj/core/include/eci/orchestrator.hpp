#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eci/cachesim.hpp"
#include "eci/partitioner.hpp"
#include "eci/policy.hpp"
#include "eci/rdist.hpp"
#include "eci/trace.hpp"

namespace eci {

enum class RunMode : std::uint8_t { ECI, TRD_BASELINE };

const char* to_string(RunMode mode);

struct RunConfig {
  std::uint64_t interval_ts = 6'000'000'000;  // 10 min of MSR 100ns ticks
  RunMode mode = RunMode::ECI;
  std::uint64_t capacity_blocks = 3'000'000;
  std::uint32_t block_size_bytes = 8192;
  double wthreshold = 0.5;
  std::uint64_t c_min = 1000;
  double t_hdd_us = 5000.0;
  double t_ssd_us = 100.0;
  std::uint64_t seed = 0;
  std::vector<std::uint16_t> force_ro_vms;  // ECI mode only
};

struct ProfileSummary {
  std::int64_t max_trd = -1;
  std::int64_t max_urd = -1;
  std::uint64_t total_accesses = 0;
  std::uint64_t trd_samples = 0;
  std::uint64_t urd_samples = 0;
};

/// One VM's slice of an interval: what was measured during the interval,
/// what ran during it (alloc/policy/sim), and what was decided from it
/// (demand feeds the next interval's plan).
struct VmIntervalStats {
  bool active = false;  // had requests this interval
  ProfileSummary profile;
  ClassCounts counts;
  std::uint64_t demand_blocks = 0;
  std::uint64_t alloc_blocks = 0;  // in effect during this interval
  WritePolicy policy = WritePolicy::WB;
  double write_ratio = 0.0;  // 0 when inactive
  SimReport sim;
};

struct IntervalReport {
  std::uint64_t interval = 0;
  bool feasible = true;  // of the plan decided from this interval
  std::vector<VmIntervalStats> vms;
  double aggregate_latency_us = 0.0;
  std::uint64_t aggregate_ssd_writes = 0;
};

/// The interval loop: slice each VM's stream into interval_ts windows, then
/// per interval classify (history continues across intervals), profile the
/// window, replay it through the per-VM simulators, and derive the next
/// interval's sizes and policies — decisions act prospectively. ECI mode
/// sizes by URD and assigns policies by write ratio; TRD_BASELINE sizes by
/// TRD and stays WB. VMs idle in an interval are excluded from partitioning
/// and their space reclaimed; an interval with no traffic at all keeps the
/// previous plan.
std::vector<IntervalReport> run(const std::vector<std::vector<IoRequest>>& per_vm_traces,
                                const RunConfig& cfg);

struct PerfPerCost {
  std::vector<std::optional<double>> per_vm;  // empty optional: excluded
  double aggregate = 0.0;                     // mean over included VMs
};

/// (1 / mean latency) / allocated blocks per VM for one interval; VMs with
/// zero allocation or no requests are excluded from the aggregate mean.
PerfPerCost perf_per_cost(const IntervalReport& report);

/// Writes run.meta plus the per-interval CSV reports (class_counts.csv,
/// plan.csv, policy.csv, sim.csv) under `dir`, creating it if needed.
void write_run_outputs(const std::filesystem::path& dir, const RunConfig& cfg,
                       const std::vector<IntervalReport>& reports);

}  // namespace eci
