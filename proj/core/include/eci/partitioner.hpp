#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eci/rdist.hpp"

namespace eci {

/// One VM's share of a partitioning problem. c_urd is the URD-based demand
/// already clamped up to c_min; weight is carried for symmetry with the
/// interface but does not enter the objective.
struct VmDemand {
  HitRatioFn hit_fn;
  std::uint64_t c_urd = 0;
  std::uint64_t c_min = 0;
  double weight = 1.0;
};

struct PartitionProblem {
  std::uint64_t capacity_blocks = 0;
  std::vector<VmDemand> vms;
  double t_hdd_us = 5000.0;
  double t_ssd_us = 100.0;
};

struct AllocationPlan {
  std::vector<std::uint64_t> c_eff;
  bool feasible = true;
  double objective_latency_us = 0.0;  // sum of per-VM latencies at c_eff
};

/// True iff the demand vector fits the capacity.
bool feasibility_check(std::span<const std::uint64_t> demands, std::uint64_t capacity_blocks);

/// h(c) * t_ssd + (1 - h(c)) * t_hdd.
double vm_latency(const HitRatioFn& hit_fn, std::uint64_t c, double t_hdd_us, double t_ssd_us);

/// Per-interval cache-size decision. Feasible demand vectors are returned
/// unchanged. Otherwise the constrained latency minimum is searched over the
/// step functions' breakpoints: exact enumeration with pruning when the
/// candidate space is small, and greedy ascent over each VM's concave hull
/// by best marginal (delta-hit x (t_hdd - t_ssd)) / delta-blocks otherwise
/// (ties to the lower VM id). Throws when capacity cannot honor the minimum
/// allocations.
AllocationPlan allocate(const PartitionProblem& problem);

/// The literal diagnostic scorer diff + hsum*T_ssd + (N - hsum)*T_hdd with
/// diff = C - sum(c). Mixes block and time units; never optimized.
double paper_objective(std::span<const std::uint64_t> c, const PartitionProblem& problem);

namespace detail {
/// Greedy path exposed for tests; allocate() routes to it on large instances.
AllocationPlan allocate_greedy(const PartitionProblem& problem);
}  // namespace detail

}  // namespace eci
