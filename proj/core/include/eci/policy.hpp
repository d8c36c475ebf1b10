#pragma once

#include <cstdint>
#include <vector>

#include "eci/cachesim.hpp"
#include "eci/classifier.hpp"

namespace eci {

/// RO when write_ratio(counts) >= wthreshold, WB otherwise. Throws
/// std::invalid_argument on empty counts (no decision can be made).
WritePolicy assign_policy(const ClassCounts& counts, double wthreshold);

/// Per-VM write-policy state across intervals. Every VM starts at WB;
/// decisions take effect at interval boundaries, and an interval without
/// requests retains the previous policy. Individual VMs can be pinned to RO
/// regardless of their counts.
class PolicyState {
 public:
  PolicyState(std::uint16_t vm_count, double wthreshold);

  /// Applies one interval's counts and returns the policy for the next
  /// interval.
  WritePolicy update(std::uint16_t vm, const ClassCounts& interval_counts);

  WritePolicy current(std::uint16_t vm) const { return policies_.at(vm); }
  void force_ro(std::uint16_t vm);
  double wthreshold() const { return wthreshold_; }

 private:
  std::vector<WritePolicy> policies_;
  std::vector<bool> forced_;
  double wthreshold_;
};

}  // namespace eci
