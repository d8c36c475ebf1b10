#include "eci/policy.hpp"

namespace eci {

WritePolicy assign_policy(const ClassCounts& counts, double wthreshold) {
  return write_ratio(counts) >= wthreshold ? WritePolicy::RO : WritePolicy::WB;
}

PolicyState::PolicyState(std::uint16_t vm_count, double wthreshold)
    : policies_(vm_count, WritePolicy::WB), forced_(vm_count, false), wthreshold_(wthreshold) {}

WritePolicy PolicyState::update(std::uint16_t vm, const ClassCounts& interval_counts) {
  if (forced_.at(vm)) return policies_[vm];
  if (interval_counts.total() == 0) return policies_[vm];
  policies_[vm] = assign_policy(interval_counts, wthreshold_);
  return policies_[vm];
}

void PolicyState::force_ro(std::uint16_t vm) {
  forced_.at(vm) = true;
  policies_.at(vm) = WritePolicy::RO;
}

}  // namespace eci
