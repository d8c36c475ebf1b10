#include "eci/partitioner.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace eci {

bool feasibility_check(std::span<const std::uint64_t> demands, std::uint64_t capacity_blocks) {
  std::uint64_t sum = 0;
  for (auto d : demands) {
    if (d > capacity_blocks - sum) return false;  // overflow-safe running check
    sum += d;
  }
  return true;
}

double vm_latency(const HitRatioFn& hit_fn, std::uint64_t c, double t_hdd_us, double t_ssd_us) {
  double h = hit_fn(c);
  return h * t_ssd_us + (1.0 - h) * t_hdd_us;
}

namespace {

struct Candidates {
  std::vector<std::uint64_t> sizes;  // ascending, starting at c_min
  std::vector<double> hits;          // h(size) for each
};

Candidates vm_candidates(const VmDemand& vm) {
  Candidates c;
  c.sizes.push_back(vm.c_min);
  c.hits.push_back(vm.hit_fn(vm.c_min));
  for (std::size_t i = 0; i < vm.hit_fn.breakpoints.size(); ++i) {
    std::uint64_t b = vm.hit_fn.breakpoints[i];
    if (b > vm.c_min && b <= vm.c_urd) {
      c.sizes.push_back(b);
      c.hits.push_back(vm.hit_fn.values[i]);
    }
  }
  return c;
}

double plan_objective(const PartitionProblem& p, std::span<const std::uint64_t> c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.vms.size(); ++i)
    sum += vm_latency(p.vms[i].hit_fn, c[i], p.t_hdd_us, p.t_ssd_us);
  return sum;
}

void validate(const PartitionProblem& p) {
  std::uint64_t min_sum = 0;
  for (const auto& vm : p.vms) {
    if (vm.c_urd < vm.c_min)
      throw std::invalid_argument("demand below c_min; clamp demands before partitioning");
    if (vm.c_min > p.capacity_blocks - min_sum)
      throw std::invalid_argument("capacity cannot honor the minimum allocations");
    min_sum += vm.c_min;
  }
}

// Exhaustive DFS over per-VM candidate sizes, maximizing total hit ratio.
// Ties prefer the smaller total allocation, then the lexicographically
// smaller vector; both keep the result deterministic.
class ExactSearch {
 public:
  ExactSearch(const std::vector<Candidates>& cands, std::uint64_t capacity)
      : cands_(cands), capacity_(capacity), current_(cands.size(), 0) {
    suffix_max_hit_.assign(cands.size() + 1, 0.0);
    for (std::size_t i = cands.size(); i-- > 0;)
      suffix_max_hit_[i] = suffix_max_hit_[i + 1] + cands[i].hits.back();
  }

  std::vector<std::uint64_t> run() {
    dfs(0, 0, 0.0);
    return best_;
  }

 private:
  void dfs(std::size_t vm, std::uint64_t used, double hit_sum) {
    if (vm == cands_.size()) {
      if (better(hit_sum, used)) {
        best_hit_ = hit_sum;
        best_used_ = used;
        best_ = current_;
        have_best_ = true;
      }
      return;
    }
    if (have_best_ && hit_sum + suffix_max_hit_[vm] < best_hit_) return;
    const auto& c = cands_[vm];
    for (std::size_t j = 0; j < c.sizes.size(); ++j) {
      if (c.sizes[j] > capacity_ - used) break;  // sizes ascend; rest won't fit
      current_[vm] = c.sizes[j];
      dfs(vm + 1, used + c.sizes[j], hit_sum + c.hits[j]);
    }
  }

  bool better(double hit_sum, std::uint64_t used) const {
    if (!have_best_) return true;
    if (hit_sum != best_hit_) return hit_sum > best_hit_;
    if (used != best_used_) return used < best_used_;
    return current_ < best_;
  }

  const std::vector<Candidates>& cands_;
  std::uint64_t capacity_;
  std::vector<std::uint64_t> current_, best_;
  std::vector<double> suffix_max_hit_;
  double best_hit_ = 0.0;
  std::uint64_t best_used_ = 0;
  bool have_best_ = false;
};

struct HullSegment {
  std::uint64_t dc;
  double dh;
  double slope() const { return dh / static_cast<double>(dc); }
};

// Upper concave hull of (size, hit) candidates, as incremental segments with
// non-increasing slope starting from c_min.
std::vector<HullSegment> concave_hull(const Candidates& c) {
  std::vector<std::size_t> hull{0};
  for (std::size_t j = 1; j < c.sizes.size(); ++j) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull.back();
      double lhs = (c.hits[b] - c.hits[a]) * static_cast<double>(c.sizes[j] - c.sizes[a]);
      double rhs = (c.hits[j] - c.hits[a]) * static_cast<double>(c.sizes[b] - c.sizes[a]);
      if (lhs >= rhs) break;  // b stays above the a-j chord
      hull.pop_back();
    }
    if (c.hits[j] > c.hits[hull.back()]) hull.push_back(j);
  }
  std::vector<HullSegment> segs;
  for (std::size_t k = 1; k < hull.size(); ++k)
    segs.push_back({c.sizes[hull[k]] - c.sizes[hull[k - 1]],
                    c.hits[hull[k]] - c.hits[hull[k - 1]]});
  return segs;
}

}  // namespace

namespace detail {

AllocationPlan allocate_greedy(const PartitionProblem& p) {
  const std::size_t n = p.vms.size();
  std::vector<std::vector<HullSegment>> segs(n);
  std::vector<std::size_t> next(n, 0);
  AllocationPlan plan;
  plan.feasible = false;
  plan.c_eff.resize(n);

  std::uint64_t budget = p.capacity_blocks;
  for (std::size_t i = 0; i < n; ++i) {
    plan.c_eff[i] = p.vms[i].c_min;
    budget -= p.vms[i].c_min;
    segs[i] = concave_hull(vm_candidates(p.vms[i]));
  }

  const double gain_per_hit = p.t_hdd_us - p.t_ssd_us;
  for (;;) {
    std::size_t pick = n;
    double best_marginal = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (next[i] == segs[i].size()) continue;
      const auto& s = segs[i][next[i]];
      if (s.dc > budget) continue;
      double marginal = s.dh * gain_per_hit / static_cast<double>(s.dc);
      if (marginal > best_marginal) {  // strict: ties stay with the lower id
        best_marginal = marginal;
        pick = i;
      }
    }
    if (pick == n) break;
    const auto& s = segs[pick][next[pick]];
    plan.c_eff[pick] += s.dc;
    budget -= s.dc;
    ++next[pick];
  }
  plan.objective_latency_us = plan_objective(p, plan.c_eff);
  return plan;
}

}  // namespace detail

AllocationPlan allocate(const PartitionProblem& problem) {
  validate(problem);
  const std::size_t n = problem.vms.size();

  std::vector<std::uint64_t> demands(n);
  for (std::size_t i = 0; i < n; ++i) demands[i] = problem.vms[i].c_urd;
  if (feasibility_check(demands, problem.capacity_blocks)) {
    AllocationPlan plan;
    plan.c_eff = std::move(demands);
    plan.feasible = true;
    plan.objective_latency_us = plan_objective(problem, plan.c_eff);
    return plan;
  }

  std::vector<Candidates> cands(n);
  double search_space = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    cands[i] = vm_candidates(problem.vms[i]);
    search_space *= static_cast<double>(cands[i].sizes.size());
  }

  AllocationPlan plan;
  // The pruned enumeration is exact; beyond this bound fall back to the
  // greedy hull walk, which is optimal for the concave relaxation.
  if (search_space <= 2e6) {
    plan.c_eff = ExactSearch(cands, problem.capacity_blocks).run();
    plan.feasible = false;
    plan.objective_latency_us = plan_objective(problem, plan.c_eff);
  } else {
    plan = detail::allocate_greedy(problem);
  }

  std::uint64_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    assert(plan.c_eff[i] >= problem.vms[i].c_min && plan.c_eff[i] <= problem.vms[i].c_urd);
    used += plan.c_eff[i];
  }
  assert(used <= problem.capacity_blocks);
  (void)used;
  return plan;
}

double paper_objective(std::span<const std::uint64_t> c, const PartitionProblem& problem) {
  double hsum = 0.0;
  std::uint64_t csum = 0;
  for (std::size_t i = 0; i < problem.vms.size(); ++i) {
    hsum += problem.vms[i].hit_fn(c[i]);
    csum += c[i];
  }
  double diff = static_cast<double>(problem.capacity_blocks) - static_cast<double>(csum);
  double n = static_cast<double>(problem.vms.size());
  return diff + hsum * problem.t_ssd_us + (n - hsum) * problem.t_hdd_us;
}

}  // namespace eci
