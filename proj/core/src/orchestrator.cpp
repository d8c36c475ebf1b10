#include "eci/orchestrator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace eci {

const char* to_string(RunMode mode) {
  return mode == RunMode::ECI ? "eci" : "trd";
}

namespace {

void validate(const std::vector<std::vector<IoRequest>>& traces, const RunConfig& cfg) {
  if (traces.empty()) throw std::invalid_argument("need at least one VM trace");
  if (cfg.interval_ts == 0) throw std::invalid_argument("interval must be positive");
  if (cfg.capacity_blocks < traces.size() * cfg.c_min)
    throw std::invalid_argument("capacity below the per-VM minimum allocations");
  for (const auto& vm : cfg.force_ro_vms)
    if (vm >= traces.size()) throw std::invalid_argument("force_ro names an unknown VM");
  for (const auto& t : traces)
    if (!std::is_sorted(t.begin(), t.end(),
                        [](const IoRequest& a, const IoRequest& b) { return a.ts < b.ts; }))
      throw std::invalid_argument("per-VM streams must be time-sorted");
}

}  // namespace

std::vector<IntervalReport> run(const std::vector<std::vector<IoRequest>>& per_vm_traces,
                                const RunConfig& cfg) {
  validate(per_vm_traces, cfg);
  const std::size_t n = per_vm_traces.size();

  std::vector<std::vector<IoRequest>> streams(n);
  std::uint64_t last_interval = 0;
  for (std::size_t i = 0; i < n; ++i) {
    streams[i] = expand_multiblock(per_vm_traces[i]);
    if (!streams[i].empty())
      last_interval = std::max(last_interval, streams[i].back().ts / cfg.interval_ts);
  }

  std::vector<Classifier> classifiers(n);
  std::vector<LruCacheSim> sims;
  sims.reserve(n);
  CacheConfig base{cfg.c_min, WritePolicy::WB, cfg.t_hdd_us, cfg.t_ssd_us};
  for (std::size_t i = 0; i < n; ++i) sims.emplace_back(base);

  PolicyState policy_state(static_cast<std::uint16_t>(n), cfg.wthreshold);
  if (cfg.mode == RunMode::ECI)
    for (auto vm : cfg.force_ro_vms) policy_state.force_ro(vm);

  std::vector<std::uint64_t> alloc(n, cfg.c_min);
  std::vector<WritePolicy> policy(n, WritePolicy::WB);
  for (std::size_t i = 0; i < n; ++i) policy[i] = policy_state.current(static_cast<std::uint16_t>(i));
  for (std::size_t i = 0; i < n; ++i) sims[i].set_policy(policy[i]);

  std::vector<std::size_t> cursor(n, 0);
  std::vector<IntervalReport> reports;

  for (std::uint64_t k = 0; k <= last_interval; ++k) {
    IntervalReport report;
    report.interval = k;
    report.vms.resize(n);

    std::vector<ReuseProfile> profiles(n);
    const std::uint64_t window_end = (k + 1) * cfg.interval_ts;

    for (std::size_t i = 0; i < n; ++i) {
      auto& vm = report.vms[i];
      vm.alloc_blocks = alloc[i];
      vm.policy = policy[i];

      std::size_t begin = cursor[i];
      while (cursor[i] < streams[i].size() && streams[i][cursor[i]].ts < window_end) ++cursor[i];
      std::span<const IoRequest> window(streams[i].data() + begin, cursor[i] - begin);
      vm.active = !window.empty();

      SimReport before = sims[i].report();
      auto tagged = classifiers[i].classify(window, &vm.counts);
      for (const auto& cr : tagged) sims[i].access(cr);
      vm.sim = sims[i].report().since(before);

      profiles[i] = stack_distance(tagged);
      vm.profile = {profiles[i].max_trd, profiles[i].max_urd, profiles[i].total_accesses,
                    profiles[i].trd_samples(), profiles[i].urd_samples()};

      report.aggregate_latency_us += vm.sim.latency_us;
      report.aggregate_ssd_writes += vm.sim.ssd_writes;
    }

    // Decide the next interval's plan from this interval's measurements.
    const DistanceMode dist_mode =
        cfg.mode == RunMode::ECI ? DistanceMode::URD : DistanceMode::TRD;
    PartitionProblem problem;
    problem.capacity_blocks = cfg.capacity_blocks;
    problem.t_hdd_us = cfg.t_hdd_us;
    problem.t_ssd_us = cfg.t_ssd_us;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
      if (!report.vms[i].active) continue;
      active.push_back(i);
      VmDemand d;
      d.hit_fn = hit_ratio_fn(profiles[i], dist_mode);
      std::uint64_t size = dist_mode == DistanceMode::URD ? urd_based_size(profiles[i])
                                                          : trd_based_size(profiles[i]);
      d.c_urd = std::max(size, cfg.c_min);
      d.c_min = cfg.c_min;
      report.vms[i].demand_blocks = d.c_urd;
      problem.vms.push_back(std::move(d));
    }

    if (!active.empty()) {
      AllocationPlan plan = allocate(problem);
      report.feasible = plan.feasible;
      std::vector<std::uint64_t> next_alloc(n, 0);
      for (std::size_t j = 0; j < active.size(); ++j) next_alloc[active[j]] = plan.c_eff[j];
      alloc = std::move(next_alloc);
    }
    // else: an interval with no traffic anywhere carries no information;
    // keep the previous plan.

    for (std::size_t i = 0; i < n; ++i) {
      auto& vm = report.vms[i];
      if (vm.active) {
        vm.write_ratio = write_ratio(vm.counts);
        if (cfg.mode == RunMode::ECI)
          policy[i] = policy_state.update(static_cast<std::uint16_t>(i), vm.counts);
      }
      sims[i].set_policy(policy[i]);
      sims[i].resize(alloc[i]);
    }

    reports.push_back(std::move(report));
  }
  return reports;
}

PerfPerCost perf_per_cost(const IntervalReport& report) {
  PerfPerCost out;
  out.per_vm.resize(report.vms.size());
  double sum = 0.0;
  std::size_t included = 0;
  for (std::size_t i = 0; i < report.vms.size(); ++i) {
    const auto& vm = report.vms[i];
    std::uint64_t reqs = vm.sim.requests();
    if (vm.alloc_blocks == 0 || reqs == 0) continue;
    double mean_latency = vm.sim.latency_us / static_cast<double>(reqs);
    double ppc = (1.0 / mean_latency) / static_cast<double>(vm.alloc_blocks);
    out.per_vm[i] = ppc;
    sum += ppc;
    ++included;
  }
  out.aggregate = included ? sum / static_cast<double>(included) : 0.0;
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void write_run_outputs(const std::filesystem::path& dir, const RunConfig& cfg,
                       const std::vector<IntervalReport>& reports) {
  std::filesystem::create_directories(dir);

  {
    std::ofstream meta(dir / "run.meta");
    meta << "block_size_bytes=" << cfg.block_size_bytes << "\n"
         << "c_min=" << cfg.c_min << "\n"
         << "capacity_blocks=" << cfg.capacity_blocks << "\n";
    meta << "force_ro=";
    for (std::size_t i = 0; i < cfg.force_ro_vms.size(); ++i)
      meta << (i ? "," : "") << cfg.force_ro_vms[i];
    meta << "\n";
    meta << "interval_ts=" << cfg.interval_ts << "\n"
         << "intervals=" << reports.size() << "\n"
         << "mode=" << to_string(cfg.mode) << "\n"
         << "seed=" << cfg.seed << "\n"
         << "t_hdd_us=" << fmt_double(cfg.t_hdd_us) << "\n"
         << "t_ssd_us=" << fmt_double(cfg.t_ssd_us) << "\n"
         << "vm_count=" << (reports.empty() ? 0 : reports.front().vms.size()) << "\n"
         << "wthreshold=" << fmt_double(cfg.wthreshold) << "\n";
  }

  std::ofstream counts(dir / "class_counts.csv");
  counts << "vm_id,interval,CR,CW,RAR,RAW,WAR,WAW\n";
  std::ofstream plan(dir / "plan.csv");
  plan << "interval,vm_id,demand_blocks,alloc_blocks,feasible\n";
  std::ofstream pol(dir / "policy.csv");
  pol << "interval,vm_id,write_ratio,policy\n";
  std::ofstream sim(dir / "sim.csv");
  sim << "vm_id,interval,size_blocks,policy,read_hits,read_misses,ssd_writes,hdd_reads,"
         "hdd_writes,latency_us\n";

  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.vms.size(); ++i) {
      const auto& vm = r.vms[i];
      counts << i << ',' << r.interval << ',' << vm.counts.cr << ',' << vm.counts.cw << ','
             << vm.counts.rar << ',' << vm.counts.raw << ',' << vm.counts.war << ','
             << vm.counts.waw << "\n";
      plan << r.interval << ',' << i << ',' << vm.demand_blocks << ',' << vm.alloc_blocks << ','
           << (r.feasible ? 1 : 0) << "\n";
      if (vm.active)
        pol << r.interval << ',' << i << ',' << fmt_double(vm.write_ratio) << ','
            << to_string(vm.policy) << "\n";
      sim << i << ',' << r.interval << ',' << vm.alloc_blocks << ',' << to_string(vm.policy)
          << ',' << vm.sim.read_hits << ',' << vm.sim.read_misses << ',' << vm.sim.ssd_writes
          << ',' << vm.sim.hdd_reads << ',' << vm.sim.hdd_writes << ','
          << fmt_double(vm.sim.latency_us) << "\n";
    }
  }
}

}  // namespace eci
