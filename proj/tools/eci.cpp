// Trace-driven SSD-cache analysis tool: inspect and profile block traces,
// replay them through the cache simulator, and run the full per-interval
// partitioning loop in URD (eci) or TRD baseline mode.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eci/cachesim.hpp"
#include "eci/classifier.hpp"
#include "eci/config.hpp"
#include "eci/orchestrator.hpp"
#include "eci/rdist.hpp"
#include "eci/trace.hpp"

namespace fs = std::filesystem;
using namespace eci;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

struct Options {
  std::vector<std::string> inputs;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> block_size;
  std::optional<std::uint64_t> interval_ms;
  std::optional<std::uint64_t> ts_per_ms;
  std::optional<std::uint64_t> capacity_blocks;
  std::optional<std::uint64_t> cmin;
  std::optional<std::uint64_t> seed;
  std::optional<double> wthreshold;
  std::optional<double> t_hdd_us;
  std::optional<double> t_ssd_us;
  std::optional<std::string> mode;
  // simulate only
  std::uint64_t size_blocks = 0;
  std::string policy = "wb";
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

SidecarConfig load_config(const Options& opt) {
  if (opt.config_path.empty()) return {};
  return SidecarConfig::load(opt.config_path);
}

std::uint32_t effective_block_size(const Options& opt, const SidecarConfig& cfg) {
  std::uint64_t bs = opt.block_size.value_or(cfg.get_u64("block_size_bytes").value_or(8192));
  if (bs == 0 || (bs & (bs - 1)) != 0)
    throw std::invalid_argument("block size must be a power of two");
  return static_cast<std::uint32_t>(bs);
}

RunConfig build_run_config(const Options& opt, const SidecarConfig& cfg) {
  RunConfig rc;
  rc.block_size_bytes = effective_block_size(opt, cfg);
  std::uint64_t ts_per_ms = opt.ts_per_ms.value_or(cfg.get_u64("ts_per_ms").value_or(10000));
  std::uint64_t interval_ms =
      opt.interval_ms.value_or(cfg.get_u64("interval_ms").value_or(600000));
  rc.interval_ts = interval_ms * ts_per_ms;
  rc.capacity_blocks =
      opt.capacity_blocks.value_or(cfg.get_u64("capacity_blocks").value_or(3'000'000));
  rc.c_min = opt.cmin.value_or(cfg.get_u64("cmin").value_or(1000));
  rc.wthreshold = opt.wthreshold.value_or(cfg.get_double("wthreshold").value_or(0.5));
  rc.t_hdd_us = opt.t_hdd_us.value_or(cfg.get_double("t_hdd_us").value_or(5000.0));
  rc.t_ssd_us = opt.t_ssd_us.value_or(cfg.get_double("t_ssd_us").value_or(100.0));
  rc.seed = opt.seed.value_or(cfg.get_u64("seed").value_or(0));
  rc.force_ro_vms = cfg.force_ro();
  std::string mode = opt.mode.value_or(cfg.get("mode").value_or("eci"));
  if (mode == "eci")
    rc.mode = RunMode::ECI;
  else if (mode == "trd")
    rc.mode = RunMode::TRD_BASELINE;
  else
    throw std::invalid_argument("mode must be eci or trd");
  return rc;
}

bool is_binary_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && magic[0] == 'E' && magic[1] == 'C' && magic[2] == 'I' &&
         magic[3] == '1';
}

std::vector<IoRequest> load_one(const std::string& path, std::uint32_t block_size,
                                const VmMap& vms, ParseStats* stats) {
  if (!fs::exists(path)) throw std::invalid_argument("no such trace file: " + path);
  if (is_binary_trace(path)) {
    std::ifstream in(path, std::ios::binary);
    return read_binary(in);
  }
  std::ifstream in(path);
  return parse_msr(in, block_size, vms, stats);
}

/// Loads the input set into per-VM streams. A single file keeps its own VM
/// ids (CSV via the sidecar map, binary via embedded ids); with several
/// files, file k becomes VM k.
std::vector<std::vector<IoRequest>> load_traces(const Options& opt, const SidecarConfig& cfg,
                                                std::uint32_t block_size,
                                                ParseStats* stats = nullptr) {
  std::vector<IoRequest> all;
  if (opt.inputs.size() == 1) {
    all = load_one(opt.inputs[0], block_size, cfg.vm_map(), stats);
  } else {
    for (std::size_t k = 0; k < opt.inputs.size(); ++k) {
      ParseStats s;
      auto part = load_one(opt.inputs[k], block_size, VmMap{}, &s);
      for (auto& r : part) r.vm_id = static_cast<std::uint16_t>(k);
      all.insert(all.end(), part.begin(), part.end());
      if (stats) {
        stats->records += s.records;
        stats->skipped_zero_size += s.skipped_zero_size;
      }
    }
  }
  std::uint16_t max_vm = 0;
  for (const auto& r : all) max_vm = std::max(max_vm, r.vm_id);
  std::vector<std::vector<IoRequest>> per_vm(all.empty() ? 1 : max_vm + 1);
  for (const auto& r : all) per_vm[r.vm_id].push_back(r);
  return per_vm;
}

int cmd_inspect(const Options& opt) {
  auto cfg = load_config(opt);
  auto block_size = effective_block_size(opt, cfg);
  ParseStats stats;
  auto per_vm = load_traces(opt, cfg, block_size, &stats);

  std::uint64_t total = 0;
  for (std::size_t vm = 0; vm < per_vm.size(); ++vm) {
    if (per_vm[vm].empty()) continue;
    auto expanded = expand_multiblock(per_vm[vm]);
    Classifier cls;
    ClassCounts counts;
    cls.classify(expanded, &counts);
    std::uint64_t reads = 0;
    for (const auto& r : expanded)
      if (r.op == Op::Read) ++reads;
    std::cout << "vm=" << vm << " requests=" << per_vm[vm].size()
              << " block_touches=" << expanded.size() << " reads=" << reads
              << " writes=" << expanded.size() - reads << " distinct_blocks=" << cls.blocks_seen()
              << " CR=" << counts.cr << " CW=" << counts.cw << " RAR=" << counts.rar
              << " RAW=" << counts.raw << " WAR=" << counts.war << " WAW=" << counts.waw
              << "\n";
    total += per_vm[vm].size();
  }
  std::cout << "total_requests=" << total << " skipped_zero_size=" << stats.skipped_zero_size
            << "\n";
  return kExitOk;
}

int cmd_profile(const Options& opt) {
  auto cfg = load_config(opt);
  auto block_size = effective_block_size(opt, cfg);
  auto per_vm = load_traces(opt, cfg, block_size);

  std::string mode_name = opt.mode.value_or("urd");
  DistanceMode mode;
  if (mode_name == "urd" || mode_name == "eci")
    mode = DistanceMode::URD;
  else if (mode_name == "trd")
    mode = DistanceMode::TRD;
  else
    throw std::invalid_argument("profile mode must be urd or trd");

  fs::path out_dir = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
  fs::create_directories(out_dir);
  std::string stem = fs::path(opt.inputs[0]).stem().string();
  std::ofstream hist(out_dir / (stem + "_hist.csv"));
  hist << "vm_id,mode,distance,count\n";
  std::ofstream hrf(out_dir / (stem + "_hrf.csv"));
  hrf << "vm_id,breakpoint_blocks,hit_ratio\n";

  for (std::size_t vm = 0; vm < per_vm.size(); ++vm) {
    if (per_vm[vm].empty()) continue;
    auto expanded = expand_multiblock(per_vm[vm]);
    Classifier cls;
    auto tagged = cls.classify(expanded);
    auto profile = stack_distance(tagged);

    for (const auto& [d, c] : profile.trd_hist) hist << vm << ",trd," << d << ',' << c << "\n";
    for (const auto& [d, c] : profile.urd_hist) hist << vm << ",urd," << d << ',' << c << "\n";
    auto fn = hit_ratio_fn(profile, mode);
    for (std::size_t j = 0; j < fn.breakpoints.size(); ++j)
      hrf << vm << ',' << fn.breakpoints[j] << ',' << fmt(fn.values[j]) << "\n";

    std::cout << "vm=" << vm << " max_trd=" << profile.max_trd << " max_urd=" << profile.max_urd
              << " size_trd=" << trd_based_size(profile) << " size_urd=" << urd_based_size(profile)
              << "\n";
  }
  if (per_vm.size() == 1 && per_vm[0].empty())
    std::cout << "vm=0 max_trd=-1 max_urd=-1 size_trd=0 size_urd=0\n";
  return kExitOk;
}

int cmd_simulate(const Options& opt) {
  auto cfg = load_config(opt);
  auto block_size = effective_block_size(opt, cfg);
  auto per_vm = load_traces(opt, cfg, block_size);

  WritePolicy policy;
  if (opt.policy == "wb")
    policy = WritePolicy::WB;
  else if (opt.policy == "wt")
    policy = WritePolicy::WT;
  else if (opt.policy == "ro")
    policy = WritePolicy::RO;
  else
    throw std::invalid_argument("policy must be wb, wt or ro");

  CacheConfig cc{opt.size_blocks, policy, opt.t_hdd_us.value_or(5000.0),
                 opt.t_ssd_us.value_or(100.0)};

  std::optional<std::ofstream> out;
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    out.emplace(fs::path(opt.out_dir) / "sim.csv");
    *out << "vm_id,interval,size_blocks,policy,read_hits,read_misses,ssd_writes,hdd_reads,"
            "hdd_writes,latency_us\n";
  }

  for (std::size_t vm = 0; vm < per_vm.size(); ++vm) {
    if (per_vm[vm].empty()) continue;
    auto expanded = expand_multiblock(per_vm[vm]);
    Classifier cls;
    auto tagged = cls.classify(expanded);
    SimReport rep = simulate(tagged, cc);
    double reads = static_cast<double>(rep.read_hits + rep.read_misses);
    std::cout << "vm=" << vm << " size_blocks=" << cc.size_blocks
              << " policy=" << to_string(policy) << " read_hits=" << rep.read_hits
              << " read_misses=" << rep.read_misses << " hit_ratio="
              << fmt(reads > 0 ? static_cast<double>(rep.read_hits) / reads : 0.0)
              << " ssd_writes=" << rep.ssd_writes << " hdd_reads=" << rep.hdd_reads
              << " hdd_writes=" << rep.hdd_writes << " latency_us=" << fmt(rep.latency_us)
              << "\n";
    if (out)
      *out << vm << ",0," << cc.size_blocks << ',' << to_string(policy) << ',' << rep.read_hits
           << ',' << rep.read_misses << ',' << rep.ssd_writes << ',' << rep.hdd_reads << ','
           << rep.hdd_writes << ',' << fmt(rep.latency_us) << "\n";
  }
  return kExitOk;
}

struct RunTotals {
  std::uint64_t reads = 0, read_hits = 0, ssd_writes = 0, requests = 0;
  double latency_us = 0.0;
  double mean_alloc = 0.0;
  std::optional<double> ppc;
};

std::vector<RunTotals> summarize(const std::vector<IntervalReport>& reports) {
  if (reports.empty()) return {};
  std::vector<RunTotals> vms(reports.front().vms.size());
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.vms.size(); ++i) {
      const auto& vm = r.vms[i];
      vms[i].reads += vm.sim.read_hits + vm.sim.read_misses;
      vms[i].read_hits += vm.sim.read_hits;
      vms[i].ssd_writes += vm.sim.ssd_writes;
      vms[i].requests += vm.sim.requests();
      vms[i].latency_us += vm.sim.latency_us;
      vms[i].mean_alloc += static_cast<double>(vm.alloc_blocks);
    }
  }
  for (auto& vm : vms) {
    vm.mean_alloc /= static_cast<double>(reports.size());
    if (vm.requests > 0 && vm.mean_alloc > 0.0) {
      double mean_latency = vm.latency_us / static_cast<double>(vm.requests);
      vm.ppc = (1.0 / mean_latency) / vm.mean_alloc;
    }
  }
  return vms;
}

int cmd_run(const Options& opt) {
  auto cfg = load_config(opt);
  auto rc = build_run_config(opt, cfg);
  auto per_vm = load_traces(opt, cfg, rc.block_size_bytes);
  if (opt.out_dir.empty()) throw std::invalid_argument("run requires --out");

  auto t0 = std::chrono::steady_clock::now();
  auto reports = run(per_vm, rc);
  auto t1 = std::chrono::steady_clock::now();
  write_run_outputs(opt.out_dir, rc, reports);
  std::cerr << "timing: " << to_string(rc.mode) << " run of " << reports.size() << " intervals in "
            << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << " ms\n";

  auto totals = summarize(reports);
  for (std::size_t i = 0; i < totals.size(); ++i) {
    const auto& t = totals[i];
    std::cout << "vm=" << i << " reads=" << t.reads << " read_hits=" << t.read_hits
              << " ssd_writes=" << t.ssd_writes << " mean_alloc=" << fmt(t.mean_alloc) << "\n";
  }
  return kExitOk;
}

double ratio_or_nan(double num, double den) {
  return den != 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

int cmd_compare(const Options& opt) {
  auto cfg = load_config(opt);
  if (opt.out_dir.empty()) throw std::invalid_argument("compare requires --out");

  Options eci_opt = opt;
  Options trd_opt = opt;
  eci_opt.mode = opt.mode.value_or("eci");
  trd_opt.mode = opt.mode.value_or("trd");

  auto rc_eci = build_run_config(eci_opt, cfg);
  auto rc_trd = build_run_config(trd_opt, cfg);
  auto per_vm = load_traces(opt, cfg, rc_eci.block_size_bytes);

  auto t0 = std::chrono::steady_clock::now();
  auto rep_eci = run(per_vm, rc_eci);
  auto rep_trd = run(per_vm, rc_trd);
  auto t1 = std::chrono::steady_clock::now();
  std::cerr << "timing: both modes in "
            << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << " ms\n";

  fs::path out_dir(opt.out_dir);
  write_run_outputs(out_dir / "eci", rc_eci, rep_eci);
  write_run_outputs(out_dir / "trd", rc_trd, rep_trd);

  auto eci_totals = summarize(rep_eci);
  auto trd_totals = summarize(rep_trd);

  std::ofstream csv(out_dir / "compare.csv");
  csv << "vm_id,reads,hit_ratio_eci,hit_ratio_trd,mean_latency_us_eci,mean_latency_us_trd,"
         "mean_alloc_blocks_eci,mean_alloc_blocks_trd,ppc_ratio,ssd_writes_eci,ssd_writes_trd,"
         "ssd_writes_ratio\n";

  auto emit = [&](const std::string& id, const RunTotals& e, const RunTotals& t) {
    double hr_e = ratio_or_nan(static_cast<double>(e.read_hits), static_cast<double>(e.reads));
    double hr_t = ratio_or_nan(static_cast<double>(t.read_hits), static_cast<double>(t.reads));
    double ml_e = ratio_or_nan(e.latency_us, static_cast<double>(e.requests));
    double ml_t = ratio_or_nan(t.latency_us, static_cast<double>(t.requests));
    double ppc_ratio =
        (e.ppc && t.ppc) ? *e.ppc / *t.ppc : std::numeric_limits<double>::quiet_NaN();
    double wr = ratio_or_nan(static_cast<double>(e.ssd_writes),
                             static_cast<double>(t.ssd_writes));
    csv << id << ',' << e.reads << ',' << fmt(hr_e) << ',' << fmt(hr_t) << ',' << fmt(ml_e)
        << ',' << fmt(ml_t) << ',' << fmt(e.mean_alloc) << ',' << fmt(t.mean_alloc) << ','
        << fmt(ppc_ratio) << ',' << e.ssd_writes << ',' << t.ssd_writes << ',' << fmt(wr)
        << "\n";
    std::cout << id << ": hit_ratio " << fmt(hr_e) << " vs " << fmt(hr_t) << ", mean_latency_us "
              << fmt(ml_e) << " vs " << fmt(ml_t) << ", alloc_blocks " << fmt(e.mean_alloc)
              << " vs " << fmt(t.mean_alloc) << ", ppc_ratio " << fmt(ppc_ratio)
              << ", ssd_writes " << e.ssd_writes << " vs " << t.ssd_writes << " (ratio "
              << fmt(wr) << ")\n";
  };

  RunTotals agg_e, agg_t;
  double ppc_sum_e = 0.0, ppc_sum_t = 0.0;
  std::size_t ppc_n_e = 0, ppc_n_t = 0;
  for (std::size_t i = 0; i < eci_totals.size(); ++i) {
    emit("vm" + std::to_string(i), eci_totals[i], trd_totals[i]);
    agg_e.reads += eci_totals[i].reads;
    agg_e.read_hits += eci_totals[i].read_hits;
    agg_e.ssd_writes += eci_totals[i].ssd_writes;
    agg_e.requests += eci_totals[i].requests;
    agg_e.latency_us += eci_totals[i].latency_us;
    agg_e.mean_alloc += eci_totals[i].mean_alloc;
    agg_t.reads += trd_totals[i].reads;
    agg_t.read_hits += trd_totals[i].read_hits;
    agg_t.ssd_writes += trd_totals[i].ssd_writes;
    agg_t.requests += trd_totals[i].requests;
    agg_t.latency_us += trd_totals[i].latency_us;
    agg_t.mean_alloc += trd_totals[i].mean_alloc;
    if (eci_totals[i].ppc) {
      ppc_sum_e += *eci_totals[i].ppc;
      ++ppc_n_e;
    }
    if (trd_totals[i].ppc) {
      ppc_sum_t += *trd_totals[i].ppc;
      ++ppc_n_t;
    }
  }
  if (ppc_n_e) agg_e.ppc = ppc_sum_e / static_cast<double>(ppc_n_e);
  if (ppc_n_t) agg_t.ppc = ppc_sum_t / static_cast<double>(ppc_n_t);
  emit("all", agg_e, agg_t);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"request-type-aware SSD cache partitioning toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool with_run_flags) {
    sub->add_option("trace", opt.inputs, "trace file(s): MSR CSV or ECI1 binary")
        ->required()
        ->expected(-1);
    sub->add_option("--config", opt.config_path, "sidecar key-value config file");
    sub->add_option("--block-size", opt.block_size, "cache block size in bytes");
    sub->add_option("--out", opt.out_dir, "output directory");
    if (with_run_flags) {
      sub->add_option("--interval-ms", opt.interval_ms, "interval length in trace milliseconds");
      sub->add_option("--ts-per-ms", opt.ts_per_ms, "trace timestamp units per millisecond");
      sub->add_option("--capacity-blocks", opt.capacity_blocks, "total SSD cache blocks");
      sub->add_option("--wthreshold", opt.wthreshold, "write-ratio threshold for RO");
      sub->add_option("--cmin", opt.cmin, "minimum per-VM allocation in blocks");
      sub->add_option("--t-hdd-us", opt.t_hdd_us, "HDD access latency in microseconds");
      sub->add_option("--t-ssd-us", opt.t_ssd_us, "SSD access latency in microseconds");
      sub->add_option("--seed", opt.seed, "seed recorded in run.meta");
      sub->add_option("--mode", opt.mode, "eci or trd");
    }
  };

  auto* inspect = app.add_subcommand("inspect", "parse a trace and print per-VM statistics");
  add_common(inspect, false);

  auto* profile = app.add_subcommand("profile", "compute reuse-distance profiles");
  add_common(profile, false);
  profile->add_option("--mode", opt.mode, "hit-ratio function mode: urd or trd");

  auto* simulate = app.add_subcommand("simulate", "replay one trace through the cache simulator");
  add_common(simulate, false);
  simulate->add_option("--size-blocks", opt.size_blocks, "cache size in blocks")->required();
  simulate->add_option("--policy", opt.policy, "wb, wt or ro");
  simulate->add_option("--t-hdd-us", opt.t_hdd_us, "HDD access latency in microseconds");
  simulate->add_option("--t-ssd-us", opt.t_ssd_us, "SSD access latency in microseconds");

  auto* runc = app.add_subcommand("run", "full orchestrated multi-VM run");
  add_common(runc, true);

  auto* compare = app.add_subcommand("compare", "run eci and trd modes and compare");
  add_common(compare, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand(inspect)) return cmd_inspect(opt);
    if (app.got_subcommand(profile)) return cmd_profile(opt);
    if (app.got_subcommand(simulate)) return cmd_simulate(opt);
    if (app.got_subcommand(runc)) return cmd_run(opt);
    if (app.got_subcommand(compare)) return cmd_compare(opt);
  } catch (const TraceError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
