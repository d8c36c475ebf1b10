#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "eci/cachesim.hpp"
#include "eci/trace.hpp"
#include "test_support.hpp"

using namespace eci;

TEST_CASE("parse_msr maps aligned single-block records") {
  std::istringstream in("128166372003061629,hm,1,Read,8192,8192,559\n");
  VmMap vms;
  vms.add("hm", 1, 3);
  auto reqs = parse_msr(in, 8192, vms);
  REQUIRE(reqs.size() == 1);
  CHECK(reqs[0].block == 1);
  CHECK(reqs[0].op == Op::Read);
  CHECK(reqs[0].len_blocks == 1);
  CHECK(reqs[0].vm_id == 3);
  CHECK(reqs[0].ts == 128166372003061629ULL);
}

TEST_CASE("parse_msr splits boundary-straddling records") {
  std::istringstream in("1,h,0,Write,4096,8192,0\n");
  auto reqs = parse_msr(in, 8192, VmMap{});
  REQUIRE(reqs.size() == 1);
  CHECK(reqs[0].block == 0);
  CHECK(reqs[0].len_blocks == 2);
}

TEST_CASE("parse_msr preserves input order on a hand-parsed fixture") {
  // Ten well-formed records with varying hosts, types and spans.
  std::string fixture =
      "10,hm,0,Read,0,8192,1\n"
      "11,hm,0,Write,8192,8192,1\n"
      "12,hm,1,Read,16384,16384,1\n"
      "13,web,0,read,24576,8192,1\n"
      "14,web,0,WRITE,0,4096,1\n"
      "15,hm,0,Read,4096,4096,1\n"
      "16,hm,1,Write,65536,24576,1\n"
      "17,web,0,Read,131072,8192,1\n"
      "18,hm,0,Write,12288,8192,1\n"
      "19,web,0,Read,20480,12288,1\n";
  VmMap vms;
  vms.add("hm", -1, 0);
  vms.add("web", 0, 1);
  std::istringstream in(fixture);
  auto reqs = parse_msr(in, 8192, vms);

  // Hand-parsed: (ts, vm, block, op, len)
  std::vector<IoRequest> expected = {
      {0, 10, 0, Op::Read, 1},  {0, 11, 1, Op::Write, 1}, {0, 12, 2, Op::Read, 2},
      {1, 13, 3, Op::Read, 1},  {1, 14, 0, Op::Write, 1}, {0, 15, 0, Op::Read, 1},
      {0, 16, 8, Op::Write, 3}, {1, 17, 16, Op::Read, 1}, {0, 18, 1, Op::Write, 2},
      {1, 19, 2, Op::Read, 2},
  };
  REQUIRE(reqs.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CAPTURE(i);
    CHECK(reqs[i].vm_id == expected[i].vm_id);
    CHECK(reqs[i].ts == expected[i].ts);
    CHECK(reqs[i].block == expected[i].block);
    CHECK(reqs[i].op == expected[i].op);
    CHECK(reqs[i].len_blocks == expected[i].len_blocks);
  }
}

TEST_CASE("parse_msr error paths") {
  SUBCASE("malformed record carries its line number") {
    std::istringstream in("1,h,0,Read,0,8192,0\nnot,a,record\n");
    try {
      parse_msr(in, 8192, VmMap{});
      FAIL("expected TraceError");
    } catch (const TraceError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("zero-size records are skipped and counted") {
    std::istringstream in("1,h,0,Read,0,0,0\n2,h,0,Write,0,8192,0\n");
    ParseStats stats;
    auto reqs = parse_msr(in, 8192, VmMap{}, &stats);
    CHECK(reqs.size() == 1);
    CHECK(stats.skipped_zero_size == 1);
    CHECK(stats.records == 1);
  }
  SUBCASE("unknown type is an error") {
    std::istringstream in("1,h,0,Flush,0,8192,0\n");
    CHECK_THROWS_AS(parse_msr(in, 8192, VmMap{}), TraceError);
  }
  SUBCASE("unmapped host is an error when a map is present") {
    std::istringstream in("1,other,0,Read,0,8192,0\n");
    VmMap vms;
    vms.add("hm", 0, 0);
    CHECK_THROWS_AS(parse_msr(in, 8192, vms), TraceError);
  }
}

TEST_CASE("parse_msr round-trips through to_msr_csv") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint64_t> block(0, 1000);
  std::uniform_int_distribution<std::uint32_t> len(1, 5);
  std::vector<IoRequest> reqs(200);
  for (std::size_t i = 0; i < reqs.size(); ++i)
    reqs[i] = {static_cast<std::uint16_t>(i % 3), i, block(rng),
               i % 2 ? Op::Read : Op::Write, len(rng)};
  VmMap vms;
  vms.add("a", 0, 0);
  vms.add("b", 0, 1);
  vms.add("c", 1, 2);
  std::istringstream in(to_msr_csv(reqs, 8192, vms));
  auto parsed = parse_msr(in, 8192, vms);
  CHECK(parsed == reqs);
}

TEST_CASE("expand_multiblock") {
  SUBCASE("splits a request into consecutive unit blocks") {
    std::vector<IoRequest> reqs = {{0, 7, 5, Op::Write, 3}};
    auto out = expand_multiblock(reqs);
    REQUIRE(out.size() == 3);
    for (std::uint64_t i = 0; i < 3; ++i) {
      CHECK(out[i].block == 5 + i);
      CHECK(out[i].op == Op::Write);
      CHECK(out[i].ts == 7);
      CHECK(out[i].len_blocks == 1);
    }
  }
  SUBCASE("is the identity on single-block streams") {
    auto reqs = test::sample7_trace();
    CHECK(expand_multiblock(reqs) == reqs);
  }
  SUBCASE("output length is the sum of span lengths") {
    std::vector<IoRequest> reqs = {{0, 0, 0, Op::Read, 4},
                                   {0, 1, 10, Op::Write, 7},
                                   {0, 2, 100, Op::Read, 1}};
    CHECK(expand_multiblock(reqs).size() == 12);
  }
  SUBCASE("preserves per-VM relative order and total block touches") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::uint32_t> len(1, 4);
    std::vector<IoRequest> reqs(100);
    std::size_t total = 0;
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      reqs[i] = {static_cast<std::uint16_t>(i % 2), i, i * 10, Op::Read, len(rng)};
      total += reqs[i].len_blocks;
    }
    auto out = expand_multiblock(reqs);
    CHECK(out.size() == total);
    std::uint64_t last_ts[2] = {0, 0};
    for (const auto& r : out) {
      CHECK(r.ts >= last_ts[r.vm_id]);
      last_ts[r.vm_id] = r.ts;
    }
  }
}

TEST_CASE("binary trace format round-trips") {
  auto reqs = test::sample7_trace();
  std::stringstream buf;
  write_binary(buf, reqs);
  auto back = read_binary(buf);
  CHECK(back == reqs);

  SUBCASE("rejects missing magic") {
    std::stringstream bad("nope");
    CHECK_THROWS_AS(read_binary(bad), TraceError);
  }
  SUBCASE("rejects truncated records") {
    std::stringstream trunc;
    write_binary(trunc, reqs);
    std::string bytes = trunc.str();
    bytes.pop_back();
    std::stringstream cut(bytes);
    CHECK_THROWS_AS(read_binary(cut), TraceError);
  }
}

TEST_CASE("gen_corner_case is deterministic under a fixed seed") {
  CornerParams p;
  p.seed = 77;
  for (auto kind :
       {CornerCase::SeqRandom, CornerCase::RandomSeq, CornerCase::SemiSequential}) {
    auto a = gen_corner_case(kind, p);
    auto b = gen_corner_case(kind, p);
    CHECK(a == b);
    CHECK(!a.empty());
  }
}

TEST_CASE("SeqRandom first interval is a reuse-free sequential pass") {
  CornerParams p;
  p.run_len = 10;
  auto reqs = gen_corner_case(CornerCase::SeqRandom, p);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(reqs[i].block == i);
    if (i > 0) CHECK(reqs[i].block > reqs[i - 1].block);
  }
  std::vector<IoRequest> interval1(reqs.begin(), reqs.begin() + 10);
  auto profile = stack_distance(test::classify_fresh(interval1));
  CHECK(profile.max_urd == -1);
  CHECK(profile.urd_hist.empty());
  CHECK(urd_based_size(profile) == 0);
}

TEST_CASE("SemiSequential run repeated twice gives max TRD 3") {
  CornerParams p;
  p.run_len = 4;
  p.intervals = 2;
  auto reqs = gen_corner_case(CornerCase::SemiSequential, p);
  REQUIRE(reqs.size() == 8);
  auto profile = stack_distance(test::classify_fresh(reqs));
  CHECK(profile.max_trd == 3);
}

TEST_CASE("RandomSeq repeats miss when the flood filled the cache") {
  CornerParams p;
  p.reuse_set = 3;
  p.run_len = 8;
  auto reqs = gen_corner_case(CornerCase::RandomSeq, p);
  auto tagged = test::classify_fresh(reqs);

  // Cache sized for the locality phase (max URD 2 -> 3 blocks), replayed
  // phase by phase through the simulator oracle.
  LruCacheSim sim(CacheConfig{3, WritePolicy::WB, 5000.0, 100.0});
  std::size_t phase1 = 2 * p.reuse_set, phase2 = phase1 + p.run_len;
  for (std::size_t i = 0; i < phase2; ++i) sim.access(tagged[i]);
  auto before = sim.report();
  for (std::size_t i = phase2; i < tagged.size(); ++i) sim.access(tagged[i]);
  auto repeats = sim.report().since(before);
  CHECK(repeats.read_hits == 0);
  CHECK(repeats.read_misses == p.reuse_set);
}

TEST_CASE("gen_corner_case rejects empty ranges") {
  CornerParams p;
  p.run_len = 0;
  CHECK_THROWS_AS(gen_corner_case(CornerCase::SeqRandom, p), std::invalid_argument);
  p.run_len = 4;
  p.reuse_set = 0;
  CHECK_THROWS_AS(gen_corner_case(CornerCase::RandomSeq, p), std::invalid_argument);
}
