#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eci {

enum class Op : std::uint8_t { Read = 0, Write = 1 };

/// One block-level access. `block` is a logical block number at the trace's
/// configured block size; `ts` is in the trace's native time units.
struct IoRequest {
  std::uint16_t vm_id = 0;
  std::uint64_t ts = 0;
  std::uint64_t block = 0;
  Op op = Op::Read;
  std::uint32_t len_blocks = 1;

  friend bool operator==(const IoRequest&, const IoRequest&) = default;
};

enum class TraceSource : std::uint8_t { MsrCsv, Synthetic, InternalBinary };

struct TraceMeta {
  std::uint32_t block_size_bytes = 8192;  // must be a power of two
  std::uint16_t vm_count = 1;
  TraceSource source = TraceSource::MsrCsv;
};

/// Parse or format failure tagged with the 1-based input line it came from.
class TraceError : public std::runtime_error {
 public:
  TraceError(const std::string& msg, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Maps MSR (Hostname, DiskNumber) pairs to VM ids. An empty map sends every
/// record to VM 0. Disk number -1 matches any disk of that hostname.
class VmMap {
 public:
  void add(std::string hostname, int disk, std::uint16_t vm_id);
  std::optional<std::uint16_t> lookup(std::string_view hostname, int disk) const;
  /// Reverse lookup used when serializing requests back to MSR CSV.
  std::optional<std::pair<std::string, int>> identity(std::uint16_t vm_id) const;
  bool empty() const { return entries_.empty(); }
  std::uint16_t max_vm_id() const;

 private:
  struct Entry {
    std::string hostname;
    int disk;
    std::uint16_t vm_id;
  };
  std::vector<Entry> entries_;
};

struct ParseStats {
  std::size_t records = 0;
  std::size_t skipped_zero_size = 0;
};

/// Parses MSR-format CSV records:
///   Timestamp,Hostname,DiskNumber,Type,Offset,Size,ResponseTime
/// Offset/Size are bytes; a record covers every block it overlaps. Size-0
/// records are skipped and counted in `stats`; any other malformed field
/// throws TraceError with the offending line number. ResponseTime is ignored.
std::vector<IoRequest> parse_msr(std::istream& in, std::uint32_t block_size_bytes,
                                 const VmMap& vms, ParseStats* stats = nullptr);

/// Inverse of parse_msr for well-formed single- or multi-block requests;
/// ResponseTime is emitted as 0.
std::string to_msr_csv(std::span<const IoRequest> reqs, std::uint32_t block_size_bytes,
                       const VmMap& vms);

/// Splits every request into len_blocks unit requests with ascending block
/// numbers and unchanged vm/ts/op. Order between requests is preserved.
std::vector<IoRequest> expand_multiblock(std::span<const IoRequest> reqs);

// Internal binary trace format: magic "ECI1", then packed little-endian
// records (vm_id:u16, ts:u64, block:u64, op:u8). Single-block only.
void write_binary(std::ostream& out, std::span<const IoRequest> reqs);
std::vector<IoRequest> read_binary(std::istream& in);

enum class CornerCase : std::uint8_t { SeqRandom, RandomSeq, SemiSequential };

/// Parameters for the synthetic corner-case generators. Each generated phase
/// occupies one timestamp window of `interval_ts` units so an orchestrated run
/// with a matching interval sees one phase per interval.
struct CornerParams {
  std::uint64_t base_block = 0;
  std::uint32_t run_len = 10;          // sequential run length
  std::uint32_t reuse_set = 4;         // distinct blocks in the locality phases
  std::uint32_t random_accesses = 12;  // draws in the random phase (SeqRandom)
  std::uint32_t intervals = 3;         // run repetitions (SemiSequential)
  std::uint64_t interval_ts = 1024;
  std::uint64_t seed = 1;
  std::uint16_t vm_id = 0;
};

/// Deterministic (seeded) generators for the three worst-case workload
/// shapes: a sequential pass followed by random re-accesses, local reuse
/// followed by a sequential write flood and a repeat of the first phase, and
/// an identical sequential run repeated every interval.
std::vector<IoRequest> gen_corner_case(CornerCase kind, const CornerParams& params);

}  // namespace eci
