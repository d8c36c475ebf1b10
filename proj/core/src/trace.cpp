#include "eci/trace.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace eci {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

template <typename T>
T parse_uint(std::string_view field, const char* what, std::size_t line) {
  field = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw TraceError(std::string("bad ") + what + " '" + std::string(field) + "'", line);
  return value;
}

}  // namespace

void VmMap::add(std::string hostname, int disk, std::uint16_t vm_id) {
  entries_.push_back({std::move(hostname), disk, vm_id});
}

std::optional<std::uint16_t> VmMap::lookup(std::string_view hostname, int disk) const {
  for (const auto& e : entries_) {
    if (e.hostname == hostname && (e.disk == disk || e.disk < 0)) return e.vm_id;
  }
  return std::nullopt;
}

std::optional<std::pair<std::string, int>> VmMap::identity(std::uint16_t vm_id) const {
  for (const auto& e : entries_) {
    if (e.vm_id == vm_id) return std::make_pair(e.hostname, e.disk < 0 ? 0 : e.disk);
  }
  return std::nullopt;
}

std::uint16_t VmMap::max_vm_id() const {
  std::uint16_t m = 0;
  for (const auto& e : entries_) m = std::max(m, e.vm_id);
  return m;
}

std::vector<IoRequest> parse_msr(std::istream& in, std::uint32_t block_size_bytes,
                                 const VmMap& vms, ParseStats* stats) {
  if (block_size_bytes == 0 || (block_size_bytes & (block_size_bytes - 1)) != 0)
    throw std::invalid_argument("block size must be a power of two");

  std::vector<IoRequest> out;
  std::string line;
  std::size_t lineno = 0;
  ParseStats local;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;

    std::array<std::string_view, 7> fields;
    std::size_t nfields = 0;
    while (nfields < fields.size()) {
      auto comma = sv.find(',');
      fields[nfields++] = sv.substr(0, comma);
      if (comma == std::string_view::npos) break;
      sv.remove_prefix(comma + 1);
    }
    if (nfields < 6) throw TraceError("expected 7 comma-separated fields", lineno);

    IoRequest req;
    req.ts = parse_uint<std::uint64_t>(fields[0], "timestamp", lineno);
    std::string_view hostname = trim(fields[1]);
    int disk = static_cast<int>(parse_uint<std::uint32_t>(fields[2], "disk number", lineno));

    std::string_view type = trim(fields[3]);
    if (iequals(type, "Read"))
      req.op = Op::Read;
    else if (iequals(type, "Write"))
      req.op = Op::Write;
    else
      throw TraceError("unknown request type '" + std::string(type) + "'", lineno);

    std::uint64_t offset = parse_uint<std::uint64_t>(fields[4], "offset", lineno);
    std::uint64_t size = parse_uint<std::uint64_t>(fields[5], "size", lineno);
    if (size == 0) {
      ++local.skipped_zero_size;
      continue;
    }

    req.block = offset / block_size_bytes;
    std::uint64_t span = offset % block_size_bytes + size;
    std::uint64_t len = (span + block_size_bytes - 1) / block_size_bytes;
    if (len > std::numeric_limits<std::uint32_t>::max() ||
        req.block > std::numeric_limits<std::uint64_t>::max() - len)
      throw TraceError("request spans past the end of the address space", lineno);
    req.len_blocks = static_cast<std::uint32_t>(len);

    if (vms.empty()) {
      req.vm_id = 0;
    } else if (auto vm = vms.lookup(hostname, disk)) {
      req.vm_id = *vm;
    } else {
      throw TraceError("no VM assignment for host '" + std::string(hostname) + "' disk " +
                           std::to_string(disk),
                       lineno);
    }
    out.push_back(req);
    ++local.records;
  }
  if (stats) *stats = local;
  return out;
}

std::string to_msr_csv(std::span<const IoRequest> reqs, std::uint32_t block_size_bytes,
                       const VmMap& vms) {
  std::ostringstream out;
  for (const auto& r : reqs) {
    std::string host = "vm" + std::to_string(r.vm_id);
    int disk = 0;
    if (auto id = vms.identity(r.vm_id)) {
      host = id->first;
      disk = id->second;
    }
    out << r.ts << ',' << host << ',' << disk << ',' << (r.op == Op::Read ? "Read" : "Write")
        << ',' << r.block * block_size_bytes << ','
        << static_cast<std::uint64_t>(r.len_blocks) * block_size_bytes << ",0\n";
  }
  return out.str();
}

std::vector<IoRequest> expand_multiblock(std::span<const IoRequest> reqs) {
  std::size_t total = 0;
  for (const auto& r : reqs) total += r.len_blocks;
  std::vector<IoRequest> out;
  out.reserve(total);
  for (const auto& r : reqs) {
    for (std::uint32_t i = 0; i < r.len_blocks; ++i) {
      IoRequest unit = r;
      unit.block = r.block + i;
      unit.len_blocks = 1;
      out.push_back(unit);
    }
  }
  return out;
}

namespace {

constexpr char kBinaryMagic[4] = {'E', 'C', 'I', '1'};
constexpr std::size_t kBinaryRecordSize = 2 + 8 + 8 + 1;

void put_le(std::uint64_t v, unsigned bytes, char* dst) {
  for (unsigned i = 0; i < bytes; ++i) dst[i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_le(const char* src, unsigned bytes) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < bytes; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(src[i])) << (8 * i);
  return v;
}

}  // namespace

void write_binary(std::ostream& out, std::span<const IoRequest> reqs) {
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  char rec[kBinaryRecordSize];
  for (const auto& r : reqs) {
    if (r.len_blocks != 1)
      throw std::invalid_argument("binary trace format holds single-block requests only");
    put_le(r.vm_id, 2, rec);
    put_le(r.ts, 8, rec + 2);
    put_le(r.block, 8, rec + 10);
    rec[18] = r.op == Op::Read ? 0 : 1;
    out.write(rec, sizeof(rec));
  }
}

std::vector<IoRequest> read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) || !std::equal(magic, magic + 4, kBinaryMagic))
    throw TraceError("missing ECI1 magic", 1);
  std::vector<IoRequest> out;
  char rec[kBinaryRecordSize];
  while (in.read(rec, sizeof(rec))) {
    IoRequest r;
    r.vm_id = static_cast<std::uint16_t>(get_le(rec, 2));
    r.ts = get_le(rec + 2, 8);
    r.block = get_le(rec + 10, 8);
    std::uint8_t op = static_cast<std::uint8_t>(rec[18]);
    if (op > 1) throw TraceError("bad op byte in record " + std::to_string(out.size()), 1);
    r.op = op == 0 ? Op::Read : Op::Write;
    r.len_blocks = 1;
    out.push_back(r);
  }
  if (in.gcount() != 0) throw TraceError("truncated record at end of binary trace", 1);
  return out;
}

namespace {

class PhaseWriter {
 public:
  PhaseWriter(std::vector<IoRequest>& out, const CornerParams& p) : out_(out), p_(p) {}

  void next_phase() {
    ++phase_;
    count_ = 0;
  }

  void emit(std::uint64_t block, Op op) {
    if (count_ == p_.interval_ts)
      throw std::invalid_argument("interval_ts too small for the requested phase length");
    out_.push_back({p_.vm_id, phase_ * p_.interval_ts + count_, block, op, 1});
    ++count_;
  }

 private:
  std::vector<IoRequest>& out_;
  const CornerParams& p_;
  std::uint64_t phase_ = 0;
  std::uint64_t count_ = 0;
};

}  // namespace

std::vector<IoRequest> gen_corner_case(CornerCase kind, const CornerParams& p) {
  if (p.run_len == 0) throw std::invalid_argument("run_len must be positive");
  std::mt19937_64 rng(p.seed);
  std::vector<IoRequest> out;
  PhaseWriter w(out, p);

  switch (kind) {
    case CornerCase::SeqRandom: {
      // Sequential one-touch pass, then random repetitive reads confined to
      // the head of the same range, then two accesses to the earliest blocks.
      if (p.reuse_set == 0 || p.random_accesses == 0)
        throw std::invalid_argument("reuse_set and random_accesses must be positive");
      for (std::uint32_t i = 0; i < p.run_len; ++i) w.emit(p.base_block + i, Op::Read);
      w.next_phase();
      std::uniform_int_distribution<std::uint32_t> pick(0, std::min(p.reuse_set, p.run_len) - 1);
      for (std::uint32_t i = 0; i < p.random_accesses; ++i)
        w.emit(p.base_block + pick(rng), Op::Read);
      w.next_phase();
      w.emit(p.base_block, Op::Read);
      w.emit(p.base_block + (p.run_len > 1 ? 1 : 0), Op::Read);
      break;
    }
    case CornerCase::RandomSeq: {
      // Two identical passes over a shuffled local set, then a sequential
      // write flood over fresh blocks, then the first pass again.
      if (p.reuse_set == 0) throw std::invalid_argument("reuse_set must be positive");
      std::vector<std::uint64_t> local(p.reuse_set);
      for (std::uint32_t i = 0; i < p.reuse_set; ++i) local[i] = p.base_block + i;
      std::shuffle(local.begin(), local.end(), rng);
      for (int pass = 0; pass < 2; ++pass)
        for (auto b : local) w.emit(b, Op::Read);
      w.next_phase();
      for (std::uint32_t i = 0; i < p.run_len; ++i)
        w.emit(p.base_block + p.reuse_set + i, Op::Write);
      w.next_phase();
      for (auto b : local) w.emit(b, Op::Read);
      break;
    }
    case CornerCase::SemiSequential: {
      if (p.intervals == 0) throw std::invalid_argument("intervals must be positive");
      for (std::uint32_t k = 0; k < p.intervals; ++k) {
        for (std::uint32_t i = 0; i < p.run_len; ++i) w.emit(p.base_block + i, Op::Read);
        if (k + 1 < p.intervals) w.next_phase();
      }
      break;
    }
  }
  return out;
}

}  // namespace eci
