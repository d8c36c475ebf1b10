#include "eci/rdist.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace eci {

std::uint64_t ReuseProfile::trd_samples() const {
  std::uint64_t n = 0;
  for (const auto& [d, c] : trd_hist) n += c;
  return n;
}

std::uint64_t ReuseProfile::urd_samples() const {
  std::uint64_t n = 0;
  for (const auto& [d, c] : urd_hist) n += c;
  return n;
}

namespace {

// Fenwick tree counting marked positions; position i is marked while it is
// the most recent access of some block.
class MarkCount {
 public:
  explicit MarkCount(std::size_t n) : tree_(n + 1, 0) {}

  void set(std::size_t i, int delta) {
    for (std::size_t x = i + 1; x < tree_.size(); x += x & (~x + 1)) tree_[x] += delta;
  }

  // marks in [0, i]
  std::uint64_t prefix(std::size_t i) const {
    std::uint64_t s = 0;
    for (std::size_t x = i + 1; x > 0; x -= x & (~x + 1)) s += tree_[x];
    return s;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

}  // namespace

ReuseProfile stack_distance(std::span<const ClassifiedRequest> stream) {
  ReuseProfile profile;
  profile.total_accesses = stream.size();
  if (stream.empty()) return profile;

  MarkCount marks(stream.size());
  std::unordered_map<std::uint64_t, std::size_t> last_pos;
  last_pos.reserve(stream.size());
  const std::uint16_t vm = stream.front().req.vm_id;

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& cr = stream[i];
    if (cr.req.len_blocks != 1)
      throw std::invalid_argument("stack_distance takes single-block requests; expand first");
    if (cr.req.vm_id != vm)
      throw std::invalid_argument("stack_distance takes a single-VM stream");

    auto [it, cold] = last_pos.try_emplace(cr.req.block, i);
    if (!cold) {
      std::size_t prev = it->second;
      // Distinct blocks strictly between the pair = marked positions in
      // (prev, i); prev itself is this block's mark, so subtract its prefix.
      std::uint64_t dist = marks.prefix(i == 0 ? 0 : i - 1) - marks.prefix(prev);
      profile.trd_hist[dist] += 1;
      profile.max_trd = std::max(profile.max_trd, static_cast<std::int64_t>(dist));
      if (cr.cls == AccessClass::RAR || cr.cls == AccessClass::RAW) {
        profile.urd_hist[dist] += 1;
        profile.max_urd = std::max(profile.max_urd, static_cast<std::int64_t>(dist));
      }
      marks.set(prev, -1);
      it->second = i;
    }
    marks.set(i, +1);
  }
  return profile;
}

double HitRatioFn::operator()(std::uint64_t c) const {
  // Last breakpoint <= c gives the step value.
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), c);
  if (it == breakpoints.begin()) return 0.0;
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

HitRatioFn hit_ratio_fn(const ReuseProfile& profile, DistanceMode mode) {
  HitRatioFn fn;
  if (profile.total_accesses == 0) return fn;
  const auto& hist = profile.hist(mode);
  std::uint64_t cumulative = 0;
  for (const auto& [dist, count] : hist) {
    cumulative += count;
    fn.breakpoints.push_back(dist + 1);
    fn.values.push_back(static_cast<double>(cumulative) /
                        static_cast<double>(profile.total_accesses));
  }
  return fn;
}

std::uint64_t urd_based_size(const ReuseProfile& profile) {
  return static_cast<std::uint64_t>(profile.max_urd + 1);
}

std::uint64_t trd_based_size(const ReuseProfile& profile) {
  return static_cast<std::uint64_t>(profile.max_trd + 1);
}

}  // namespace eci
