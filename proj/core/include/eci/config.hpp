#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "eci/trace.hpp"

namespace eci {

/// Key-value sidecar configuration: one `key = value` per line, `#` starts a
/// comment. VM assignments use `vm.<id> = <hostname>[,<disknumber>]`; a
/// missing disk number matches every disk of that host. `force_ro` is a
/// comma-separated list of VM ids.
class SidecarConfig {
 public:
  static SidecarConfig parse(std::istream& in);
  static SidecarConfig load(const std::string& path);

  std::optional<std::string> get(const std::string& key) const;
  std::optional<std::uint64_t> get_u64(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;

  const VmMap& vm_map() const { return vms_; }
  const std::vector<std::uint16_t>& force_ro() const { return force_ro_; }

 private:
  std::map<std::string, std::string> values_;
  VmMap vms_;
  std::vector<std::uint16_t> force_ro_;
};

}  // namespace eci
