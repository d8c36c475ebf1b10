#include "eci/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace eci {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64_or_throw(const std::string& v, const std::string& what,
                                 std::size_t line) {
  std::uint64_t out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw TraceError("bad integer for " + what + ": '" + v + "'", line);
  return out;
}

}  // namespace

SidecarConfig SidecarConfig::parse(std::istream& in) {
  SidecarConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw TraceError("expected key = value", lineno);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw TraceError("empty key", lineno);

    if (key.rfind("vm.", 0) == 0) {
      std::uint64_t id = parse_u64_or_throw(key.substr(3), "vm id", lineno);
      auto comma = value.find(',');
      std::string host = trim(value.substr(0, comma));
      int disk = -1;
      if (comma != std::string::npos)
        disk = static_cast<int>(
            parse_u64_or_throw(trim(value.substr(comma + 1)), "disk number", lineno));
      if (host.empty()) throw TraceError("empty hostname in vm assignment", lineno);
      cfg.vms_.add(host, disk, static_cast<std::uint16_t>(id));
    } else if (key == "force_ro") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        cfg.force_ro_.push_back(
            static_cast<std::uint16_t>(parse_u64_or_throw(item, "force_ro vm id", lineno)));
      }
    } else {
      cfg.values_[key] = value;
    }
  }
  return cfg;
}

SidecarConfig SidecarConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse(in);
}

std::optional<std::string> SidecarConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint64_t> SidecarConfig::get_u64(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_u64_or_throw(*v, key, 0);
}

std::optional<double> SidecarConfig::get_double(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  try {
    std::size_t pos = 0;
    double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw TraceError("bad number for " + key + ": '" + *v + "'", 0);
  }
}

}  // namespace eci
