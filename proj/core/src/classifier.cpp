#include "eci/classifier.hpp"

#include <stdexcept>

namespace eci {

const char* to_string(AccessClass cls) {
  switch (cls) {
    case AccessClass::CR: return "CR";
    case AccessClass::CW: return "CW";
    case AccessClass::RAR: return "RAR";
    case AccessClass::RAW: return "RAW";
    case AccessClass::WAR: return "WAR";
    case AccessClass::WAW: return "WAW";
  }
  return "?";
}

std::uint64_t ClassCounts::count(AccessClass cls) const {
  switch (cls) {
    case AccessClass::CR: return cr;
    case AccessClass::CW: return cw;
    case AccessClass::RAR: return rar;
    case AccessClass::RAW: return raw;
    case AccessClass::WAR: return war;
    case AccessClass::WAW: return waw;
  }
  return 0;
}

void ClassCounts::add(AccessClass cls) {
  switch (cls) {
    case AccessClass::CR: ++cr; break;
    case AccessClass::CW: ++cw; break;
    case AccessClass::RAR: ++rar; break;
    case AccessClass::RAW: ++raw; break;
    case AccessClass::WAR: ++war; break;
    case AccessClass::WAW: ++waw; break;
  }
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
  cr += o.cr;
  cw += o.cw;
  rar += o.rar;
  raw += o.raw;
  war += o.war;
  waw += o.waw;
  return *this;
}

AccessClass Classifier::classify(const IoRequest& req) {
  if (req.len_blocks != 1)
    throw std::invalid_argument("classifier takes single-block requests; expand first");

  auto [it, cold] = last_op_.try_emplace(req.block, req.op);
  if (cold) return req.op == Op::Read ? AccessClass::CR : AccessClass::CW;

  Op prev = it->second;
  it->second = req.op;
  if (req.op == Op::Read)
    return prev == Op::Read ? AccessClass::RAR : AccessClass::RAW;
  return prev == Op::Read ? AccessClass::WAR : AccessClass::WAW;
}

std::vector<ClassifiedRequest> Classifier::classify(std::span<const IoRequest> reqs,
                                                    ClassCounts* counts) {
  std::vector<ClassifiedRequest> out;
  out.reserve(reqs.size());
  for (const auto& r : reqs) {
    AccessClass cls = classify(r);
    if (counts) counts->add(cls);
    out.push_back({r, cls});
  }
  return out;
}

double write_ratio(const ClassCounts& counts) {
  std::uint64_t total = counts.total();
  if (total == 0) throw std::invalid_argument("write_ratio undefined for empty counts");
  return static_cast<double>(counts.waw + counts.war) / static_cast<double>(total);
}

}  // namespace eci
