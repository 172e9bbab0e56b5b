#ifndef SYSID_NUMFMT_HPP
#define SYSID_NUMFMT_HPP

#include <cstdio>
#include <string>

namespace sysid {

// 17 significant digits: doubles round-trip losslessly through the reports.
inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace sysid

#endif
