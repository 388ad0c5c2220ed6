#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace acsheet {

// 17 significant digits: doubles round-trip exactly, so reruns diff clean.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_int(long long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld", v);
  return buf;
}

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// RFC-4180-style: comma separated, \n line ends, quote only when needed.
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace acsheet
