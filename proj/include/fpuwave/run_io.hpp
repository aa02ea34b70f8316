#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fpuwave {

// Scientific notation with 17 significant digits: enough to round-trip any
// double exactly through text.
std::string format_full(double value);

// Compact formatting for file names and labels ("0.1", "2", "1e-05").
std::string format_compact(double value);

// FNV-1a 64-bit hash (exposed so tests can pin the reference vectors).
std::uint64_t fnv1a64(const std::string& text);

// Resolved run configuration echoed into every artifact.  Entries live in a
// sorted map so the serialized form -- and therefore the hash stamped on
// every output file -- is independent of insertion order.
struct Manifest {
  std::map<std::string, std::string> entries;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);

  std::string to_string() const;  // "key=value;key=value;..." in key order
  std::string hash() const;       // 16 hex digits of fnv1a64(to_string())
};

// Numeric table with a manifest stamp.  Layout on disk:
//   # manifest=<hash>
//   col1,col2,...
//   <rows, one value per column, format_full>
//   <optional trailing comment lines starting with '#'>
struct CsvTable {
  std::string manifest_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> footers;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Output directory policy: explicit flag > FPUWAVE_OUT_ROOT environment
// variable > current directory.
std::string resolve_out_root(const std::string& flag_value);

// Least-squares slope of log y against log x; both inputs must be positive.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fpuwave
