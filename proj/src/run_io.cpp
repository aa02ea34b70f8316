#include "fpuwave/run_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpuwave {

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

std::string format_compact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void Manifest::set(const std::string& key, const std::string& value) {
  entries[key] = value;
}

void Manifest::set(const std::string& key, double value) {
  entries[key] = format_full(value);
}

void Manifest::set(const std::string& key, long value) {
  entries[key] = std::to_string(value);
}

std::string Manifest::to_string() const {
  std::string out;
  for (const auto& [key, value] : entries) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    out += value;
  }
  return out;
}

std::string Manifest::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_string())));
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("write_csv: cannot open " + path);
  }
  out << "# manifest=" << table.manifest_hash << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("write_csv: row width differs from header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_full(row[c]);
    }
    out << '\n';
  }
  for (const auto& line : table.footers) out << line << '\n';
  if (!out.good()) throw std::runtime_error("write_csv: write failed for " + path);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("read_csv: cannot open " + path);
  }
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# manifest=", 0) != 0) {
    throw std::runtime_error("read_csv: missing manifest line in " + path);
  }
  table.manifest_hash = line.substr(std::string("# manifest=").size());
  if (!std::getline(in, line) || line.empty() || line.front() == '#') {
    throw std::runtime_error("read_csv: missing header row in " + path);
  }
  table.columns = split_fields(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.footers.push_back(line);
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != table.columns.size()) {
      throw std::runtime_error("read_csv: row width differs from header in " +
                               path);
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      try {
        std::size_t used = 0;
        row[c] = std::stod(fields[c], &used);
        if (used != fields[c].size()) throw std::invalid_argument(fields[c]);
      } catch (const std::exception&) {
        throw std::runtime_error("read_csv: bad numeric field '" + fields[c] +
                                 "' in " + path);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string resolve_out_root(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv("FPUWAVE_OUT_ROOT");
  if (env != nullptr && env[0] != '\0') return env;
  return ".";
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::domain_error("loglog_slope: need matching samples, at least 2");
  }
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::domain_error("loglog_slope: samples must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) {
    throw std::domain_error("loglog_slope: abscissae are all equal");
  }
  return (n * sxy - sx * sy) / denom;
}

}  // namespace fpuwave
