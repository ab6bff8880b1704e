#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "radial/common.hpp"

namespace radial {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Flat `key = value` config file with dotted keys. `#` starts a comment;
/// blank lines are ignored. Keys are unique.
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig from_file(const std::string& path);
  static KvConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_u64(const std::string& key, std::uint64_t value);

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::uint64_t> get_u64_list(const std::string& key) const;

  /// Keys never read through a getter; used to flag typos in spec files.
  std::vector<std::string> unread_keys() const;

  /// Serialized `key = value` lines in insertion order.
  std::vector<std::string> lines() const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> read_;
};

/// Writes a sample set as CSV: optional `# `-prefixed header comment lines,
/// a mandatory `x0,...,x{d-1}` header row, then one row per sample at full
/// double precision.
void write_sample_set_csv(const std::string& path, const SampleSet& z,
                          const std::vector<std::string>& comment_lines);

/// Reads the format written above; `#` lines are skipped. Throws ParseError
/// with the offending line number on malformed input.
SampleSet read_sample_set_csv(const std::string& path);

/// Generic numeric-table writer sharing the same comment-header convention.
void write_table_csv(const std::string& path,
                     const std::vector<std::string>& comment_lines,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

/// As write_table_csv but with free-form string cells.
void write_string_table_csv(const std::string& path,
                            const std::vector<std::string>& comment_lines,
                            const std::vector<std::string>& columns,
                            const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;
};

/// Reads a comment-header CSV back into string cells.
CsvTable read_csv_table(const std::string& path);

}  // namespace radial
