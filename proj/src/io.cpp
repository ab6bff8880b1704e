#include "radial/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace radial {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

double parse_double(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError("empty numeric field", line);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw ParseError("bad numeric field '" + t + "'", line);
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ParseError("bad integer field '" + t + "'", line);
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KvConfig KvConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str());
}

KvConfig KvConfig::from_string(const std::string& text) {
  KvConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", lineno);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (cfg.values_.count(key) != 0) {
      throw ParseError("duplicate key '" + key + "'", lineno);
    }
    cfg.set(key, value);
  }
  return cfg;
}

bool KvConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

void KvConfig::set(const std::string& key, const std::string& value) {
  if (values_.count(key) == 0) order_.push_back(key);
  values_[key] = value;
}

void KvConfig::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

void KvConfig::set_u64(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

std::string KvConfig::get_string(const std::string& key,
                                 const std::string& fallback) const {
  read_[key] = true;
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string KvConfig::require_string(const std::string& key) const {
  read_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  read_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_double(it->second, 0);
  } catch (const ParseError&) {
    throw ConfigError("config key '" + key + "' is not a number: '" +
                      it->second + "'");
  }
}

std::uint64_t KvConfig::get_u64(const std::string& key,
                                std::uint64_t fallback) const {
  read_[key] = true;
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_u64(it->second, 0);
  } catch (const ParseError&) {
    throw ConfigError("config key '" + key + "' is not an integer: '" +
                      it->second + "'");
  }
}

std::vector<double> KvConfig::get_double_list(const std::string& key) const {
  read_[key] = true;
  const auto it = values_.find(key);
  std::vector<double> out;
  if (it == values_.end()) return out;
  for (const std::string& part : split(it->second, ',')) {
    if (trim(part).empty()) continue;
    try {
      out.push_back(parse_double(part, 0));
    } catch (const ParseError&) {
      throw ConfigError("config key '" + key + "' has a bad entry: '" + part +
                        "'");
    }
  }
  return out;
}

std::vector<std::uint64_t> KvConfig::get_u64_list(
    const std::string& key) const {
  read_[key] = true;
  const auto it = values_.find(key);
  std::vector<std::uint64_t> out;
  if (it == values_.end()) return out;
  for (const std::string& part : split(it->second, ',')) {
    if (trim(part).empty()) continue;
    try {
      out.push_back(parse_u64(part, 0));
    } catch (const ParseError&) {
      throw ConfigError("config key '" + key + "' has a bad entry: '" + part +
                        "'");
    }
  }
  return out;
}

std::vector<std::string> KvConfig::unread_keys() const {
  std::vector<std::string> out;
  for (const std::string& key : order_) {
    const auto it = read_.find(key);
    if (it == read_.end() || !it->second) out.push_back(key);
  }
  return out;
}

std::vector<std::string> KvConfig::lines() const {
  std::vector<std::string> out;
  out.reserve(order_.size());
  for (const std::string& key : order_) {
    out.push_back(key + " = " + values_.at(key));
  }
  return out;
}

void write_sample_set_csv(const std::string& path, const SampleSet& z,
                          const std::vector<std::string>& comment_lines) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const std::string& line : comment_lines) out << "# " << line << "\n";
  for (std::size_t j = 0; j < z.dim; ++j) {
    out << (j == 0 ? "" : ",") << "x" << j;
  }
  out << "\n";
  for (std::size_t i = 0; i < z.count; ++i) {
    for (std::size_t j = 0; j < z.dim; ++j) {
      out << (j == 0 ? "" : ",") << format_double(z(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

SampleSet read_sample_set_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  bool header_seen = false;
  std::vector<double> data;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    const std::vector<std::string> fields = split(line, ',');
    if (!header_seen) {
      dim = fields.size();
      for (std::size_t j = 0; j < dim; ++j) {
        if (trim(fields[j]) != "x" + std::to_string(j)) {
          throw ParseError("expected header x0,...,x" + std::to_string(dim - 1),
                           lineno);
        }
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != dim) {
      throw ParseError("expected " + std::to_string(dim) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    for (const std::string& f : fields) data.push_back(parse_double(f, lineno));
  }
  if (!header_seen) throw ParseError("missing header row", lineno + 1);
  if (data.empty()) throw ParseError("no data rows", lineno + 1);
  SampleSet z;
  z.dim = dim;
  z.count = data.size() / dim;
  z.points = std::move(data);
  return z;
}

void write_table_csv(const std::string& path,
                     const std::vector<std::string>& comment_lines,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const std::string& line : comment_lines) out << "# " << line << "\n";
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out << (j == 0 ? "" : ",") << columns[j];
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw IoError("write_table_csv: row width mismatch");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j == 0 ? "" : ",") << format_double(row[j]);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_string_table_csv(const std::string& path,
                            const std::vector<std::string>& comment_lines,
                            const std::vector<std::string>& columns,
                            const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const std::string& line : comment_lines) out << "# " << line << "\n";
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out << (j == 0 ? "" : ",") << columns[j];
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw IoError("write_string_table_csv: row width mismatch");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j == 0 ? "" : ",") << row[j];
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return j;
  }
  throw IoError("csv table: no column named " + name);
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split(line, ',');
    if (!header_seen) {
      table.columns = std::move(fields);
      header_seen = true;
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw ParseError("field count mismatch", lineno);
    }
    table.rows.push_back(std::move(fields));
  }
  if (!header_seen) throw ParseError("missing header row", lineno + 1);
  return table;
}

}  // namespace radial
