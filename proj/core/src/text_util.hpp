#pragma once

// Internal CSV / key-value parsing and number formatting helpers.

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace pitplan::detail {

/// Shortest round-trip decimal representation (no locale, no thousands
/// separators); parsing it back yields the identical double.
inline std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

[[noreturn]] inline void parse_fail(const std::string& path, size_t line_no, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
}

inline double to_double(std::string_view field, const std::string& path, size_t line_no, const char* col) {
  double v{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    parse_fail(path, line_no, std::string("cannot parse '") + std::string(field) + "' as number for " + col);
  if (!(v == v) || v > 1.7e308 || v < -1.7e308)
    parse_fail(path, line_no, std::string("non-finite value for ") + col);
  return v;
}

inline long to_long(std::string_view field, const std::string& path, size_t line_no, const char* col) {
  long v{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    parse_fail(path, line_no, std::string("cannot parse '") + std::string(field) + "' as integer for " + col);
  return v;
}

/// Line reader that tracks line numbers, skips blank lines and '#' comments,
/// and surfaces leading '#' metadata lines to the caller on request.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw std::runtime_error("cannot open " + path);
  }

  /// Next non-blank, non-comment line; false at EOF.
  bool next(std::string& out) {
    while (std::getline(in_, raw_)) {
      ++line_no_;
      std::string_view t = trim(raw_);
      if (t.empty() || t.front() == '#') continue;
      out.assign(t);
      return true;
    }
    return false;
  }

  /// Next line of any kind (only blank lines skipped); used to scan metadata.
  bool next_raw(std::string& out) {
    while (std::getline(in_, raw_)) {
      ++line_no_;
      std::string_view t = trim(raw_);
      if (t.empty()) continue;
      out.assign(t);
      return true;
    }
    return false;
  }

  size_t line_no() const { return line_no_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::string raw_;
  size_t line_no_ = 0;
};

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace pitplan::detail
