// cleanjoint/io.hpp

// Copyright 2026  cleanjoint authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// CSV matrices and label columns.
//
// A matrix file is comma-separated, one example per line, with an optional
// single header line; the first non-blank line is taken as a header when any
// of its fields is not a number. Blank lines are ignored. Parse errors name
// the 1-based line and column of the offending field. Doubles are written in
// the shortest form that reads back to the same value.

#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cleanjoint/error.hpp"
#include "cleanjoint/matrix.hpp"

namespace cleanjoint {

struct CsvTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  ///< row-major
  std::vector<std::string> header;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_integer(std::string_view s, long long& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string where(const std::string& source, std::size_t line, std::size_t col) {
  return source + ": line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in, const std::string& source = "<input>") {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    std::size_t bad = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!detail::parse_double(fields[c], row[c])) {
        numeric = false;
        bad = c;
        break;
      }
    }
    if (first) {
      first = false;
      if (!numeric) {
        for (auto f : fields) t.header.emplace_back(f);
        t.cols = fields.size();
        continue;
      }
    }
    if (!numeric)
      detail::fail(ErrorKind::Parse, detail::where(source, lineno, bad + 1) + ": '" + std::string(fields[bad]) +
                                         "' is not a number");
    if (t.cols == 0) t.cols = fields.size();
    if (fields.size() != t.cols)
      detail::fail(ErrorKind::Parse, detail::where(source, lineno, std::min(fields.size(), t.cols) + 1) + ": expected " +
                                         std::to_string(t.cols) + " fields, found " + std::to_string(fields.size()));
    t.values.insert(t.values.end(), row.begin(), row.end());
    ++t.rows;
  }
  if (in.bad()) detail::fail(ErrorKind::Io, "read failed for " + source);
  return t;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail(ErrorKind::Io, "cannot open " + path);
  return in;
}

inline CsvTable read_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_csv(in, path);
}

/// Single integer column. A non-numeric first line is a header.
inline std::vector<long long> read_labels(std::istream& in, const std::string& source = "<input>") {
  std::vector<long long> out;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = detail::trim(line);
    if (s.empty()) continue;
    const auto fields = detail::split_fields(s);
    long long v = 0;
    const bool ok = fields.size() == 1 && detail::parse_integer(fields[0], v);
    if (first) {
      first = false;
      double d = 0.0;
      if (!ok && fields.size() == 1 && !detail::parse_double(fields[0], d)) continue;
    }
    if (fields.size() != 1)
      detail::fail(ErrorKind::Parse, detail::where(source, lineno, 2) + ": label files have a single column");
    if (!ok)
      detail::fail(ErrorKind::Parse, detail::where(source, lineno, 1) + ": '" + std::string(fields[0]) +
                                         "' is not an integer label");
    out.push_back(v);
  }
  if (in.bad()) detail::fail(ErrorKind::Io, "read failed for " + source);
  return out;
}

inline std::vector<long long> read_labels_file(const std::string& path) {
  auto in = open_input(path);
  return read_labels(in, path);
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) detail::fail(ErrorKind::Internal, "cannot format double");
  return std::string(buf, ptr);
}

inline void write_csv(std::ostream& out, std::size_t rows, std::size_t cols, std::span<const double> values,
                      std::span<const std::string> header = {}) {
  if (values.size() != rows * cols) detail::fail(ErrorKind::DimensionMismatch, "value count does not match the shape");
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  if (!header.empty()) out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out << (c ? "," : "") << format_double(values[r * cols + c]);
    out << '\n';
  }
}

template <class T>
void write_csv(std::ostream& out, const Dense<T>& a) {
  std::vector<double> v(a.data().begin(), a.data().end());
  write_csv(out, a.rows(), a.cols(), v);
}

template <class Int>
void write_labels(std::ostream& out, std::span<const Int> labels) {
  for (Int y : labels) out << y << '\n';
}

/// Writes `text` to `path`, failing with Io on any error.
inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) detail::fail(ErrorKind::Io, "cannot open " + path + " for writing");
  f << text;
  f.close();
  if (!f) detail::fail(ErrorKind::Io, "write failed for " + path);
}

inline std::string read_file(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// 64-bit FNV-1a digest, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return s;
}

}  // namespace cleanjoint
