#include "hvconic/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace hvconic {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

// Splits into lines; the last line must be newline-terminated.
std::vector<std::string_view> split_lines(std::string_view text, bool require_trailing_newline) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      if (require_trailing_newline) parse_error(lines.size() + 1, "missing trailing newline");
      lines.push_back(text.substr(pos));
      break;
    }
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_tokens(std::string_view line, char sep = ' ') {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    if (sep == ' ') {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      out.push_back(line.substr(pos, end - pos));
      pos = end;
    } else {
      const std::size_t end = std::min(line.find(sep, pos), line.size());
      out.push_back(line.substr(pos, end - pos));
      pos = end + 1;
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    parse_error(line, "expected a real number, got '" + std::string(token) + "'");
  }
  return value;
}

int parse_int(std::string_view token, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    parse_error(line, "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// HVSET

std::string write_hvset(const GridSet& set) {
  const auto& g = set.geometry();
  const auto& b = g.box();
  std::string out = "HVSET v1\n";
  out += "box " + format_double(b.a()) + " " + format_double(b.b()) + " " +
         format_double(b.c()) + " " + format_double(b.d()) + "\n";
  out += "dims " + std::to_string(g.m()) + " " + std::to_string(g.n()) + "\n";
  for (int j = g.n() - 1; j >= 0; --j) {
    for (int i = 0; i < g.m(); ++i) out += set.contains(i, j) ? '1' : '0';
    out += '\n';
  }
  return out;
}

GridSet parse_hvset(std::string_view text) {
  const auto lines = split_lines(text, true);
  if (lines.empty() || trim(lines[0]) != "HVSET v1") parse_error(1, "expected 'HVSET v1'");
  if (lines.size() < 2) parse_error(2, "missing box line");
  const auto box_tokens = split_tokens(lines[1]);
  if (box_tokens.size() != 5 || box_tokens[0] != "box") {
    parse_error(2, "expected 'box <a> <b> <c> <d>'");
  }
  const double a = parse_real(box_tokens[1], 2), b = parse_real(box_tokens[2], 2);
  const double c = parse_real(box_tokens[3], 2), d = parse_real(box_tokens[4], 2);
  if (!(a < b) || !(c < d)) parse_error(2, "box must satisfy a < b and c < d");
  if (lines.size() < 3) parse_error(3, "missing dims line");
  const auto dim_tokens = split_tokens(lines[2]);
  if (dim_tokens.size() != 3 || dim_tokens[0] != "dims") parse_error(3, "expected 'dims <m> <n>'");
  const int m = parse_int(dim_tokens[1], 3), n = parse_int(dim_tokens[2], 3);
  if (m < 1 || n < 1) parse_error(3, "dims must be positive");

  const GridGeometry geometry(Box(a, b, c, d), m, n);
  std::vector<std::uint8_t> cells(geometry.cell_count(), 0);
  const std::size_t expected = 3 + static_cast<std::size_t>(n);
  for (std::size_t k = 3; k < lines.size(); ++k) {
    if (k >= expected) parse_error(k + 1, "more rows than dims declares");
    const auto row = lines[k];
    if (row.size() != static_cast<std::size_t>(m)) {
      parse_error(k + 1, "expected " + std::to_string(m) + " cells, got " +
                             std::to_string(row.size()));
    }
    const int j = n - 1 - static_cast<int>(k - 3);
    for (int i = 0; i < m; ++i) {
      if (row[i] != '0' && row[i] != '1') parse_error(k + 1, "cells must be '0' or '1'");
      cells[static_cast<std::size_t>(j) * m + i] = row[i] == '1';
    }
  }
  if (lines.size() < expected) {
    parse_error(lines.size() + 1, "expected " + std::to_string(n) + " rows, got " +
                                      std::to_string(lines.size() - 3));
  }
  GridSet set(geometry, std::move(cells));
  if (set.empty()) parse_error(expected, "set has no occupied cell");
  return set;
}

// ---------------------------------------------------------------------------
// POLYLINE

std::string write_polyline(const Polyline& chain) {
  std::string out = "POLYLINE v1\n";
  out += chain.closed() ? "closed 1\n" : "closed 0\n";
  for (const auto& v : chain.vertices()) {
    out += format_double(v.x) + " " + format_double(v.y) + "\n";
  }
  return out;
}

Polyline parse_polyline(std::string_view text) {
  const auto lines = split_lines(text, false);
  if (lines.empty() || trim(lines[0]) != "POLYLINE v1") parse_error(1, "expected 'POLYLINE v1'");
  if (lines.size() < 2) parse_error(2, "missing closed line");
  const auto closed_tokens = split_tokens(lines[1]);
  if (closed_tokens.size() != 2 || closed_tokens[0] != "closed" ||
      (closed_tokens[1] != "0" && closed_tokens[1] != "1")) {
    parse_error(2, "expected 'closed 0' or 'closed 1'");
  }
  std::vector<Point> vertices;
  for (std::size_t k = 2; k < lines.size(); ++k) {
    if (trim(lines[k]).empty()) continue;
    const auto tokens = split_tokens(lines[k]);
    if (tokens.size() != 2) parse_error(k + 1, "expected 'x y'");
    vertices.push_back({parse_real(tokens[0], k + 1), parse_real(tokens[1], k + 1)});
  }
  try {
    return Polyline(std::move(vertices), closed_tokens[1] == "1");
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("polyline: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV / PGM

std::string write_profile_csv(const XRayProfile& profile) {
  std::string out = "t_lo,t_hi,value\n";
  const auto& t = profile.breakpoints();
  const auto& v = profile.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    out += format_double(t[k]) + "," + format_double(t[k + 1]) + "," + format_double(v[k]) + "\n";
  }
  return out;
}

XRayProfile parse_profile_csv(std::string_view text, SectionAxis axis) {
  const auto lines = split_lines(text, false);
  std::vector<double> breakpoints, values;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto line = trim(lines[k]);
    if (line.empty()) continue;
    if (k == 0 && line == "t_lo,t_hi,value") continue;
    const auto cols = split_tokens(line, ',');
    if (cols.size() != 3) parse_error(k + 1, "expected 't_lo,t_hi,value'");
    const double lo = parse_real(cols[0], k + 1);
    const double hi = parse_real(cols[1], k + 1);
    const double value = parse_real(cols[2], k + 1);
    if (!(lo < hi)) parse_error(k + 1, "interval must satisfy t_lo < t_hi");
    if (value < 0.0) parse_error(k + 1, "profile values must be >= 0");
    if (breakpoints.empty()) {
      breakpoints.push_back(lo);
    } else if (breakpoints.back() != lo) {
      parse_error(k + 1, "intervals must be contiguous");
    }
    breakpoints.push_back(hi);
    values.push_back(value);
  }
  if (values.empty()) parse_error(1, "profile has no intervals");
  return XRayProfile(axis, std::move(breakpoints), std::move(values));
}

namespace {

double lattice(double lo, double hi, int count, int k) {
  if (count == 1) return 0.5 * (lo + hi);
  if (k == count - 1) return hi;
  return lo + (hi - lo) * k / (count - 1);
}

void check_samples(int px, int py) {
  if (px < 1 || py < 1) throw Error(ErrorCode::InvalidParameter, "sample counts must be >= 1");
}

}  // namespace

std::string write_field_csv(const ConicEvaluator& conic, const Box& box, int px, int py) {
  check_samples(px, py);
  std::string out = "x,y,f\n";
  for (int j = 0; j < py; ++j) {
    const double y = lattice(box.c(), box.d(), py, j);
    for (int i = 0; i < px; ++i) {
      const double x = lattice(box.a(), box.b(), px, i);
      out += format_double(x) + "," + format_double(y) + "," + format_double(eval(conic, x, y)) +
             "\n";
    }
  }
  return out;
}

std::string write_field_pgm(const ConicEvaluator& conic, const Box& box, int px, int py) {
  check_samples(px, py);
  std::vector<double> field(static_cast<std::size_t>(px) * py);
  for (int j = 0; j < py; ++j)
    for (int i = 0; i < px; ++i)
      field[static_cast<std::size_t>(j) * px + i] =
          eval(conic, lattice(box.a(), box.b(), px, i), lattice(box.c(), box.d(), py, j));
  const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
  const double span = *hi - *lo;
  std::ostringstream out;
  out << "P2\n" << px << " " << py << "\n65535\n";
  for (int j = py - 1; j >= 0; --j) {
    for (int i = 0; i < px; ++i) {
      const double v = field[static_cast<std::size_t>(j) * px + i];
      const long level = span > 0.0 ? std::lround((v - *lo) / span * 65535.0) : 0;
      out << level << (i + 1 == px ? '\n' : ' ');
    }
  }
  return out.str();
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[k] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace hvconic
