#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hvconic/grid_geometry.hpp"
#include "hvconic/metrics.hpp"
#include "hvconic/xray_conic.hpp"

namespace hvconic {

// Text formats. Everything here is plain text so other tools can consume the
// outputs without a binary reader.
//
// HVSET v1
//   HVSET v1
//   box <a> <b> <c> <d>
//   dims <m> <n>
//   n rows of m '0'/'1' characters, highest row first; trailing newline.
//
// POLYLINE v1
//   POLYLINE v1
//   closed 0|1
//   one "x y" pair per line.

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string write_hvset(const GridSet& set);
/// Throws ParseError with a 1-based line number.
GridSet parse_hvset(std::string_view text);

std::string write_polyline(const Polyline& chain);
Polyline parse_polyline(std::string_view text);

/// "t_lo,t_hi,value" header followed by one row per interval.
std::string write_profile_csv(const XRayProfile& profile);
XRayProfile parse_profile_csv(std::string_view text, SectionAxis axis);

/// "x,y,f" rows on a px x py lattice spanning the box (corners included).
std::string write_field_csv(const ConicEvaluator& conic, const Box& box, int px, int py);

/// 16-bit ASCII PGM (P2) of the sampled field, min-max normalized, highest
/// y in the first row. One-way export for viewing.
std::string write_field_pgm(const ConicEvaluator& conic, const Box& box, int px, int py);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace hvconic
