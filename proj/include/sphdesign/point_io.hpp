#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "sphdesign/geometry.hpp"

namespace sphdesign {

/// Malformed point file; carries the 1-based line number when one applies.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line;
};

/// Reads the plain-text point format:
///
///     # sphdesign d=<d> n=<N>      (optional header)
///     x_1 x_2 ... x_{d+1}          (one point per line)
///
/// Other lines starting with '#' and blank lines are ignored. Without a
/// header, d is taken from the column count of the first data row.
PointSet read_points(std::istream& in);
PointSet read_points_file(const std::string& path);

/// Writes the header and one row per point, 17 significant digits, so a
/// read-back reproduces every coordinate bit for bit.
void write_points(std::ostream& out, const PointSet& x);
void write_points_file(const std::string& path, const PointSet& x);

}  // namespace sphdesign
