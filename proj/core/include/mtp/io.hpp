#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mtp/geometry.hpp"
#include "mtp/solver.hpp"

namespace mtp {

/// Domain as a JSON arc list (kind, class, parameters, t-range).
std::string domain_to_json(const Domain& dom);
Domain domain_from_json(const std::string& text, int polygon_resolution = 4096);

/// Polygonization CSV: x,y,arc_id,class with LF line endings.
void write_polygon_csv(std::ostream& os, const Domain& dom);

/// Field CSV: header x,y,value; one row per masked node, row-major.
void write_field_csv(std::ostream& os, const Grid& grid, std::span<const double> lattice);
/// Reads a field CSV back onto the grid's lattice (nodes matched within h/2;
/// unmatched rows are an error).
std::vector<double> read_field_csv(std::istream& is, const Grid& grid);

/// Doubles formatted with 17 significant digits (round-trip exact).
std::string format_double_17(double v);

}  // namespace mtp
