#pragma once

#include <string>
#include <vector>

#include "disklab/field.hpp"

namespace disklab {

// Shortest-exact decimal rendering of a double (round-trips bit-for-bit).
std::string fmt_double(double v);

// RFC 4180: quote a cell if it contains comma, quote or newline.
std::string csv_cell(const std::string& raw);

// Full-lattice dump, header "i,j,x,y,class,v0,..", rows i outer then j.
// Boundary rows keep the lattice coordinates; their values live at x/|x|.
void write_fields_csv(const std::string& path,
                      const std::vector<const ScalarField*>& comps);
void write_field_csv(const std::string& path, const ScalarField& f);
void write_map_csv(const std::string& path, const MapField& u);

// Binary eight-bit grayscale image (written as P6 with r=g=b), one pixel per
// node, linear min-max scaling over non-Exterior nodes, Exterior black.
// Pixel row 0 is the j = n-1 grid line.
void write_field_ppm(const std::string& path, const ScalarField& f);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace disklab
