#pragma once

#include <string>
#include <string_view>

#include "imgsim/core_model.hpp"

namespace imgsim {

// "x_m,y_m,amp_re,amp_im" rows. Blank lines and '#' lines are skipped, as is
// a leading header row starting with "x_m". Malformed rows raise ParseError
// with the line number.
[[nodiscard]] Scene parse_scene_csv(std::string_view text);

// Binary PGM (P5, 8 or 16 bit). Amplitude is gray / maxval; row 0 is the
// lowest y. Geometry comes from a sidecar "<path>.geom" holding
// pitch_m, origin_x_m and origin_y_m as key = value lines.
[[nodiscard]] Scene load_pgm_scene(const std::string &path);

// ".pgm" paths load as rasters, anything else as CSV.
[[nodiscard]] Scene load_scene(const std::string &path);

// 22.5 mm wide, 27.5 mm tall T with a 7.5 mm stroke, rasterized at
// wavelength / 4 with its bounding box centred on the origin. Crossbar on top.
[[nodiscard]] Scene t_target_scene(double wavelength);

// Two unit reflectors at (centre_x -+ separation / 2, 0).
[[nodiscard]] Scene two_point_scene(double separation_m, double centre_x_m = 0.0);

} // namespace imgsim
