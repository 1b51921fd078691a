#pragma once

#include <string>
#include <vector>

#include "imgsim/forward_sim.hpp"
#include "imgsim/reconstruction.hpp"

namespace imgsim {

// <prefix>.csv: header "rows,cols,pitch_x_m,pitch_y_m,origin_x_m,origin_y_m",
// one metadata line, then "re,im" per pixel in row-major order.
// <prefix>.pgm: P5, 8 bit, |pixel| scaled so the peak maps to 255, rounded
// half up. An all-zero image writes all zeros. Returns the two paths.
std::vector<std::string> write_image(const Image &image, const std::string &prefix);

[[nodiscard]] std::string image_csv(const Image &image);
[[nodiscard]] std::string image_pgm(const Image &image);

// Header "kind,rows,cols,axis_start,axis_step", a metadata line, then
// "re,im" rows.
[[nodiscard]] std::string echo_csv(const EchoData &echo);
[[nodiscard]] EchoData parse_echo_csv(const std::string &text);
[[nodiscard]] EchoData load_echo(const std::string &path);

// Writes bytes exactly; throws IoError on failure.
void write_file(const std::string &path, const std::string &contents);

// Lowercase hex SHA-256.
[[nodiscard]] std::string sha256_hex(const std::string &bytes);
[[nodiscard]] std::string sha256_file(const std::string &path);

} // namespace imgsim
