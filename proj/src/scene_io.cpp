#include "imgsim/scene_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "imgsim/errors.hpp"

namespace imgsim {

namespace {

constexpr double kTWidth = 22.5e-3;
constexpr double kTHeight = 27.5e-3;
constexpr double kTStroke = 7.5e-3;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool ends_with(const std::string &s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Whitespace-separated PGM header token, skipping comments.
std::string next_token(const std::string &data, std::size_t &pos) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') {
        ++pos;
      }
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) {
    ++pos;
  }
  return data.substr(start, pos - start);
}

long header_number(const std::string &data, std::size_t &pos, const std::string &path) {
  const std::string tok = next_token(data, pos);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || v <= 0) {
    throw ParseError(path + ": bad PGM header");
  }
  return v;
}

} // namespace

Scene parse_scene_csv(std::string_view text) {
  std::vector<Reflector> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool first_content = true;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = trim(text.substr(pos, nl == text.npos ? text.npos : nl - pos));
    pos = nl == text.npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (first_content && line.starts_with("x_m")) {
      first_content = false;
      continue;
    }
    first_content = false;
    double v[4] = {};
    std::size_t field = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto item = trim(line.substr(start, comma == line.npos ? line.npos : comma - start));
      if (field >= 4) {
        throw ParseError("scene line " + std::to_string(line_no) + ": expected 4 fields");
      }
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v[field]);
      if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() ||
          !std::isfinite(v[field])) {
        throw ParseError("scene line " + std::to_string(line_no) + ": bad number '" +
                         std::string(item) + "'");
      }
      ++field;
      if (comma == line.npos) {
        break;
      }
      start = comma + 1;
    }
    if (field != 4) {
      throw ParseError("scene line " + std::to_string(line_no) + ": expected 4 fields");
    }
    out.push_back({v[0], v[1], {v[2], v[3]}});
  }
  return Scene(std::move(out));
}

Scene load_pgm_scene(const std::string &path) {
  const std::string data = read_file(path);
  std::size_t pos = 0;
  if (next_token(data, pos) != "P5") {
    throw ParseError(path + ": not a binary PGM (P5)");
  }
  const long width = header_number(data, pos, path);
  const long height = header_number(data, pos, path);
  const long maxval = header_number(data, pos, path);
  if (maxval > 65535) {
    throw ParseError(path + ": maxval above 65535");
  }
  ++pos; // single whitespace before the raster
  const std::size_t bytes = maxval > 255 ? 2 : 1;
  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (data.size() < pos + count * bytes) {
    throw ParseError(path + ": truncated raster");
  }

  double pitch = 0.0;
  Position origin;
  bool have_pitch = false;
  std::istringstream geom(read_file(path + ".geom"));
  std::string line;
  while (std::getline(geom, line)) {
    const auto hash = line.find('#');
    const std::string_view body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == body.npos) {
      throw ParseError(path + ".geom: expected key = value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto val = trim(body.substr(eq + 1));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc{} || ptr != val.data() + val.size()) {
      throw ParseError(path + ".geom: bad value for " + std::string(key));
    }
    if (key == "pitch_m") {
      pitch = v;
      have_pitch = true;
    } else if (key == "origin_x_m") {
      origin.x = v;
    } else if (key == "origin_y_m") {
      origin.y = v;
    } else {
      throw ParseError(path + ".geom: unknown key " + std::string(key));
    }
  }
  if (!have_pitch) {
    throw ParseError(path + ".geom: missing pitch_m");
  }

  Raster raster;
  raster.pitch = pitch;
  raster.origin = origin;
  raster.pixels = CMatrix(static_cast<std::size_t>(height), static_cast<std::size_t>(width));
  const auto *raw = reinterpret_cast<const unsigned char *>(data.data() + pos);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned gray = bytes == 2 ? (raw[2 * i] << 8U) | raw[2 * i + 1] : raw[i];
    raster.pixels.flat()[i] = {static_cast<double>(gray) / static_cast<double>(maxval), 0.0};
  }
  return Scene(std::move(raster));
}

Scene load_scene(const std::string &path) {
  if (ends_with(path, ".pgm")) {
    return load_pgm_scene(path);
  }
  return parse_scene_csv(read_file(path));
}

Scene t_target_scene(double wavelength) {
  if (!(wavelength > 0.0)) {
    throw InvalidConfig("wavelength must be positive");
  }
  const double pitch = wavelength / 4.0;
  const auto cols = static_cast<std::size_t>(std::lround(kTWidth / pitch));
  const auto rows = static_cast<std::size_t>(std::lround(kTHeight / pitch));
  Raster raster;
  raster.pitch = pitch;
  raster.origin = {-0.5 * static_cast<double>(cols - 1) * pitch,
                   -0.5 * static_cast<double>(rows - 1) * pitch};
  raster.pixels = CMatrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = raster.origin.y + static_cast<double>(r) * pitch;
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = raster.origin.x + static_cast<double>(c) * pitch;
      const bool bar = y > 0.5 * kTHeight - kTStroke;
      const bool stem = std::abs(x) < 0.5 * kTStroke;
      if (bar || stem) {
        raster.pixels(r, c) = {1.0, 0.0};
      }
    }
  }
  return Scene(std::move(raster));
}

Scene two_point_scene(double separation_m, double centre_x_m) {
  if (!(separation_m > 0.0)) {
    throw InvalidConfig("separation_m must be positive");
  }
  return Scene(std::vector<Reflector>{{centre_x_m - 0.5 * separation_m, 0.0, {1.0, 0.0}},
                                      {centre_x_m + 0.5 * separation_m, 0.0, {1.0, 0.0}}});
}

} // namespace imgsim
