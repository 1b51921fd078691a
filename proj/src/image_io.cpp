#include "imgsim/image_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "imgsim/config.hpp"
#include "imgsim/errors.hpp"

namespace imgsim {

namespace {

void append_samples(std::string &out, const CMatrix &m) {
  for (const auto &v : m.flat()) {
    out += format_double(v.real());
    out += ',';
    out += format_double(v.imag());
    out += '\n';
  }
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty() && item.back() == '\r') {
      item.pop_back();
    }
    out.push_back(item);
  }
  return out;
}

double parse_number(const std::string &s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception &) {
    throw ParseError("echo line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

} // namespace

std::string image_csv(const Image &image) {
  std::string out = "rows,cols,pitch_x_m,pitch_y_m,origin_x_m,origin_y_m\n";
  out += std::to_string(image.pixels.rows()) + ',' + std::to_string(image.pixels.cols()) + ',' +
         format_double(image.pitch_x) + ',' + format_double(image.pitch_y) + ',' +
         format_double(image.origin.x) + ',' + format_double(image.origin.y) + '\n';
  append_samples(out, image.pixels);
  return out;
}

std::string image_pgm(const Image &image) {
  const auto rows = image.pixels.rows();
  const auto cols = image.pixels.cols();
  double peak = 0.0;
  for (const auto &v : image.pixels.flat()) {
    peak = std::max(peak, std::abs(v));
  }
  std::string out = "P5\n" + std::to_string(cols) + ' ' + std::to_string(rows) + "\n255\n";
  out.reserve(out.size() + rows * cols);
  for (const auto &v : image.pixels.flat()) {
    const double level = peak > 0.0 ? std::floor(255.0 * std::abs(v) / peak + 0.5) : 0.0;
    out += static_cast<char>(static_cast<unsigned char>(std::min(level, 255.0)));
  }
  return out;
}

std::vector<std::string> write_image(const Image &image, const std::string &prefix) {
  const std::string csv = prefix + ".csv";
  const std::string pgm = prefix + ".pgm";
  write_file(csv, image_csv(image));
  write_file(pgm, image_pgm(image));
  return {csv, pgm};
}

std::string echo_csv(const EchoData &echo) {
  std::string out = "kind,rows,cols,axis_start,axis_step\n";
  out += std::string(to_string(echo.kind)) + ',' + std::to_string(echo.samples.rows()) + ',' +
         std::to_string(echo.samples.cols()) + ',' + format_double(echo.axis_start) + ',' +
         format_double(echo.axis_step) + '\n';
  append_samples(out, echo.samples);
  return out;
}

EchoData parse_echo_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("kind,", 0) != 0) {
    throw ParseError("echo line 1: expected header kind,rows,cols,axis_start,axis_step");
  }
  if (!std::getline(in, line)) {
    throw ParseError("echo line 2: missing metadata");
  }
  const auto meta = split(line, ',');
  if (meta.size() != 5) {
    throw ParseError("echo line 2: expected 5 fields");
  }
  EchoData echo;
  if (meta[0] == to_string(EchoKind::Beamsteered2d)) {
    echo.kind = EchoKind::Beamsteered2d;
  } else if (meta[0] == to_string(EchoKind::Switched2d)) {
    echo.kind = EchoKind::Switched2d;
  } else if (meta[0] == to_string(EchoKind::Beamsteered1d)) {
    echo.kind = EchoKind::Beamsteered1d;
  } else {
    throw ParseError("echo line 2: unknown kind '" + meta[0] + "'");
  }
  const double rows = parse_number(meta[1], 2);
  const double cols = parse_number(meta[2], 2);
  if (rows < 1 || cols < 1 || rows != std::floor(rows) || cols != std::floor(cols)) {
    throw ParseError("echo line 2: bad dimensions");
  }
  echo.axis_start = parse_number(meta[3], 2);
  echo.axis_step = parse_number(meta[4], 2);
  echo.samples = CMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  std::size_t line_no = 2;
  for (auto &v : echo.samples.flat()) {
    ++line_no;
    if (!std::getline(in, line)) {
      throw ParseError("echo line " + std::to_string(line_no) + ": missing sample");
    }
    const auto parts = split(line, ',');
    if (parts.size() != 2) {
      throw ParseError("echo line " + std::to_string(line_no) + ": expected re,im");
    }
    v = {parse_number(parts[0], line_no), parse_number(parts[1], line_no)};
  }
  return echo;
}

EchoData load_echo(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open echo " + path);
  }
  return parse_echo_csv({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

void write_file(const std::string &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

std::string sha256_hex(const std::string &bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4U];
    out += kHex[digest[i] & 0xFU];
  }
  return out;
}

std::string sha256_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return sha256_hex({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

} // namespace imgsim
