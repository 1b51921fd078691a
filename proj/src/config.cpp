#include "imgsim/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "imgsim/errors.hpp"

namespace imgsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

long long to_integer(std::string_view key, std::string_view text) {
  long long v = 0;
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::size_t to_count(std::string_view key, std::string_view text) {
  const long long v = to_integer(key, text);
  if (v < 0) {
    throw InvalidConfig(std::string(key) + " must be >= 0");
  }
  return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") {
    return true;
  }
  if (text == "false" || text == "0") {
    return false;
  }
  throw ParseError(std::string(key) + ": expected true or false");
}

bool is_off(std::string_view text) { return text == "off" || text == "none"; }

std::optional<double> to_optional_double(std::string_view key, std::string_view text) {
  if (is_off(text)) {
    return std::nullopt;
  }
  return to_double(key, text);
}

std::string opt_text(const std::optional<double> &v) {
  return v ? format_double(*v) : std::string("off");
}

struct Field {
  const char *key;
  std::function<void(ExperimentConfig &, std::string_view)> set;
  std::function<std::string(const ExperimentConfig &)> get;
};

const std::vector<Field> &fields() {
  using C = ExperimentConfig;
  using V = std::string_view;
  static const std::vector<Field> table = {
      {"frequency_hz", [](C &c, V v) { c.imaging.frequency_hz = to_double("frequency_hz", v); },
       [](const C &c) { return format_double(c.imaging.frequency_hz); }},
      {"n_antennas",
       [](C &c, V v) {
         const long long n = to_integer("n_antennas", v);
         if (n < 1 || n > 4096) {
           throw InvalidConfig("n_antennas must lie in [1, 4096]");
         }
         c.imaging.n_antennas = static_cast<int>(n);
       },
       [](const C &c) { return std::to_string(c.imaging.n_antennas); }},
      {"spacing_m", [](C &c, V v) { c.imaging.spacing_m = to_double("spacing_m", v); },
       [](const C &c) { return format_double(c.imaging.spacing_m); }},
      {"z0_m", [](C &c, V v) { c.imaging.z0_m = to_double("z0_m", v); },
       [](const C &c) { return format_double(c.imaging.z0_m); }},
      {"zf_m", [](C &c, V v) { c.imaging.zf_m = to_optional_double("zf_m", v); },
       [](const C &c) { return opt_text(c.imaging.zf_m); }},
      {"theta_limit_rad",
       [](C &c, V v) { c.imaging.theta_limit_rad = to_optional_double("theta_limit_rad", v); },
       [](const C &c) { return opt_text(c.imaging.theta_limit_rad); }},
      {"amplitude_exponent",
       [](C &c, V v) { c.imaging.amplitude_exponent = to_double("amplitude_exponent", v); },
       [](const C &c) { return format_double(c.imaging.amplitude_exponent); }},
      {"tx_amplitude", [](C &c, V v) { c.imaging.tx_amplitude = to_double("tx_amplitude", v); },
       [](const C &c) { return format_double(c.imaging.tx_amplitude); }},
      {"grid_size",
       [](C &c, V v) {
         if (is_off(v)) {
           c.grid_size.reset();
         } else {
           c.grid_size = to_count("grid_size", v);
         }
       },
       [](const C &c) { return c.grid_size ? std::to_string(*c.grid_size) : std::string("off"); }},
      {"snr_db", [](C &c, V v) { c.impairments.snr_db = to_optional_double("snr_db", v); },
       [](const C &c) { return opt_text(c.impairments.snr_db); }},
      {"phase_bits",
       [](C &c, V v) {
         if (is_off(v) || v == "inf") {
           c.impairments.phase_bits.reset();
         } else {
           c.impairments.phase_bits = static_cast<int>(to_integer("phase_bits", v));
         }
       },
       [](const C &c) {
         return c.impairments.phase_bits ? std::to_string(*c.impairments.phase_bits)
                                         : std::string("off");
       }},
      {"sigma_phi_rad",
       [](C &c, V v) { c.impairments.sigma_phi_rad = to_double("sigma_phi_rad", v); },
       [](const C &c) { return format_double(c.impairments.sigma_phi_rad); }},
      {"jitter_s", [](C &c, V v) { c.impairments.jitter_s = to_double("jitter_s", v); },
       [](const C &c) { return format_double(c.impairments.jitter_s); }},
      {"seed",
       [](C &c, V v) {
         std::uint64_t s = 0;
         const auto *end = v.data() + v.size();
         const auto [ptr, ec] = std::from_chars(v.data(), end, s);
         if (ec != std::errc{} || ptr != end) {
           throw ParseError("seed: expected a non-negative integer");
         }
         c.impairments.seed = s;
       },
       [](const C &c) { return std::to_string(c.impairments.seed); }},
      {"shared_phase_noise",
       [](C &c, V v) { c.impairments.shared_tx_rx_phase_noise = to_bool("shared_phase_noise", v); },
       [](const C &c) {
         return std::string(c.impairments.shared_tx_rx_phase_noise ? "true" : "false");
       }},
      {"noise_power_w",
       [](C &c, V v) { c.impairments.noise_power_w = to_optional_double("noise_power_w", v); },
       [](const C &c) { return opt_text(c.impairments.noise_power_w); }},
      {"scene", [](C &c, V v) { c.scene = std::string(v); }, [](const C &c) { return c.scene; }},
      {"output_dir", [](C &c, V v) { c.output_dir = std::string(v); },
       [](const C &c) { return c.output_dir; }},
      {"method", [](C &c, V v) { c.method = std::string(v); },
       [](const C &c) { return c.method; }},
      {"echo_model", [](C &c, V v) { c.echo_model = std::string(v); },
       [](const C &c) { return c.echo_model; }},
      {"echo_path", [](C &c, V v) { c.echo_path = std::string(v); },
       [](const C &c) { return c.echo_path; }},
      {"sweep_n_antennas",
       [](C &c, V v) {
         c.sweep.n_antennas.clear();
         std::size_t start = 0;
         while (start <= v.size()) {
           const auto comma = v.find(',', start);
           const auto item = trim(v.substr(start, comma == V::npos ? V::npos : comma - start));
           const long long n = to_integer("sweep_n_antennas", item);
           if (n < 2) {
             throw InvalidConfig("sweep_n_antennas entries must be >= 2");
           }
           c.sweep.n_antennas.push_back(static_cast<int>(n));
           if (comma == V::npos) {
             break;
           }
           start = comma + 1;
         }
       },
       [](const C &c) {
         std::string out;
         for (std::size_t i = 0; i < c.sweep.n_antennas.size(); ++i) {
           out += (i ? "," : "") + std::to_string(c.sweep.n_antennas[i]);
         }
         return out;
       }},
      {"sigma_min_rad", [](C &c, V v) { c.sweep.sigma_min_rad = to_double("sigma_min_rad", v); },
       [](const C &c) { return format_double(c.sweep.sigma_min_rad); }},
      {"sigma_max_rad", [](C &c, V v) { c.sweep.sigma_max_rad = to_double("sigma_max_rad", v); },
       [](const C &c) { return format_double(c.sweep.sigma_max_rad); }},
      {"sigma_step_rad",
       [](C &c, V v) { c.sweep.sigma_step_rad = to_double("sigma_step_rad", v); },
       [](const C &c) { return format_double(c.sweep.sigma_step_rad); }},
      {"trials", [](C &c, V v) { c.sweep.trials = to_count("trials", v); },
       [](const C &c) { return std::to_string(c.sweep.trials); }},
      {"psf_oversample",
       [](C &c, V v) { c.sweep.psf_oversample = to_count("psf_oversample", v); },
       [](const C &c) { return std::to_string(c.sweep.psf_oversample); }},
      {"fit_lower_db", [](C &c, V v) { c.sweep.fit_lower_db = to_double("fit_lower_db", v); },
       [](const C &c) { return format_double(c.sweep.fit_lower_db); }},
      {"fit_upper_db", [](C &c, V v) { c.sweep.fit_upper_db = to_double("fit_upper_db", v); },
       [](const C &c) { return format_double(c.sweep.fit_upper_db); }},
      {"fit_threshold_db",
       [](C &c, V v) { c.sweep.fit_threshold_db = to_double("fit_threshold_db", v); },
       [](const C &c) { return format_double(c.sweep.fit_threshold_db); }},
      {"separation_m", [](C &c, V v) { c.separation_m = to_double("separation_m", v); },
       [](const C &c) { return format_double(c.separation_m); }},
      {"offset_x_m", [](C &c, V v) { c.offset_x_m = to_double("offset_x_m", v); },
       [](const C &c) { return format_double(c.offset_x_m); }},
      {"two_reflector_bits",
       [](C &c, V v) { c.two_reflector_bits = static_cast<int>(to_integer("two_reflector_bits", v)); },
       [](const C &c) { return std::to_string(c.two_reflector_bits); }},
  };
  return table;
}

constexpr std::array<const char *, 4> kRequired = {"frequency_hz", "n_antennas", "spacing_m",
                                                   "z0_m"};

} // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw ParseError("cannot format number");
  }
  return {buf.data(), ptr};
}

std::vector<double> SweepSettings::sigma_values() const {
  std::vector<double> out;
  const double span = sigma_max_rad - sigma_min_rad;
  const auto steps = static_cast<std::size_t>(std::floor(span / sigma_step_rad + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    out.push_back(sigma_min_rad + static_cast<double>(i) * sigma_step_rad);
  }
  return out;
}

std::size_t ExperimentConfig::resolved_grid_size() const {
  return grid_size.value_or(default_grid_size(imaging.n_antennas));
}

void ExperimentConfig::validate() const {
  imaging.validate();
  impairments.validate();
  if (grid_size && *grid_size < 2) {
    throw InvalidConfig("grid_size must be >= 2");
  }
  if (method != "beamsteer" && method != "switched-mf" && method != "switched-spectral") {
    throw InvalidConfig("method must be beamsteer, switched-mf or switched-spectral");
  }
  if (echo_model != "element" && echo_model != "ideal") {
    throw InvalidConfig("echo_model must be element or ideal");
  }
  if (sweep.n_antennas.empty()) {
    throw InvalidConfig("sweep_n_antennas must list at least one size");
  }
  if (!(sweep.sigma_step_rad > 0.0)) {
    throw InvalidConfig("sigma_step_rad must be positive");
  }
  if (sweep.sigma_min_rad < 0.0) {
    throw InvalidConfig("sigma_min_rad must be >= 0");
  }
  if (!(sweep.sigma_max_rad >= sweep.sigma_min_rad)) {
    throw InvalidConfig("sigma_max_rad must be >= sigma_min_rad");
  }
  if (sweep.trials < 1) {
    throw InvalidConfig("trials must be >= 1");
  }
  if (sweep.psf_oversample < 1) {
    throw InvalidConfig("psf_oversample must be >= 1");
  }
  if (!(sweep.fit_lower_db < sweep.fit_upper_db)) {
    throw InvalidConfig("fit_lower_db must be below fit_upper_db");
  }
  if (!(separation_m > 0.0)) {
    throw InvalidConfig("separation_m must be positive");
  }
  if (two_reflector_bits < 1 || two_reflector_bits > 16) {
    throw InvalidConfig("two_reflector_bits must lie in [1, 16]");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, const Field *, std::less<>> by_key;
  for (const auto &f : fields()) {
    by_key.emplace(f.key, &f);
  }
  ExperimentConfig cfg;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      throw ParseError("unknown key '" + std::string(key) + "' on line " +
                       std::to_string(line_no));
    }
    if (seen.contains(key)) {
      throw ParseError("duplicate key '" + std::string(key) + "' on line " +
                       std::to_string(line_no));
    }
    seen.emplace(std::string(key), line_no);
    it->second->set(cfg, value);
  }
  for (const char *key : kRequired) {
    if (!seen.contains(std::string_view(key))) {
      throw ParseError(std::string("missing required key ") + key);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig &config) {
  std::string out;
  for (const auto &f : fields()) {
    const std::string value = f.get(config);
    if (value.empty()) {
      continue;
    }
    out += f.key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

} // namespace imgsim
