#include "imgsim/experiments.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <map>

#include "imgsim/analysis.hpp"
#include "imgsim/errors.hpp"
#include "imgsim/forward_sim.hpp"
#include "imgsim/image_io.hpp"
#include "imgsim/reconstruction.hpp"
#include "imgsim/scene_io.hpp"

namespace imgsim {

namespace {

namespace fs = std::filesystem;

class Writer {
public:
  explicit Writer(const ExperimentConfig &config) : dir_(config.output_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
      throw IoError("cannot create " + dir_.string() + ": " + ec.message());
    }
  }

  void text(const std::string &name, const std::string &contents) {
    const std::string path = (dir_ / name).string();
    write_file(path, contents);
    files_.push_back(path);
  }

  void image(const std::string &stem, const Image &img) {
    text(stem + ".csv", image_csv(img));
    text(stem + ".pgm", image_pgm(img));
  }

  RunResult finish(const std::string &subcommand, const ExperimentConfig &config) const {
    nlohmann::ordered_json manifest;
    manifest["subcommand"] = subcommand;
    manifest["seed"] = config.impairments.seed;
    manifest["scene"] = config.scene;
    manifest["echo_path"] = config.echo_path;
    ExperimentConfig recorded = config;
    recorded.output_dir = ".";
    manifest["config"] = serialize_config(recorded);
    manifest["artifacts"] = nlohmann::ordered_json::array();
    for (const auto &path : files_) {
      manifest["artifacts"].push_back(
          {{"file", fs::path(path).filename().string()}, {"sha256", sha256_file(path)}});
    }
    RunResult out{files_, (dir_ / "manifest.json").string()};
    write_file(out.manifest_path, manifest.dump(2) + "\n");
    return out;
  }

private:
  fs::path dir_;
  std::vector<std::string> files_;
};

struct Acquisition {
  ImagingConfig imaging; // theta limit resolved
  SteeringGrid grid;
};

Acquisition prepare(const ExperimentConfig &config, const Scene &scene) {
  ImagingConfig imaging = resolve_theta_limit(config.imaging, scene);
  SteeringGrid grid = build_steering_grid(imaging, config.resolved_grid_size());
  return {imaging, std::move(grid)};
}

EchoData simulate_beamsteer(const ExperimentConfig &config, const Scene &scene,
                            const Acquisition &acq) {
  if (config.echo_model == "ideal") {
    return ideal_echo(scene, acq.grid, acq.imaging);
  }
  return beamsteer_echo(scene, acq.grid, acq.imaging, config.impairments);
}

Image reconstruct(const std::string &method, const EchoData &echo, const Acquisition &acq) {
  const double zf = acq.imaging.focus();
  if (method == "beamsteer") {
    return reconstruct_beamsteer(echo, acq.grid, acq.imaging, zf);
  }
  if (method == "switched-mf") {
    return reconstruct_switched_mf(echo, acq.imaging, zf);
  }
  return reconstruct_switched_spectral(echo, acq.imaging, zf);
}

std::string csv_row(std::initializer_list<std::string> items) {
  std::string out;
  for (const auto &s : items) {
    if (!out.empty()) {
      out += ',';
    }
    out += s;
  }
  return out + '\n';
}

void simulate_beamsteer_cmd(const ExperimentConfig &config, Writer &w) {
  const Scene scene = resolve_scene(config);
  const auto acq = prepare(config, scene);
  w.text("echo_beamsteer.csv", echo_csv(simulate_beamsteer(config, scene, acq)));
}

void simulate_switched_cmd(const ExperimentConfig &config, Writer &w) {
  const Scene scene = resolve_scene(config);
  w.text("echo_switched.csv", echo_csv(switched_echo(scene, config.imaging, config.impairments)));
}

void reconstruct_cmd(const ExperimentConfig &config, Writer &w) {
  EchoData echo;
  std::optional<Acquisition> acq;
  if (!config.echo_path.empty()) {
    echo = load_echo(config.echo_path);
    acq = config.scene.empty() ? prepare(config, Scene{}) : prepare(config, resolve_scene(config));
  } else {
    const Scene scene = resolve_scene(config);
    acq = prepare(config, scene);
    echo = config.method == "beamsteer" ? simulate_beamsteer(config, scene, *acq)
                                        : switched_echo(scene, config.imaging, config.impairments);
  }
  w.image("image_" + config.method, reconstruct(config.method, echo, *acq));
}

void compare_methods_cmd(const ExperimentConfig &config, Writer &w) {
  const Scene scene = resolve_scene(config);
  const auto acq = prepare(config, scene);
  const EchoData beam = simulate_beamsteer(config, scene, acq);
  const EchoData sw = switched_echo(scene, config.imaging, config.impairments);
  std::string metrics = "method,peak_offset_m,normalized_rmse,peak_to_background_db\n";
  for (const std::string method : {"beamsteer", "switched-mf", "switched-spectral"}) {
    const Image img = reconstruct(method, method == "beamsteer" ? beam : sw, acq);
    const ImageError err = image_error(img, scene);
    metrics += csv_row({method, format_double(err.peak_offset_m),
                        format_double(err.normalized_rmse),
                        format_double(err.peak_to_background_db)});
    w.image("image_" + method, img);
  }
  w.text("metrics.csv", metrics);
}

std::vector<SslCurve> run_sweeps(const ExperimentConfig &config) {
  const auto sigmas = config.sweep.sigma_values();
  PsfOptions options;
  options.grid_size = config.grid_size.value_or(0);
  options.oversample = config.sweep.psf_oversample;
  std::vector<SslCurve> curves;
  for (int n : config.sweep.n_antennas) {
    curves.push_back(ssl_sweep(n, sigmas, config.sweep.trials, config.imaging,
                               config.impairments.seed, options));
  }
  return curves;
}

std::string curve_csv(const SslCurve &curve) {
  std::string out = "sigma_rad,ssl_db\n";
  for (std::size_t i = 0; i < curve.sigma_values.size(); ++i) {
    out += csv_row({format_double(curve.sigma_values[i]), format_double(curve.ssl_db[i])});
  }
  return out;
}

void psf_sweep_cmd(const ExperimentConfig &config, Writer &w) {
  for (const auto &curve : run_sweeps(config)) {
    w.text("ssl_n" + std::to_string(curve.n_antennas) + ".csv", curve_csv(curve));
  }
}

void breakpoint_fit_cmd(const ExperimentConfig &config, Writer &w) {
  const FitWindow window{config.sweep.fit_lower_db, config.sweep.fit_upper_db,
                         config.sweep.fit_threshold_db};
  std::string table = "n_antennas,sigma_sb_rad,sigma_tb_rad,fit_slope,fit_intercept,floor_db\n";
  std::vector<SizePoint> points;
  for (const auto &curve : run_sweeps(config)) {
    w.text("ssl_n" + std::to_string(curve.n_antennas) + ".csv", curve_csv(curve));
    const BreakpointReport r = breakpoint_fit(curve, window);
    table += csv_row({std::to_string(curve.n_antennas), format_double(r.sigma_sb),
                      format_double(r.sigma_tb), format_double(r.fit_slope),
                      format_double(r.fit_intercept), format_double(r.floor_db)});
    points.push_back({curve.n_antennas, r.sigma_sb});
  }
  w.text("breakpoints.csv", table);
  if (points.size() >= 2) {
    const LogFit fit = breakpoint_model_fit(points);
    w.text("model_fit.csv", "slope,intercept\n" +
                                csv_row({format_double(fit.slope), format_double(fit.intercept)}));
  }
}

void two_reflector_cmd(const ExperimentConfig &config, Writer &w) {
  ExperimentConfig quantized = config;
  quantized.impairments.phase_bits = config.two_reflector_bits;
  // One steering grid for both placements.
  const Acquisition acq = prepare(config, Scene{});
  std::string table = "placement,centre_x_m,true_separation_m,peak_count,separation_m,dip_db\n";
  const std::pair<const char *, double> placements[] = {{"broadside", 0.0},
                                                        {"off-broadside", config.offset_x_m}};
  for (const auto &[name, centre] : placements) {
    const Scene scene = two_point_scene(config.separation_m, centre);
    const Image img = reconstruct_beamsteer(
        beamsteer_echo(scene, acq.grid, acq.imaging, quantized.impairments), acq.grid,
        acq.imaging, acq.imaging.focus());
    const PairMeasurement pair = measure_pair(img);
    table += csv_row({name, format_double(centre), format_double(config.separation_m),
                      std::to_string(pair.peak_count), format_double(pair.separation_m),
                      format_double(pair.dip_db)});
    w.image(std::string("image_") + name, img);
  }
  w.text("pairs.csv", table);
}

void resolution_cmd(const ExperimentConfig &config, Writer &w) {
  const double l = config.imaging.half_length();
  const double switched = resolution_switched(config.imaging);
  std::string table = "x_m,y_m,delta_beamsteer_m,delta_switched_m\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = l * static_cast<double>(i) / 4.0;
    table += csv_row({format_double(x), "0", format_double(resolution_beamsteer(x, 0.0, config.imaging)),
                      format_double(switched)});
  }
  w.text("resolution.csv", table);
}

using Handler = std::function<void(const ExperimentConfig &, Writer &)>;

const std::map<std::string, Handler> &handlers() {
  static const std::map<std::string, Handler> table = {
      {"simulate-beamsteer", simulate_beamsteer_cmd},
      {"simulate-switched", simulate_switched_cmd},
      {"reconstruct", reconstruct_cmd},
      {"compare-methods", compare_methods_cmd},
      {"psf-sweep", psf_sweep_cmd},
      {"breakpoint-fit", breakpoint_fit_cmd},
      {"two-reflector", two_reflector_cmd},
      {"resolution", resolution_cmd},
  };
  return table;
}

} // namespace

const std::vector<std::string> &experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto &[name, _] : handlers()) {
      out.push_back(name);
    }
    return out;
  }();
  return names;
}

Scene resolve_scene(const ExperimentConfig &config) {
  if (config.scene.empty()) {
    throw InvalidConfig("scene: required for this subcommand");
  }
  if (config.scene == "t-target") {
    return t_target_scene(config.imaging.wavelength());
  }
  if (config.scene == "two-point") {
    return two_point_scene(config.separation_m);
  }
  return load_scene(config.scene);
}

RunResult run_experiment(const std::string &subcommand, const ExperimentConfig &config) {
  const auto it = handlers().find(subcommand);
  if (it == handlers().end()) {
    throw InvalidConfig("unknown subcommand '" + subcommand + "'");
  }
  config.validate();
  Writer writer(config);
  it->second(config, writer);
  return writer.finish(subcommand, config);
}

} // namespace imgsim
