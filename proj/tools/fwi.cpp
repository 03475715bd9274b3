// Command-line driver: synthetic data generation, multi-scale inversion,
// grid reports, images, profiles and gradient checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "fwi/errors.hpp"
#include "fwi/io.hpp"
#include "fwi/multiscale.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  json raw;
  fs::path model_stem;
  fs::path data_dir = "data";
  fs::path output_dir = "out";
  std::vector<double> schedule_hz;
  fwi::FrequencySchedule schedule;
  fwi::AcquisitionGeometry geometry;
  fwi::OptimizerConfig optimizer;
  fwi::ForwardConfig forward;
  std::optional<fwi::NoiseSpec> noise;
  std::uint64_t seed = 0;
  // optional initial-model spec
  bool has_initial = false;
  double c_top = 0.0, c_bottom = 0.0;
  int shallow_rows = 0;
  double shallow_velocity = 0.0;
};

std::vector<std::pair<double, double>> parse_positions(const json& j) {
  if (j.is_array()) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : j) out.emplace_back(p.at(0), p.at(1));
    return out;
  }
  return fwi::line_positions(j.at("count").get<int>(),
                             j.at("spacing").get<double>(),
                             j.at("first_offset").get<double>(),
                             j.at("depth").get<double>());
}

RunConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw fwi::ValidationError("cannot open config: " + path.string());
  RunConfig cfg;
  try {
    is >> cfg.raw;
  } catch (const json::exception& e) {
    throw fwi::ValidationError(std::string("bad config JSON: ") + e.what());
  }
  const json& j = cfg.raw;
  cfg.model_stem = j.value("model", "");
  cfg.data_dir = j.value("data_dir", "data");
  cfg.output_dir = j.value("output_dir", "out");
  cfg.seed = j.value("seed", 0ULL);

  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    if (s.contains("list")) {
      cfg.schedule_hz = s["list"].get<std::vector<double>>();
    } else {
      double start = s.at("start"), stop = s.at("stop"), step = s.at("step");
      if (!(step > 0.0)) throw fwi::ValidationError("schedule step must be > 0");
      for (double f = start; f <= stop + 1e-9 * step; f += step)
        cfg.schedule_hz.push_back(f);
    }
  }
  cfg.schedule.frequencies_hz = cfg.schedule_hz;
  if (j.contains("sizing")) {
    cfg.schedule.ng = j["sizing"].value("ng", 8.5);
    cfg.schedule.pml_wavelengths = j["sizing"].value("pml_wavelengths", 1.0);
  }
  if (j.contains("stopping")) {
    cfg.schedule.stop.tol_g = j["stopping"].value("tol_g", 1e-7);
    cfg.schedule.stop.tol_J = j["stopping"].value("tol_J", 1e-16);
    cfg.schedule.stop.maxiter = j["stopping"].value("maxiter", 800);
  }
  if (j.contains("geometry")) {
    cfg.geometry.sources = parse_positions(j["geometry"].at("sources"));
    cfg.geometry.receivers = parse_positions(j["geometry"].at("receivers"));
  }
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    std::string method = o.value("method", "bb");
    if (method == "bb")
      cfg.optimizer.method = fwi::OptMethod::BB;
    else if (method == "lbfgs")
      cfg.optimizer.method = fwi::OptMethod::LBFGS;
    else
      throw fwi::ValidationError("unknown optimizer method: " + method);
    cfg.optimizer.bb_variant = o.value("bb_variant", "bb1") == "bb2"
                                   ? fwi::BBVariant::BB2
                                   : fwi::BBVariant::BB1;
    cfg.optimizer.lbfgs_memory = o.value("memory", 10);
    if (o.contains("c_min") && o.contains("c_max"))
      cfg.optimizer.bounds = fwi::BoundsConstraint::from_velocity(
          o["c_min"].get<double>(), o["c_max"].get<double>());
  }
  if (j.contains("shape")) {
    std::string mode = j["shape"].value("mode", "tuned");
    if (mode == "tuned")
      cfg.forward.shape = fwi::tuned_shape();
    else if (mode == "classical")
      cfg.forward.shape = fwi::classical_shape();
    else if (mode == "fixed")
      cfg.forward.shape = fwi::fixed_shape(j["shape"].value("eps", 0.0));
    else
      throw fwi::ValidationError("unknown shape mode: " + mode);
  }
  if (j.contains("noise") && j["noise"].value("snr_db", 0.0) > 0.0) {
    fwi::NoiseSpec n;
    n.snr_db = j["noise"]["snr_db"].get<double>();
    n.seed = j["noise"].value("seed", cfg.seed);
    cfg.noise = n;
  }
  if (j.contains("initial_model")) {
    const json& m = j["initial_model"];
    cfg.has_initial = true;
    cfg.c_top = m.at("c_top");
    cfg.c_bottom = m.at("c_bottom");
    cfg.shallow_rows = m.value("shallow_rows", 0);
    cfg.shallow_velocity = m.value("shallow_velocity", 0.0);
  }
  return cfg;
}

void archive_config(const RunConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream os(dir / "config.json");
  os << cfg.raw.dump(2) << "\n";
  std::ofstream vs(dir / "version.txt");
  vs << fwi::tool_version() << "\n";
}

fwi::VelocityModel initial_model_for(const RunConfig& cfg,
                                     const fwi::VelocityModel& like) {
  if (!cfg.has_initial) return like;
  std::optional<fwi::KnownShallow> shallow;
  if (cfg.shallow_rows > 0) {
    fwi::KnownShallow s;
    s.rows = cfg.shallow_rows;
    s.values = fwi::RVec::Constant(1, cfg.shallow_velocity);
    shallow = s;
  }
  return fwi::linear_initial_model(cfg.c_top, cfg.c_bottom, like, shallow);
}

int cmd_forward(const RunConfig& cfg) {
  fwi::VelocityModel model = fwi::read_model(cfg.model_stem);
  if (cfg.schedule_hz.empty())
    throw fwi::ValidationError("forward needs a non-empty schedule");
  auto datasets = fwi::generate_observed(model, cfg.schedule_hz, cfg.geometry,
                                         cfg.schedule.ng,
                                         cfg.schedule.pml_wavelengths,
                                         cfg.forward, cfg.noise);
  fs::create_directories(cfg.data_dir);
  json manifest = json::array();
  for (const auto& ds : datasets) {
    fwi::write_dataset(cfg.data_dir, ds);
    manifest.push_back({{"frequency_hz", ds.frequency_hz()},
                        {"stem", fwi::dataset_stem(ds.frequency_hz())}});
  }
  std::ofstream os(cfg.data_dir / "manifest.json");
  os << json({{"datasets", manifest}}).dump(2) << "\n";
  archive_config(cfg, cfg.data_dir);
  std::cout << "wrote " << datasets.size() << " dataset(s) to " << cfg.data_dir
            << "\n";
  return 0;
}

void print_grid_info(const RunConfig& cfg, const fwi::VelocityModel& model) {
  fwi::ModelField m0 = fwi::slowness_squared(model);
  double f0 = fwi::initial_frequency(m0, model.depth()) / (2.0 * M_PI);
  std::cout << "suggested initial frequency f0 = " << f0 << " Hz\n";
  if (!cfg.schedule_hz.empty() && cfg.schedule_hz.front() > f0)
    std::cout << "warning: schedule starts above the f0 heuristic\n";
  std::cout << "frequency_hz h_m delta_m nodes inner_nodes est_matrix_MB\n";
  for (double f : cfg.schedule_hz) {
    fwi::HexGrid g =
        fwi::build_hex_grid(model, f, cfg.schedule.ng,
                            cfg.schedule.pml_wavelengths);
    double mb = g.node_count() * 7.0 * 16.0 / 1e6;
    std::cout << f << " " << g.h << " " << g.delta << " " << g.node_count()
              << " " << g.inner_count() << " " << mb << "\n";
  }
}

int cmd_invert(const RunConfig& cfg, bool resume, bool dry_run) {
  fwi::VelocityModel model = fwi::read_model(cfg.model_stem);
  fwi::VelocityModel m0 = initial_model_for(cfg, model);
  if (dry_run) {
    print_grid_info(cfg, m0);
    return 0;
  }
  std::vector<fwi::FrequencyDataset> datasets;
  for (double f : cfg.schedule_hz)
    datasets.push_back(fwi::read_dataset(cfg.data_dir, f));
  if (!resume && fs::exists(cfg.output_dir)) {
    for (const auto& e : fs::directory_iterator(cfg.output_dir))
      if (e.is_directory() &&
          e.path().filename().string().rfind("stage_", 0) == 0)
        fs::remove_all(e.path());
  }
  archive_config(cfg, cfg.output_dir);
  fwi::MultiscaleConfig mc;
  mc.forward = cfg.forward;
  mc.optimizer = cfg.optimizer;
  mc.checkpoint_dir = cfg.output_dir;
  fwi::MultiscaleResult res =
      fwi::run_multiscale(m0, cfg.schedule, datasets, cfg.geometry, mc);
  std::cout << "final model written to "
            << (cfg.output_dir / "final_model.bin") << "\n";
  for (const auto& s : res.stages)
    std::cout << "stage " << s.frequency_hz << " Hz: " << s.iterations
              << " iterations, J " << s.initial_misfit << " -> "
              << s.final_misfit << "\n";
  return 0;
}

int cmd_gradcheck(const RunConfig& cfg) {
  fwi::VelocityModel model = fwi::read_model(cfg.model_stem);
  fwi::VelocityModel m0v = initial_model_for(cfg, model);
  if (cfg.schedule_hz.empty())
    throw fwi::ValidationError("gradcheck needs a schedule");
  double f = cfg.schedule_hz.front();
  fwi::HexGrid grid = fwi::build_hex_grid(m0v, f, cfg.schedule.ng,
                                          cfg.schedule.pml_wavelengths);
  auto datasets = fwi::generate_observed(model, {f}, cfg.geometry,
                                         cfg.schedule.ng,
                                         cfg.schedule.pml_wavelengths,
                                         cfg.forward, cfg.noise);
  fwi::MisfitGradientEvaluator eval(grid, cfg.geometry, datasets[0], m0v,
                                    cfg.forward);
  fwi::ModelField m = fwi::slowness_squared(m0v);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  fwi::RVec dir(m.values.size());
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = gauss(rng);
  dir /= dir.norm();
  double scale = m.values.maxCoeff();
  std::vector<double> steps;
  for (double s = 1e-1; s >= 1e-7 / 2; s /= 4) steps.push_back(s * scale);
  auto rows = fwi::directional_misfit_check(eval, m.values, dir, steps);
  std::cout << "step fd_derivative adjoint_derivative relative_error\n";
  double best = 1.0;
  for (const auto& r : rows) {
    std::cout << r.step << " " << r.fd_derivative << " "
              << r.adjoint_derivative << " " << r.relative_error << "\n";
    best = std::min(best, r.relative_error);
  }
  std::cout << "best relative error: " << best << "\n";
  return best <= 1e-4 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain FWI on hexagonal RBF-FD grids"};
  app.require_subcommand(1);

  std::string config_path;
  bool resume = false, dry_run = false;

  auto* fwd = app.add_subcommand("forward", "generate synthetic observed data");
  fwd->add_option("--config", config_path, "run configuration JSON")
      ->required();

  auto* inv = app.add_subcommand("invert", "run the multi-scale inversion");
  inv->add_option("--config", config_path, "run configuration JSON")
      ->required();
  inv->add_flag("--resume", resume, "continue from existing checkpoints");
  inv->add_flag("--dry-run", dry_run,
                "print per-stage grid sizes and memory, no solves");

  auto* gi = app.add_subcommand("grid-info",
                                "print h, delta and node counts per frequency");
  gi->add_option("--config", config_path, "run configuration JSON")->required();

  std::string model_path, out_path, palette = "gray";
  double clip_min = 0.0, clip_max = 0.0;
  auto* img = app.add_subcommand("image", "render a model to PGM/PPM");
  img->add_option("--model", model_path, "model file stem")->required();
  img->add_option("--out", out_path, "output image path")->required();
  img->add_option("--palette", palette, "gray or seismic");
  img->add_option("--clip-min", clip_min, "lower clip (default model min)");
  img->add_option("--clip-max", clip_max, "upper clip (default model max)");

  std::vector<double> profile_x;
  auto* prof = app.add_subcommand("profiles", "extract vertical profiles");
  prof->add_option("--model", model_path, "model file stem")->required();
  prof->add_option("--x", profile_x, "profile x positions (meters)")
      ->required();
  prof->add_option("--out", out_path, "output CSV path")->required();

  auto* gc = app.add_subcommand(
      "gradcheck", "finite-difference check of the adjoint gradient");
  gc->add_option("--config", config_path, "run configuration JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fwd->parsed()) return cmd_forward(load_config(config_path));
    if (inv->parsed()) return cmd_invert(load_config(config_path), resume,
                                         dry_run);
    if (gi->parsed()) {
      RunConfig cfg = load_config(config_path);
      fwi::VelocityModel model = fwi::read_model(cfg.model_stem);
      print_grid_info(cfg, initial_model_for(cfg, model));
      return 0;
    }
    if (img->parsed()) {
      fwi::VelocityModel model = fwi::read_model(model_path);
      if (clip_min == 0.0 && clip_max == 0.0) {
        clip_min = model.min_c();
        clip_max = model.max_c();
      }
      fwi::emit_image(model, out_path, palette, clip_min, clip_max);
      return 0;
    }
    if (prof->parsed()) {
      fwi::VelocityModel model = fwi::read_model(model_path);
      fwi::emit_profiles(model, profile_x, out_path);
      return 0;
    }
    if (gc->parsed()) return cmd_gradcheck(load_config(config_path));
  } catch (const fwi::ValidationError& e) {
    std::cerr << json({{"error", e.what()}, {"type", "validation"}}).dump()
              << "\n";
    return 2;
  } catch (const fwi::NumericalError& e) {
    std::cerr << json({{"error", e.what()}, {"type", "numerical"}}).dump()
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", e.what()}, {"type", "internal"}}).dump()
              << "\n";
    return 1;
  }
  return 1;
}
