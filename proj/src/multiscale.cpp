#include "fwi/multiscale.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "fwi/errors.hpp"
#include "fwi/io.hpp"

namespace fwi {

void FrequencySchedule::validate() const {
  if (frequencies_hz.empty()) throw ValidationError("empty frequency schedule");
  for (std::size_t i = 0; i < frequencies_hz.size(); ++i) {
    if (!(frequencies_hz[i] > 0.0))
      throw ValidationError("schedule frequencies must be positive");
    if (i > 0 && !(frequencies_hz[i] > frequencies_hz[i - 1]))
      throw ValidationError("schedule must be strictly increasing");
  }
  if (!(ng > 2.0)) throw ValidationError("Ng must exceed 2");
}

StoppingCriteria FrequencySchedule::stop_for(int stage) const {
  for (const auto& [idx, s] : stop_overrides)
    if (idx == stage) return s;
  return stop;
}

double initial_frequency(const ModelField& m0, double z_d) {
  m0.validate();
  if (m0.quantity != Quantity::SlownessSquared)
    throw ValidationError("initial_frequency expects a slowness-squared field");
  if (!(z_d > 0.0)) throw ValidationError("target depth must be positive");
  return 2.0 * M_PI / (z_d * std::sqrt(m0.values.minCoeff()));
}

VelocityModel linear_initial_model(double c_top, double c_bottom,
                                   const VelocityModel& like,
                                   const std::optional<KnownShallow>& shallow) {
  if (!(c_top > 0.0) || !(c_bottom >= c_top))
    throw ValidationError("need 0 < c_top <= c_bottom");
  VelocityModel out = like;
  out.c.resize(static_cast<Eigen::Index>(like.nz) * like.nx);
  for (int iz = 0; iz < like.nz; ++iz) {
    double t = like.nz > 1 ? static_cast<double>(iz) / (like.nz - 1) : 0.0;
    double v = c_top + t * (c_bottom - c_top);
    for (int ix = 0; ix < like.nx; ++ix) out.at(iz, ix) = v;
  }
  if (shallow) {
    if (shallow->rows < 0 || shallow->rows > like.nz)
      throw ValidationError("known shallow rows out of range");
    for (int iz = 0; iz < shallow->rows; ++iz)
      for (int ix = 0; ix < like.nx; ++ix) {
        double v = shallow->values.size() == 1
                       ? shallow->values[0]
                       : shallow->values[iz * like.nx + ix];
        out.at(iz, ix) = v;
      }
  }
  out.validate();
  return out;
}

namespace {

std::string stage_dirname(double f_hz) {
  long long mhz = std::llround(f_hz * 1000.0);
  std::ostringstream os;
  os << "stage_" << std::setw(7) << std::setfill('0') << mhz << "mHz";
  return os.str();
}

void write_summary(const fs::path& dir, const std::vector<StageResult>& rows) {
  std::ofstream os(dir / "summary.csv");
  os << "frequency_hz,mean_iter_seconds,iterations,inner_nodes,final_grad_norm\n";
  os << std::setprecision(17);
  for (const auto& r : rows)
    os << r.frequency_hz << "," << r.mean_iter_seconds << "," << r.iterations
       << "," << r.inner_nodes << "," << r.final_grad_norm << "\n";
}

}  // namespace

MultiscaleResult run_multiscale(const VelocityModel& m0,
                                const FrequencySchedule& schedule,
                                const std::vector<FrequencyDataset>& datasets,
                                const AcquisitionGeometry& geom,
                                const MultiscaleConfig& config) {
  schedule.validate();
  m0.validate();
  if (datasets.size() != schedule.frequencies_hz.size())
    throw ValidationError("need one dataset per scheduled frequency");
  for (std::size_t p = 0; p < datasets.size(); ++p) {
    double want = 2.0 * M_PI * schedule.frequencies_hz[p];
    if (std::abs(datasets[p].omega - want) > 1e-9 * want)
      throw ValidationError("dataset frequency does not match the schedule");
  }

  MultiscaleResult out;
  ModelField m = slowness_squared(m0);

  for (std::size_t p = 0; p < schedule.frequencies_hz.size(); ++p) {
    double f = schedule.frequencies_hz[p];
    double omega = 2.0 * M_PI * f;
    fs::path stage_dir;
    if (config.checkpoint_dir) {
      stage_dir = *config.checkpoint_dir / stage_dirname(f);
      // Restart: a completed stage is reused verbatim (f64 state keeps the
      // chain bitwise identical to an uninterrupted run).
      if (fs::exists(stage_dir / "state.json") &&
          fs::exists(stage_dir / "state.bin") &&
          fs::exists(stage_dir / "done")) {
        m = read_field_f64(stage_dir / "state", Quantity::SlownessSquared);
        std::ifstream is(stage_dir / "stage.json");
        if (is) {
          nlohmann::json j;
          is >> j;
          StageResult r;
          r.frequency_hz = j.value("frequency_hz", f);
          r.iterations = j.value("iterations", 0);
          r.inner_nodes = j.value("inner_nodes", 0);
          r.mean_iter_seconds = j.value("mean_iter_seconds", 0.0);
          r.final_grad_norm = j.value("final_grad_norm", 0.0);
          r.final_misfit = j.value("final_misfit", 0.0);
          r.initial_misfit = j.value("initial_misfit", 0.0);
          out.stages.push_back(r);
          out.histories.emplace_back();
        }
        continue;
      }
    }

    HexGrid grid = build_hex_grid(m0, f, schedule.ng, schedule.pml_wavelengths);
    StoppingCriteria stop = schedule.stop_for(static_cast<int>(p));

    MisfitGradientEvaluator eval(grid, geom, datasets[p], m0, config.forward);
    double initial_J = eval.evaluate(m.values, nullptr);

    MinimizeResult res =
        minimize_single_frequency(m, omega, datasets[p], grid, geom, m0,
                                  config.forward, config.optimizer, stop);
    m.values = res.m;

    StageResult r;
    r.frequency_hz = f;
    r.iterations = static_cast<int>(res.history.records.size());
    r.inner_nodes = grid.inner_count();
    double total = 0.0;
    for (const auto& rec : res.history.records) total += rec.seconds;
    r.mean_iter_seconds = r.iterations ? total / r.iterations : 0.0;
    r.final_grad_norm = res.final_grad_norm;
    r.final_misfit = res.final_misfit;
    r.initial_misfit = initial_J;
    out.stages.push_back(r);
    out.histories.push_back(res.history);

    if (config.checkpoint_dir) {
      fs::create_directories(stage_dir);
      write_model(stage_dir / "model", velocity_from_slowness(m, m0));
      write_field_f64(stage_dir / "state", m, m0);
      {
        std::ofstream os(stage_dir / "history.jsonl");
        for (const auto& rec : res.history.records)
          append_iteration_jsonl(os, f, rec);
      }
      {
        nlohmann::json j = {{"frequency_hz", r.frequency_hz},
                            {"iterations", r.iterations},
                            {"inner_nodes", r.inner_nodes},
                            {"mean_iter_seconds", r.mean_iter_seconds},
                            {"final_grad_norm", r.final_grad_norm},
                            {"final_misfit", r.final_misfit},
                            {"initial_misfit", r.initial_misfit}};
        std::ofstream os(stage_dir / "stage.json");
        os << j.dump(2) << "\n";
      }
      std::ofstream(stage_dir / "done") << "ok\n";
      write_summary(*config.checkpoint_dir, out.stages);
    }
  }

  out.final_m = m;
  out.final_model = velocity_from_slowness(m, m0);
  if (config.checkpoint_dir) {
    write_summary(*config.checkpoint_dir, out.stages);
    write_model(*config.checkpoint_dir / "final_model", out.final_model);
  }
  return out;
}

}  // namespace fwi
