#ifndef FWI_MULTISCALE_HPP
#define FWI_MULTISCALE_HPP

#include <filesystem>
#include <optional>

#include "fwi/optimize.hpp"

namespace fwi {

/// Strictly increasing frequency list with shared sizing and stopping
/// parameters (per-stage overrides by index).
struct FrequencySchedule {
  std::vector<double> frequencies_hz;
  double ng = 8.5;
  double pml_wavelengths = 1.0;
  StoppingCriteria stop;
  std::vector<std::pair<int, StoppingCriteria>> stop_overrides;

  void validate() const;
  StoppingCriteria stop_for(int stage) const;
};

/// omega_0 = 2*pi / (z_d * sqrt(min m0)); equivalently f0 = max(c0)/z_d.
double initial_frequency(const ModelField& m0, double z_d);

/// Depth-linear velocity from c_top to c_bottom (cell centers), optionally
/// overwriting the top rows with known shallow values (e.g. a water layer).
struct KnownShallow {
  int rows = 0;
  RVec values;  // rows*nx entries, or 1 entry broadcast
};
VelocityModel linear_initial_model(double c_top, double c_bottom,
                                   const VelocityModel& like,
                                   const std::optional<KnownShallow>& shallow = {});

struct StageResult {
  double frequency_hz = 0.0;
  int iterations = 0;
  int inner_nodes = 0;
  double mean_iter_seconds = 0.0;
  double final_grad_norm = 0.0;
  double final_misfit = 0.0;
  double initial_misfit = 0.0;
};

struct MultiscaleResult {
  ModelField final_m;                  // slowness-squared, model grid
  VelocityModel final_model;           // velocity view of final_m
  std::vector<StageResult> stages;
  std::vector<OptimizerHistory> histories;
};

struct MultiscaleConfig {
  ForwardConfig forward;
  OptimizerConfig optimizer;
  // When set, per-stage checkpoints (model + history + state) and a
  // summary.csv land here; existing completed stages are reused (restart).
  std::optional<std::filesystem::path> checkpoint_dir;
};

/// Algorithm: for each scheduled frequency, rebuild the hex grid, invert
/// the matching dataset starting from the previous stage's model, and carry
/// the result forward. The model iterate lives on the rectangular model
/// grid throughout; each stage samples it onto its own hex grid.
MultiscaleResult run_multiscale(const VelocityModel& m0,
                                const FrequencySchedule& schedule,
                                const std::vector<FrequencyDataset>& datasets,
                                const AcquisitionGeometry& geom,
                                const MultiscaleConfig& config);

}  // namespace fwi

#endif
