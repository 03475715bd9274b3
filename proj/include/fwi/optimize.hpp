#ifndef FWI_OPTIMIZE_HPP
#define FWI_OPTIMIZE_HPP

#include <deque>
#include <functional>
#include <vector>

#include "fwi/gradient.hpp"

namespace fwi {

/// Three-condition loop guard: run while k < maxiter and ||g|| > tol_g and
/// J > tol_J.
struct StoppingCriteria {
  double tol_g = 1e-7;
  double tol_J = 1e-16;
  int maxiter = 800;
};

enum class BBVariant { BB1, BB2 };

/// Barzilai-Borwein step length from s = m_k - m_{k-1}, y = g_k - g_{k-1}.
/// BB1 = (s.s)/(s.y), BB2 = (s.y)/(y.y). Non-positive curvature or a
/// non-finite value returns `fallback`; result clamped to [alpha_min,
/// alpha_max].
double bb_step(const RVec& s, const RVec& y, BBVariant variant,
               double fallback, double alpha_min = 1e-12,
               double alpha_max = 1e+12);

struct IterationRecord {
  int k = 0;
  double misfit = 0.0;
  double grad_norm = 0.0;
  double alpha = 0.0;
  double seconds = 0.0;
};

/// Curvature-guarded (s, y) pair store plus per-iteration records.
struct OptimizerHistory {
  int memory = 10;
  std::deque<std::pair<RVec, RVec>> pairs;  // (s, y), newest at back
  std::vector<IterationRecord> records;
  double best_misfit = std::numeric_limits<double>::infinity();
  RVec best_model;

  // Discards pairs with s.y <= 0 and trims to `memory`.
  void push_pair(const RVec& s, const RVec& y);
};

/// Two-loop recursion with gamma = (s.y)/(y.y) initial scaling; empty
/// history returns -g.
RVec lbfgs_direction(const OptimizerHistory& history, const RVec& g);

struct BoundsConstraint {
  double m_min = 0.0;
  double m_max = 0.0;

  static BoundsConstraint from_velocity(double c_min, double c_max);
  void clip(RVec& m) const;
  bool feasible(const RVec& m) const;
};

enum class OptMethod { BB, LBFGS };

struct OptimizerConfig {
  OptMethod method = OptMethod::BB;
  BBVariant bb_variant = BBVariant::BB1;
  int lbfgs_memory = 10;
  double seed_step_fraction = 1e-2;  // alpha_0 = tau*||m0||/||g0||
  double armijo_c = 1e-4;
  int max_backtracks = 30;
  BoundsConstraint bounds;
};

/// Abstract objective so the loop is testable on closed-form quadratics.
using Objective = std::function<double(const RVec&, RVec*)>;

struct MinimizeResult {
  RVec m;
  OptimizerHistory history;
  double final_misfit = 0.0;
  double final_grad_norm = 0.0;
};

MinimizeResult minimize(const Objective& objective, const RVec& m0,
                        const OptimizerConfig& cfg,
                        const StoppingCriteria& stop);

/// Single-frequency inversion: wraps the misfit/gradient chain into the
/// generic loop. m_init is slowness-squared on the model grid.
MinimizeResult minimize_single_frequency(const ModelField& m_init,
                                         double omega,
                                         const FrequencyDataset& observed,
                                         const HexGrid& grid,
                                         const AcquisitionGeometry& geom,
                                         const VelocityModel& model_like,
                                         const ForwardConfig& fwd_cfg,
                                         const OptimizerConfig& cfg,
                                         const StoppingCriteria& stop);

}  // namespace fwi

#endif
