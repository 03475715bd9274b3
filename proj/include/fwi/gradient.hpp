#ifndef FWI_GRADIENT_HPP
#define FWI_GRADIENT_HPP

#include "fwi/forward.hpp"

namespace fwi {

struct MisfitReport {
  double value = 0.0;            // J_omega = 1/2 sum |d - F|^2
  Eigen::MatrixXcd residual;     // d - F(m), n_sources x n_receivers
  double gradient_norm = 0.0;    // filled by callers that also computed g
  double omega = 0.0;
};

/// Least-squares misfit between observed and predicted data at one omega.
MisfitReport misfit(const FrequencyDataset& observed,
                    const FrequencyDataset& predicted);

/// Adjoint-state gradient of J_omega with respect to the model-grid m.
/// One adjoint solve per source against the shared factorization;
/// accumulation on interior nodes only, then projected to the model grid.
ModelField adjoint_gradient(const MisfitReport& report, const HexGrid& grid,
                            const AcquisitionGeometry& geom,
                            const Eigen::MatrixXcd& wavefields,
                            const Factorization& fac, double omega,
                            const VelocityModel& model);

/// Bundles the full J/grad evaluation chain for one frequency so the
/// optimizer (and finite-difference checks) see a plain objective.
class MisfitGradientEvaluator {
public:
  MisfitGradientEvaluator(const HexGrid& grid, const AcquisitionGeometry& geom,
                          const FrequencyDataset& observed,
                          const VelocityModel& model_like,
                          const ForwardConfig& cfg);

  // m: slowness-squared on the model grid. grad may be null.
  double evaluate(const RVec& m, RVec* grad) const;

  const HexGrid& grid() const { return grid_; }

private:
  const HexGrid& grid_;
  const AcquisitionGeometry& geom_;
  const FrequencyDataset& observed_;
  const VelocityModel& model_;
  ForwardConfig cfg_;
};

struct FdCheckRow {
  double step;
  double fd_derivative;
  double adjoint_derivative;
  double relative_error;
};

/// Central finite differences of J along `direction` versus the adjoint
/// directional derivative, over a sweep of step sizes. The classic V-curve;
/// its minimum is the agreement figure of merit.
std::vector<FdCheckRow> directional_misfit_check(
    const MisfitGradientEvaluator& eval, const RVec& m, const RVec& direction,
    const std::vector<double>& steps);

}  // namespace fwi

#endif
