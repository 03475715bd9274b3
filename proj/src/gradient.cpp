#include "fwi/gradient.hpp"

#include <cmath>

#include "fwi/errors.hpp"

namespace fwi {

MisfitReport misfit(const FrequencyDataset& observed,
                    const FrequencyDataset& predicted) {
  if (observed.omega != predicted.omega)
    throw ValidationError("misfit: frequency mismatch");
  if (observed.data.rows() != predicted.data.rows() ||
      observed.data.cols() != predicted.data.cols())
    throw ValidationError("misfit: shape mismatch");
  MisfitReport rep;
  rep.omega = observed.omega;
  rep.residual = observed.data - predicted.data;
  rep.value = 0.5 * rep.residual.squaredNorm();
  return rep;
}

ModelField adjoint_gradient(const MisfitReport& report, const HexGrid& grid,
                            const AcquisitionGeometry& geom,
                            const Eigen::MatrixXcd& wavefields,
                            const Factorization& fac, double omega,
                            const VelocityModel& model) {
  const int ns = static_cast<int>(geom.sources.size());
  const int nr = static_cast<int>(geom.receivers.size());
  if (wavefields.cols() != ns || wavefields.rows() != grid.node_count())
    throw ValidationError("wavefields do not match geometry/grid");
  if (fac.node_count() != grid.node_count())
    throw ValidationError("factorization does not match the grid");
  if (report.residual.rows() != ns || report.residual.cols() != nr)
    throw ValidationError("residual does not match the geometry");

  // Receiver injection = transpose of the sampling weights; the adjoint
  // system is the conjugate-transpose of the forward factorization.
  Eigen::MatrixXcd adj_rhs = Eigen::MatrixXcd::Zero(grid.node_count(), ns);
  for (int r = 0; r < nr; ++r) {
    HexGrid::Triangle tri =
        grid.locate(geom.receivers[r].first, geom.receivers[r].second);
    for (int k = 0; k < 3; ++k) {
      if (tri.weights[k] == 0.0) continue;
      for (int s = 0; s < ns; ++s)
        adj_rhs(tri.nodes[k], s) += tri.weights[k] * report.residual(s, r);
    }
  }
  Eigen::MatrixXcd lambdas = fac.solve_batch_adjoint(adj_rhs);
  if (!lambdas.allFinite())
    throw NumericalError("adjoint wavefield contains non-finite values");

  // g_p = -omega^2 Re(sum_s sxsz_p u_{p,s} conj(lambda_{p,s})) over all
  // PDE rows. The collar carries its complex stretch factor so the result
  // is the exact gradient of the discrete misfit; fixed source order keeps
  // the reduction bitwise reproducible.
  const CVec& sxsz = fac.stretch_product();
  RVec g_node = RVec::Zero(grid.node_count());
  for (int s = 0; s < ns; ++s) {
    for (int p = 0; p < grid.node_count(); ++p) {
      if (!grid.interior[p] && !grid.pml[p]) continue;
      g_node[p] -= omega * omega *
                   (sxsz[p] * wavefields(p, s) * std::conj(lambdas(p, s)))
                       .real();
    }
  }
  return project_to_model(g_node, grid, model);
}

MisfitGradientEvaluator::MisfitGradientEvaluator(
    const HexGrid& grid, const AcquisitionGeometry& geom,
    const FrequencyDataset& observed, const VelocityModel& model_like,
    const ForwardConfig& cfg)
    : grid_(grid),
      geom_(geom),
      observed_(observed),
      model_(model_like),
      cfg_(cfg) {}

double MisfitGradientEvaluator::evaluate(const RVec& m, RVec* grad) const {
  ModelField mf;
  mf.nz = model_.nz;
  mf.nx = model_.nx;
  mf.quantity = Quantity::SlownessSquared;
  mf.values = m;
  RVec m_nodes = sample_to_hex(mf, grid_, model_);
  std::shared_ptr<Factorization> fac;
  ForwardResult fwd =
      forward_map(m_nodes, observed_.omega, geom_, grid_, cfg_, &fac);
  MisfitReport rep = misfit(observed_, fwd.data);
  if (grad) {
    ModelField g = adjoint_gradient(rep, grid_, geom_, fwd.wavefields, *fac,
                                    observed_.omega, model_);
    *grad = g.values;
  }
  return rep.value;
}

std::vector<FdCheckRow> directional_misfit_check(
    const MisfitGradientEvaluator& eval, const RVec& m, const RVec& direction,
    const std::vector<double>& steps) {
  RVec grad;
  eval.evaluate(m, &grad);
  const double adj = grad.dot(direction);
  std::vector<FdCheckRow> rows;
  rows.reserve(steps.size());
  for (double hstep : steps) {
    double jp = eval.evaluate(m + hstep * direction, nullptr);
    double jm = eval.evaluate(m - hstep * direction, nullptr);
    double fd = (jp - jm) / (2.0 * hstep);
    double denom = std::max(std::abs(fd), std::abs(adj));
    double rel = denom > 0.0 ? std::abs(fd - adj) / denom : 0.0;
    rows.push_back({hstep, fd, adj, rel});
  }
  return rows;
}

}  // namespace fwi
