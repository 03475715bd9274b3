#include "fwi/helmholtz.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "fwi/errors.hpp"

namespace fwi {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

PmlConfig PmlConfig::for_frequency(double f_hz, double delta, double a0) {
  PmlConfig cfg;
  cfg.delta = delta;
  cfg.omega = 2.0 * M_PI * f_hz;
  cfg.sigma0 = 2.0 * M_PI * f_hz * a0;
  return cfg;
}

std::pair<Complex, Complex> pml_stretch(double px, double pz,
                                        const HexGrid& grid,
                                        const PmlConfig& cfg) {
  if (cfg.delta <= 0.0 || cfg.omega <= 0.0) return {Complex(1.0), Complex(1.0)};
  auto one_axis = [&](double d) {
    if (d <= 0.0) return Complex(1.0);
    double ratio = std::min(d, cfg.delta) / cfg.delta;
    return Complex(1.0, cfg.sigma0 * std::pow(ratio, cfg.exponent) / cfg.omega);
  };
  double dx = std::max(-px, px - grid.width);
  double dz = std::max(-pz, pz - grid.depth);
  return {one_axis(dx), one_axis(dz)};
}

HelmholtzOperator assemble(const HexGrid& grid, const RVec& m_nodes,
                           double omega, const PmlConfig& cfg,
                           const ShapeRule& shape) {
  const int n = grid.node_count();
  if (m_nodes.size() != n)
    throw ValidationError("m vector does not match the grid");
  for (int i = 0; i < n; ++i)
    if (!(m_nodes[i] > 0.0))
      throw ValidationError("slowness-squared must be positive everywhere");
  if (omega < 0.0) throw ValidationError("omega cannot be negative");

  HelmholtzOperator op;
  op.omega = omega;
  op.grid = &grid;
  op.m_nodes = m_nodes;
  op.pml = cfg;
  op.stretch_product = CVec::Ones(n);

  // One stencil for the whole grid, tuned at the sizing wavenumber
  // 2*pi/lambda_min (the largest kh present). Keeping the weights
  // independent of m makes dH/dm exactly the mass term, which the adjoint
  // gradient relies on.
  double k_ref = 0.0;
  if (omega > 0.0) {
    k_ref = grid.sizing.lambda_min > 0.0
                ? 2.0 * M_PI / grid.sizing.lambda_min
                : omega * std::sqrt(m_nodes.maxCoeff());
  }
  const StencilWeights w = rbf_fd_weights(shape(k_ref, grid.h), grid.h);

  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 7);
  for (int p = 0; p < n; ++p) {
    if (!grid.interior[p] && !grid.pml[p]) {
      trips.emplace_back(p, p, Complex(1.0));
      continue;
    }
    auto [sx, sz] = pml_stretch(grid.x[p], grid.z[p], grid, cfg);
    op.stretch_product[p] = sx * sz;
    // Stretched Laplacian in multiplied-through form: per-edge factor
    // cos^2 * (sz/sx) + sin^2 * (sx/sz) with stretches averaged at the edge
    // midpoint; the center weight scales with the factor sum so constants
    // stay annihilated.
    Complex gsum(0.0);
    for (int k = 0; k < 6; ++k) {
      int q = grid.nbr[p][k];
      double mx = 0.5 * (grid.x[p] + grid.x[q]);
      double mz = 0.5 * (grid.z[p] + grid.z[q]);
      auto [sxm, szm] = pml_stretch(mx, mz, grid, cfg);
      double ddx = (grid.x[q] - grid.x[p]) / grid.h;
      double ddz = (grid.z[q] - grid.z[p]) / grid.h;
      Complex g = ddx * ddx * (szm / sxm) + ddz * ddz * (sxm / szm);
      gsum += g;
      trips.emplace_back(p, q, -w.neighbor * g);
    }
    Complex diag = -(w.center / 6.0) * gsum -
                   omega * omega * m_nodes[p] * op.stretch_product[p];
    trips.emplace_back(p, p, diag);
  }
  op.H.resize(n, n);
  op.H.setFromTriplets(trips.begin(), trips.end());
  op.H.makeCompressed();
  return op;
}

CVec point_source_rhs(const HexGrid& grid, double xs, double zs) {
  if (!grid.in_physical(xs, zs))
    throw ValidationError("source position outside the physical domain");
  HexGrid::Triangle tri = grid.locate(xs, zs);
  CVec rhs = CVec::Zero(grid.node_count());
  const double inv_area = 1.0 / grid.cell_area();
  for (int k = 0; k < 3; ++k)
    if (tri.weights[k] > 0.0)
      rhs[tri.nodes[k]] = tri.weights[k] * inv_area;
  return rhs;
}

Factorization::Factorization(const HelmholtzOperator& op) : n_(op.H.rows()) {
  auto t0 = std::chrono::steady_clock::now();
  stretch_product_ = op.stretch_product.size() == n_
                         ? op.stretch_product
                         : CVec::Ones(n_);
  lu_ = std::make_shared<Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>>>();
  lu_->compute(op.H);
  if (lu_->info() != Eigen::Success)
    throw NumericalError("factorization-failure: Helmholtz matrix is singular "
                         "or numerically rank-deficient");
  stats_.nodes = n_;
  stats_.nonzeros = op.H.nonZeros();
  stats_.factor_seconds = seconds_since(t0);
}

CVec Factorization::solve(const CVec& rhs) const {
  if (rhs.size() != n_) throw ValidationError("rhs length mismatch");
  CVec x = lu_->solve(rhs);
  if (lu_->info() != Eigen::Success)
    throw NumericalError("factorization-failure: solve did not complete");
  return x;
}

CVec Factorization::solve_adjoint(const CVec& rhs) const {
  if (rhs.size() != n_) throw ValidationError("rhs length mismatch");
  CVec x = lu_->adjoint().solve(rhs);
  return x;
}

Eigen::MatrixXcd Factorization::solve_batch(const Eigen::MatrixXcd& rhs) const {
  if (rhs.rows() != n_) throw ValidationError("rhs length mismatch");
  auto t0 = std::chrono::steady_clock::now();
  Eigen::MatrixXcd out(rhs.rows(), rhs.cols());
  for (Eigen::Index c = 0; c < rhs.cols(); ++c) out.col(c) = solve(rhs.col(c));
  if (rhs.cols() > 0)
    stats_.solve_seconds_per_rhs = seconds_since(t0) / rhs.cols();
  return out;
}

Eigen::MatrixXcd Factorization::solve_batch_adjoint(
    const Eigen::MatrixXcd& rhs) const {
  if (rhs.rows() != n_) throw ValidationError("rhs length mismatch");
  Eigen::MatrixXcd out(rhs.rows(), rhs.cols());
  for (Eigen::Index c = 0; c < rhs.cols(); ++c)
    out.col(c) = solve_adjoint(rhs.col(c));
  return out;
}

}  // namespace fwi
