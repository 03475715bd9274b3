#ifndef FWI_HELMHOLTZ_HPP
#define FWI_HELMHOLTZ_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <complex>
#include <memory>
#include <vector>

#include "fwi/hexgrid.hpp"
#include "fwi/stencil.hpp"

namespace fwi {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using SparseC = Eigen::SparseMatrix<Complex>;

/// Complex coordinate-stretching profile sigma(d) = sigma0*(d/delta)^p
/// inside the collar; s = 1 + i*sigma/omega.
struct PmlConfig {
  double delta = 0.0;
  int exponent = 2;
  double sigma0 = 0.0;
  double omega = 0.0;

  // Classical tuning sigma0 = 2*pi*f*a0.
  static PmlConfig for_frequency(double f_hz, double delta, double a0 = 1.79);
};

/// Stretch factors (s_x, s_z) at a position; exactly (1,1) in the physical
/// interior. omega <= 0 disables stretching (pure Laplacian limit).
std::pair<Complex, Complex> pml_stretch(double px, double pz,
                                        const HexGrid& grid,
                                        const PmlConfig& cfg);

/// Discrete PML-damped Helmholtz operator H = -Lap_s - omega^2 m sx sz on
/// the hex grid; Dirichlet identity rows on the outer closure.
struct HelmholtzOperator {
  SparseC H;
  double omega = 0.0;
  const HexGrid* grid = nullptr;
  RVec m_nodes;
  PmlConfig pml;
  // s_x*s_z per node; dH/dm = -omega^2 * diag(stretch_product).
  CVec stretch_product;
};

HelmholtzOperator assemble(const HexGrid& grid, const RVec& m_nodes,
                           double omega, const PmlConfig& cfg,
                           const ShapeRule& shape);

/// Discrete delta at x_s: barycentric weights over the enclosing lattice
/// triangle, scaled by 1/cell_area so entries sum to 1/cell_area.
CVec point_source_rhs(const HexGrid& grid, double xs, double zs);

/// Per-solve cost record, serializable as one JSON line.
struct SolveStats {
  int nodes = 0;
  long long nonzeros = 0;
  double factor_seconds = 0.0;
  double solve_seconds_per_rhs = 0.0;
};

/// Sparse LU of H, reusable over many right-hand sides, with adjoint
/// (conjugate-transpose) solves for the adjoint-state method.
class Factorization {
public:
  explicit Factorization(const HelmholtzOperator& op);

  CVec solve(const CVec& rhs) const;
  CVec solve_adjoint(const CVec& rhs) const;

  /// One wavefield per column; order-independent.
  Eigen::MatrixXcd solve_batch(const Eigen::MatrixXcd& rhs) const;
  Eigen::MatrixXcd solve_batch_adjoint(const Eigen::MatrixXcd& rhs) const;

  int node_count() const { return n_; }
  const SolveStats& stats() const { return stats_; }

  /// s_x*s_z per node, captured at assembly; ones if the operator carried
  /// no stretch information. The gradient needs it for dH/dm.
  const CVec& stretch_product() const { return stretch_product_; }

private:
  int n_ = 0;
  mutable SolveStats stats_;  // solve timing updated by solve_batch
  CVec stretch_product_;
  std::shared_ptr<Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>>> lu_;
};

}  // namespace fwi

#endif
