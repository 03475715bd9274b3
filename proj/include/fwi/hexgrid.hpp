#ifndef FWI_HEXGRID_HPP
#define FWI_HEXGRID_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "fwi/model.hpp"

namespace fwi {

/// Grid-resolution bookkeeping for one frequency.
struct GridSizing {
  double ng = 0.0;          // points per wavelength (NPW)
  double f = 0.0;           // Hz
  double lambda_min = 0.0;  // min(c)/f
  double lambda_mean = 0.0; // mean(c)/f
};

/// Uniform hexagonal (triangular-lattice) node set covering the physical
/// domain [0,width]x[0,depth] plus a PML collar of thickness delta.
///
/// Rows have constant z with vertical spacing h*sqrt(3)/2; odd rows are
/// shifted by h/2. The outermost ring of nodes (any missing lattice
/// neighbor) carries the Dirichlet closure and is neither interior nor PML.
struct HexGrid {
  double h = 0.0;       // lattice spacing
  double row_dz = 0.0;  // h*sqrt(3)/2
  double width = 0.0;   // physical width
  double depth = 0.0;   // physical depth (z_d)
  double delta = 0.0;   // PML collar thickness
  double x0 = 0.0, z0 = 0.0;  // position of node (row 0, col 0)
  int nrows = 0, ncols = 0;

  std::vector<double> x, z;            // node coordinates
  std::vector<std::uint8_t> interior;  // inside the physical domain
  std::vector<std::uint8_t> pml;       // inside the collar, not interior
  std::vector<std::array<int, 6>> nbr; // -1 where the lattice ends

  GridSizing sizing;

  int node_count() const { return static_cast<int>(x.size()); }
  int inner_count() const;  // interior + pml (rows carrying the PDE)
  int node(int row, int col) const { return row * ncols + col; }
  double cell_area() const;  // sqrt(3)/2 * h^2

  // 3-point barycentric interpolation support on the lattice triangle
  // enclosing (px,pz). Weights are non-negative and sum to 1.
  struct Triangle {
    std::array<int, 3> nodes;
    std::array<double, 3> weights;
  };
  Triangle locate(double px, double pz) const;

  bool in_physical(double px, double pz) const;
};

/// Builds the solver grid for one frequency: h = min(c)/(Ng*f),
/// delta = pml_in_wavelengths * mean(c)/f.
HexGrid build_hex_grid(const VelocityModel& model, double f, double ng,
                       double pml_in_wavelengths,
                       std::int64_t node_budget = 5'000'000);

/// Bilinear sample of a model-grid field at every hex node. PML nodes clamp
/// to the nearest model cell (constant extrapolation of edge values).
RVec sample_to_hex(const ModelField& field, const HexGrid& grid,
                   const VelocityModel& model);

/// Exact adjoint of sample_to_hex restricted to interior nodes; PML and
/// Dirichlet nodes contribute zero. Result is tagged Gradient.
ModelField project_to_model(const RVec& node_values, const HexGrid& grid,
                            const VelocityModel& model);

}  // namespace fwi

#endif
