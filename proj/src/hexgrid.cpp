#include "fwi/hexgrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fwi/errors.hpp"

namespace fwi {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

struct Bilinear {
  int idx[4];
  double w[4];
};

// Bilinear weights on the model's cell-centered grid, clamped at the edges
// (constant extrapolation outside the footprint).
Bilinear model_interp(const VelocityModel& model, double px, double pz) {
  double gx = (px - model.origin_x) / model.dx - 0.5;
  double gz = (pz - model.origin_z) / model.dz - 0.5;
  gx = std::clamp(gx, 0.0, static_cast<double>(model.nx - 1));
  gz = std::clamp(gz, 0.0, static_cast<double>(model.nz - 1));
  int ix = std::min(static_cast<int>(std::floor(gx)), model.nx - 2);
  int iz = std::min(static_cast<int>(std::floor(gz)), model.nz - 2);
  double tx = gx - ix;
  double tz = gz - iz;
  Bilinear b;
  b.idx[0] = iz * model.nx + ix;
  b.idx[1] = iz * model.nx + ix + 1;
  b.idx[2] = (iz + 1) * model.nx + ix;
  b.idx[3] = (iz + 1) * model.nx + ix + 1;
  b.w[0] = (1 - tx) * (1 - tz);
  b.w[1] = tx * (1 - tz);
  b.w[2] = (1 - tx) * tz;
  b.w[3] = tx * tz;
  return b;
}

}  // namespace

int HexGrid::inner_count() const {
  int n = 0;
  for (int i = 0; i < node_count(); ++i)
    if (interior[i] || pml[i]) ++n;
  return n;
}

double HexGrid::cell_area() const { return 0.5 * kSqrt3 * h * h; }

bool HexGrid::in_physical(double px, double pz) const {
  const double tol = 1e-9 * h;
  return px >= -tol && px <= width + tol && pz >= -tol && pz <= depth + tol;
}

HexGrid::Triangle HexGrid::locate(double px, double pz) const {
  // Nearest node first; on an equilateral lattice the enclosing triangle is
  // one of the six incident to it.
  int jc = static_cast<int>(std::lround((pz - z0) / row_dz));
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int j = jc - 1; j <= jc + 1; ++j) {
    if (j < 0 || j >= nrows) continue;
    double off = (j % 2) ? 0.5 * h : 0.0;
    int ic = static_cast<int>(std::lround((px - x0 - off) / h));
    for (int i = ic - 1; i <= ic + 1; ++i) {
      if (i < 0 || i >= ncols) continue;
      int p = node(j, i);
      double dx_ = x[p] - px, dz_ = z[p] - pz;
      double d2 = dx_ * dx_ + dz_ * dz_;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = p;
      }
    }
  }
  if (best < 0 || nbr[best][0] < 0)
    throw ValidationError("position outside grid support");

  // Neighbors sorted by angle; consecutive pairs span the six triangles.
  std::array<int, 6> ring = nbr[best];
  std::sort(ring.begin(), ring.end(), [&](int a, int b) {
    return std::atan2(z[a] - z[best], x[a] - x[best]) <
           std::atan2(z[b] - z[best], x[b] - x[best]);
  });

  Triangle out{};
  double best_min_w = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 6; ++k) {
    int a = ring[k], b = ring[(k + 1) % 6];
    double ax = x[a] - x[best], az = z[a] - z[best];
    double bx = x[b] - x[best], bz = z[b] - z[best];
    double det = ax * bz - az * bx;
    if (std::abs(det) < 1e-14 * h * h) continue;
    double qx = px - x[best], qz = pz - z[best];
    double wa = (qx * bz - qz * bx) / det;
    double wb = (ax * qz - az * qx) / det;
    double w0 = 1.0 - wa - wb;
    double mn = std::min({w0, wa, wb});
    if (mn > best_min_w) {
      best_min_w = mn;
      out.nodes = {best, a, b};
      out.weights = {w0, wa, wb};
    }
  }
  if (best_min_w < -1e-9)
    throw ValidationError("position outside grid support");
  // Snap float fuzz so node-exact queries give a single unit weight.
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(out.weights[k]) < 1e-14) out.weights[k] = 0.0;
    if (out.weights[k] < 0.0) out.weights[k] = 0.0;
    sum += out.weights[k];
  }
  for (int k = 0; k < 3; ++k) out.weights[k] /= sum;
  return out;
}

HexGrid build_hex_grid(const VelocityModel& model, double f, double ng,
                       double pml_in_wavelengths, std::int64_t node_budget) {
  model.validate();
  if (!(f > 0.0)) throw ValidationError("frequency must be positive");
  if (!(ng > 2.0)) throw ValidationError("Ng must exceed the Nyquist floor 2");
  if (pml_in_wavelengths < 0.0)
    throw ValidationError("PML thickness cannot be negative");

  HexGrid g;
  g.sizing.ng = ng;
  g.sizing.f = f;
  g.sizing.lambda_min = model.min_c() / f;
  g.sizing.lambda_mean = model.mean_c() / f;
  g.h = g.sizing.lambda_min / ng;
  g.row_dz = 0.5 * kSqrt3 * g.h;
  g.width = model.width();
  g.depth = model.depth();
  g.delta = pml_in_wavelengths * g.sizing.lambda_mean;
  g.x0 = -g.delta - g.h;
  g.z0 = -g.delta - g.row_dz;
  g.ncols =
      static_cast<int>(std::ceil((g.width + g.delta + g.h - g.x0) / g.h)) + 1;
  g.nrows = static_cast<int>(
                std::ceil((g.depth + g.delta + g.row_dz - g.z0) / g.row_dz)) +
            1;

  std::int64_t n64 = static_cast<std::int64_t>(g.nrows) * g.ncols;
  if (n64 > node_budget)
    throw ValidationError("infeasible-resolution: grid would need " +
                          std::to_string(n64) + " nodes (budget " +
                          std::to_string(node_budget) + ")");
  int n = static_cast<int>(n64);
  g.x.resize(n);
  g.z.resize(n);
  g.interior.assign(n, 0);
  g.pml.assign(n, 0);
  g.nbr.assign(n, {-1, -1, -1, -1, -1, -1});

  for (int j = 0; j < g.nrows; ++j) {
    double off = (j % 2) ? 0.5 * g.h : 0.0;
    for (int i = 0; i < g.ncols; ++i) {
      int p = g.node(j, i);
      g.x[p] = g.x0 + i * g.h + off;
      g.z[p] = g.z0 + j * g.row_dz;
    }
  }

  const double tol = 1e-9 * g.h;
  for (int j = 0; j < g.nrows; ++j) {
    for (int i = 0; i < g.ncols; ++i) {
      int p = g.node(j, i);
      // Lattice neighbors: same row +-1; diagonal columns depend on parity.
      int dlo = (j % 2) ? 0 : -1;
      std::array<std::pair<int, int>, 6> cand = {{{j, i - 1},
                                                  {j, i + 1},
                                                  {j - 1, i + dlo},
                                                  {j - 1, i + dlo + 1},
                                                  {j + 1, i + dlo},
                                                  {j + 1, i + dlo + 1}}};
      bool full = true;
      std::array<int, 6> nb;
      for (int k = 0; k < 6; ++k) {
        auto [jj, ii] = cand[k];
        if (jj < 0 || jj >= g.nrows || ii < 0 || ii >= g.ncols) {
          full = false;
          nb[k] = -1;
        } else {
          nb[k] = g.node(jj, ii);
        }
      }
      if (!full) continue;  // Dirichlet closure ring
      g.nbr[p] = nb;
      double px = g.x[p], pz = g.z[p];
      bool in_phys = px >= -tol && px <= g.width + tol && pz >= -tol &&
                     pz <= g.depth + tol;
      bool in_collar = px >= -g.delta - tol && px <= g.width + g.delta + tol &&
                       pz >= -g.delta - tol && pz <= g.depth + g.delta + tol;
      if (in_phys)
        g.interior[p] = 1;
      else if (in_collar)
        g.pml[p] = 1;
      else
        g.nbr[p] = {-1, -1, -1, -1, -1, -1};  // outside collar: Dirichlet
    }
  }
  return g;
}

RVec sample_to_hex(const ModelField& field, const HexGrid& grid,
                   const VelocityModel& model) {
  field.validate();
  if (field.nz != model.nz || field.nx != model.nx)
    throw ValidationError("field does not match the model grid");
  RVec out(grid.node_count());
  for (int p = 0; p < grid.node_count(); ++p) {
    Bilinear b = model_interp(model, grid.x[p], grid.z[p]);
    double v = 0.0;
    for (int k = 0; k < 4; ++k) v += b.w[k] * field.values[b.idx[k]];
    out[p] = v;
  }
  return out;
}

ModelField project_to_model(const RVec& node_values, const HexGrid& grid,
                            const VelocityModel& model) {
  if (node_values.size() != grid.node_count())
    throw ValidationError("node vector does not match the grid");
  ModelField out;
  out.nz = model.nz;
  out.nx = model.nx;
  out.quantity = Quantity::Gradient;
  out.values = RVec::Zero(static_cast<Eigen::Index>(model.nz) * model.nx);
  for (int p = 0; p < grid.node_count(); ++p) {
    if (!grid.interior[p] && !grid.pml[p]) continue;
    Bilinear b = model_interp(model, grid.x[p], grid.z[p]);
    for (int k = 0; k < 4; ++k) out.values[b.idx[k]] += b.w[k] * node_values[p];
  }
  return out;
}

}  // namespace fwi
