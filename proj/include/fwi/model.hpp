#ifndef FWI_MODEL_HPP
#define FWI_MODEL_HPP

#include <Eigen/Dense>
#include <string>

namespace fwi {

using RVec = Eigen::VectorXd;

/// Velocity field c(x,z) in m/s on a uniform rectangular grid.
/// Values are cell-centered: entry (iz,ix) sits at
/// (origin_x + (ix+1/2)*dx, origin_z + (iz+1/2)*dz), row-major in depth-major
/// order, so the model footprint is nx*dx wide and nz*dz deep.
struct VelocityModel {
  int nz = 0;
  int nx = 0;
  double dz = 0.0;
  double dx = 0.0;
  double origin_x = 0.0;
  double origin_z = 0.0;
  RVec c;  // nz*nx entries, m/s

  double width() const { return nx * dx; }
  double depth() const { return nz * dz; }
  double& at(int iz, int ix) { return c[iz * nx + ix]; }
  double at(int iz, int ix) const { return c[iz * nx + ix]; }

  double min_c() const { return c.minCoeff(); }
  double max_c() const { return c.maxCoeff(); }
  double mean_c() const { return c.mean(); }

  // Throws ValidationError when shape/spacing/values are invalid.
  void validate() const;
};

enum class Quantity { Velocity, SlownessSquared, Gradient };

/// Scalar field aligned 1:1 with a VelocityModel's grid.
struct ModelField {
  int nz = 0;
  int nx = 0;
  Quantity quantity = Quantity::Velocity;
  RVec values;

  void validate() const;
};

/// m = c^-2 on the model grid.
ModelField slowness_squared(const VelocityModel& model);

/// c = 1/sqrt(m); m must be strictly positive.
VelocityModel velocity_from_slowness(const ModelField& m,
                                     const VelocityModel& like);

std::string quantity_name(Quantity q);

}  // namespace fwi

#endif
