#include "fwi/model.hpp"

#include <cmath>

#include "fwi/errors.hpp"

namespace fwi {

void VelocityModel::validate() const {
  if (nz < 2 || nx < 2)
    throw ValidationError("velocity model needs nz >= 2 and nx >= 2");
  if (!(dz > 0.0) || !(dx > 0.0))
    throw ValidationError("velocity model spacing must be positive");
  if (c.size() != static_cast<Eigen::Index>(nz) * nx)
    throw ValidationError("velocity model payload size mismatch");
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!std::isfinite(c[i]) || c[i] <= 0.0)
      throw ValidationError("velocity values must be finite and positive");
  }
}

void ModelField::validate() const {
  if (values.size() != static_cast<Eigen::Index>(nz) * nx)
    throw ValidationError("model field shape mismatch");
  if (quantity == Quantity::SlownessSquared) {
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (!(values[i] > 0.0))
        throw ValidationError("slowness-squared field must be positive");
  }
}

ModelField slowness_squared(const VelocityModel& model) {
  model.validate();
  ModelField m;
  m.nz = model.nz;
  m.nx = model.nx;
  m.quantity = Quantity::SlownessSquared;
  m.values = model.c.array().square().inverse();
  return m;
}

VelocityModel velocity_from_slowness(const ModelField& m,
                                     const VelocityModel& like) {
  if (m.nz != like.nz || m.nx != like.nx)
    throw ValidationError("slowness field does not match the model grid");
  VelocityModel out = like;
  out.c = m.values.array().sqrt().inverse();
  out.validate();
  return out;
}

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Velocity: return "velocity";
    case Quantity::SlownessSquared: return "slowness-squared";
    case Quantity::Gradient: return "gradient";
  }
  return "unknown";
}

}  // namespace fwi
