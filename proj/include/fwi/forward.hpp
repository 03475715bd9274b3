#ifndef FWI_FORWARD_HPP
#define FWI_FORWARD_HPP

#include <optional>
#include <vector>

#include "fwi/helmholtz.hpp"

namespace fwi {

struct AcquisitionGeometry {
  std::vector<std::pair<double, double>> sources;    // (x, z) meters
  std::vector<std::pair<double, double>> receivers;  // (x, z) meters

  // Throws ValidationError on empty lists, duplicates, or positions
  // outside the physical domain.
  void validate(const HexGrid& grid) const;
};

/// Uniform line of positions at fixed depth: count points spaced `spacing`
/// apart, the first at `first_offset` from the left edge.
std::vector<std::pair<double, double>> line_positions(int count,
                                                      double spacing,
                                                      double first_offset,
                                                      double depth);

enum class Provenance { Observed, Predicted };

/// Complex data matrix d_omega indexed (source, receiver).
struct FrequencyDataset {
  double omega = 0.0;
  Eigen::MatrixXcd data;  // n_sources x n_receivers
  Provenance provenance = Provenance::Predicted;

  double frequency_hz() const;
  void validate(const AcquisitionGeometry& geom) const;
};

/// Barycentric sample of a node field at each receiver; linear in the field.
CVec sample_receivers(const CVec& field,
                      const std::vector<std::pair<double, double>>& receivers,
                      const HexGrid& grid);

struct ForwardResult {
  FrequencyDataset data;
  Eigen::MatrixXcd wavefields;  // node_count x n_sources
  SolveStats stats;
};

struct ForwardConfig {
  ShapeRule shape;          // stencil shape rule; default tuned
  double pml_a0 = 1.79;     // sigma0 = 2*pi*f*a0
  ForwardConfig();
};

/// F_omega(m): assemble + factorize once, one solve per source, sample all
/// receivers. Also returns the wavefields and the factorization (the
/// gradient reuses both).
ForwardResult forward_map(const RVec& m_nodes, double omega,
                          const AcquisitionGeometry& geom, const HexGrid& grid,
                          const ForwardConfig& cfg,
                          std::shared_ptr<Factorization>* fac_out = nullptr);

struct NoiseSpec {
  double snr_db = 0.0;  // signal-to-noise ratio; <= 0 disables
  std::uint64_t seed = 0;
};

/// Synthetic observed data over a frequency schedule on the true model.
/// One dataset per frequency, grid rebuilt per frequency by the sizing rule.
std::vector<FrequencyDataset> generate_observed(
    const VelocityModel& true_model, const std::vector<double>& schedule_hz,
    const AcquisitionGeometry& geom, double ng, double pml_wavelengths,
    const ForwardConfig& cfg, const std::optional<NoiseSpec>& noise = {});

}  // namespace fwi

#endif
