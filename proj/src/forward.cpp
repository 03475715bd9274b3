#include "fwi/forward.hpp"

#include <cmath>
#include <random>
#include <set>

#include "fwi/errors.hpp"

namespace fwi {

ForwardConfig::ForwardConfig() : shape(tuned_shape()) {}

void AcquisitionGeometry::validate(const HexGrid& grid) const {
  if (sources.empty() || receivers.empty())
    throw ValidationError("geometry needs at least one source and receiver");
  auto check = [&](const std::vector<std::pair<double, double>>& pts,
                   const char* what) {
    std::set<std::pair<double, double>> seen;
    for (const auto& p : pts) {
      if (!grid.in_physical(p.first, p.second))
        throw ValidationError(std::string(what) + " outside physical domain");
      if (!seen.insert(p).second)
        throw ValidationError(std::string("duplicate ") + what + " position");
    }
  };
  check(sources, "source");
  check(receivers, "receiver");
}

std::vector<std::pair<double, double>> line_positions(int count, double spacing,
                                                      double first_offset,
                                                      double depth) {
  if (count <= 0) throw ValidationError("position count must be positive");
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.emplace_back(first_offset + i * spacing, depth);
  return out;
}

double FrequencyDataset::frequency_hz() const { return omega / (2.0 * M_PI); }

void FrequencyDataset::validate(const AcquisitionGeometry& geom) const {
  if (data.rows() != static_cast<Eigen::Index>(geom.sources.size()) ||
      data.cols() != static_cast<Eigen::Index>(geom.receivers.size()))
    throw ValidationError("dataset dimensions do not match the geometry");
  if (!data.allFinite())
    throw ValidationError("dataset contains non-finite entries");
}

CVec sample_receivers(const CVec& field,
                      const std::vector<std::pair<double, double>>& receivers,
                      const HexGrid& grid) {
  if (field.size() != grid.node_count())
    throw ValidationError("field length does not match the grid");
  CVec out(receivers.size());
  for (std::size_t r = 0; r < receivers.size(); ++r) {
    if (!grid.in_physical(receivers[r].first, receivers[r].second))
      throw ValidationError("receiver outside physical domain");
    HexGrid::Triangle tri = grid.locate(receivers[r].first, receivers[r].second);
    Complex v(0.0);
    for (int k = 0; k < 3; ++k) v += tri.weights[k] * field[tri.nodes[k]];
    out[r] = v;
  }
  return out;
}

ForwardResult forward_map(const RVec& m_nodes, double omega,
                          const AcquisitionGeometry& geom, const HexGrid& grid,
                          const ForwardConfig& cfg,
                          std::shared_ptr<Factorization>* fac_out) {
  geom.validate(grid);
  double f = omega / (2.0 * M_PI);
  PmlConfig pml = PmlConfig::for_frequency(f, grid.delta, cfg.pml_a0);
  HelmholtzOperator H = assemble(grid, m_nodes, omega, pml, cfg.shape);
  auto fac = std::make_shared<Factorization>(H);

  const int ns = static_cast<int>(geom.sources.size());
  Eigen::MatrixXcd rhs(grid.node_count(), ns);
  for (int s = 0; s < ns; ++s)
    rhs.col(s) = point_source_rhs(grid, geom.sources[s].first,
                                  geom.sources[s].second);
  Eigen::MatrixXcd fields = fac->solve_batch(rhs);
  if (!fields.allFinite())
    throw NumericalError("forward wavefield contains non-finite values");

  ForwardResult res;
  res.data.omega = omega;
  res.data.provenance = Provenance::Predicted;
  res.data.data.resize(ns, static_cast<Eigen::Index>(geom.receivers.size()));
  for (int s = 0; s < ns; ++s)
    res.data.data.row(s) = sample_receivers(fields.col(s), geom.receivers, grid);
  res.wavefields = std::move(fields);
  res.stats = fac->stats();
  if (fac_out) *fac_out = std::move(fac);
  return res;
}

std::vector<FrequencyDataset> generate_observed(
    const VelocityModel& true_model, const std::vector<double>& schedule_hz,
    const AcquisitionGeometry& geom, double ng, double pml_wavelengths,
    const ForwardConfig& cfg, const std::optional<NoiseSpec>& noise) {
  if (schedule_hz.empty()) throw ValidationError("empty frequency schedule");
  for (std::size_t i = 0; i < schedule_hz.size(); ++i) {
    if (!(schedule_hz[i] > 0.0))
      throw ValidationError("schedule frequencies must be positive");
    if (i > 0 && !(schedule_hz[i] > schedule_hz[i - 1]))
      throw ValidationError("schedule must be strictly increasing");
  }
  ModelField m = slowness_squared(true_model);
  std::vector<FrequencyDataset> out;
  out.reserve(schedule_hz.size());
  for (double f : schedule_hz) {
    HexGrid grid = build_hex_grid(true_model, f, ng, pml_wavelengths);
    RVec m_nodes = sample_to_hex(m, grid, true_model);
    ForwardResult res =
        forward_map(m_nodes, 2.0 * M_PI * f, geom, grid, cfg);
    res.data.provenance = Provenance::Observed;
    out.push_back(std::move(res.data));
  }
  if (noise && noise->snr_db > 0.0) {
    std::mt19937_64 rng(noise->seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& ds : out) {
      double signal_rms =
          std::sqrt(ds.data.squaredNorm() / static_cast<double>(ds.data.size()));
      double sigma =
          signal_rms * std::pow(10.0, -noise->snr_db / 20.0) / std::sqrt(2.0);
      for (Eigen::Index i = 0; i < ds.data.rows(); ++i)
        for (Eigen::Index j = 0; j < ds.data.cols(); ++j)
          ds.data(i, j) += Complex(sigma * gauss(rng), sigma * gauss(rng));
    }
  }
  return out;
}

}  // namespace fwi
