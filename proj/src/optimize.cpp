#include "fwi/optimize.hpp"

#include <chrono>
#include <cmath>

#include "fwi/errors.hpp"

namespace fwi {

double bb_step(const RVec& s, const RVec& y, BBVariant variant,
               double fallback, double alpha_min, double alpha_max) {
  if (s.size() != y.size()) throw ValidationError("bb_step: shape mismatch");
  const double sy = s.dot(y);
  double alpha;
  if (variant == BBVariant::BB1) {
    alpha = s.dot(s) / sy;
  } else {
    alpha = sy / y.dot(y);
  }
  if (sy <= 0.0 || !std::isfinite(alpha) || alpha <= 0.0) return fallback;
  return std::clamp(alpha, alpha_min, alpha_max);
}

void OptimizerHistory::push_pair(const RVec& s, const RVec& y) {
  if (s.dot(y) <= 0.0) return;  // curvature guard
  pairs.emplace_back(s, y);
  while (static_cast<int>(pairs.size()) > memory) pairs.pop_front();
}

RVec lbfgs_direction(const OptimizerHistory& history, const RVec& g) {
  if (history.pairs.empty()) return -g;
  const int m = static_cast<int>(history.pairs.size());
  std::vector<double> alpha(m), rho(m);
  RVec q = g;
  for (int i = m - 1; i >= 0; --i) {
    const auto& [s, y] = history.pairs[i];
    rho[i] = 1.0 / y.dot(s);
    alpha[i] = rho[i] * s.dot(q);
    q -= alpha[i] * y;
  }
  const auto& [s_last, y_last] = history.pairs.back();
  double gamma = s_last.dot(y_last) / y_last.dot(y_last);
  RVec r = gamma * q;
  for (int i = 0; i < m; ++i) {
    const auto& [s, y] = history.pairs[i];
    double beta = rho[i] * y.dot(r);
    r += (alpha[i] - beta) * s;
  }
  return -r;
}

BoundsConstraint BoundsConstraint::from_velocity(double c_min, double c_max) {
  if (!(c_min > 0.0) || !(c_max >= c_min))
    throw ValidationError("bounds need 0 < c_min <= c_max");
  return {1.0 / (c_max * c_max), 1.0 / (c_min * c_min)};
}

void BoundsConstraint::clip(RVec& m) const {
  if (m_max <= 0.0) return;  // unset
  for (Eigen::Index i = 0; i < m.size(); ++i)
    m[i] = std::clamp(m[i], m_min, m_max);
}

bool BoundsConstraint::feasible(const RVec& m) const {
  if (m_max <= 0.0) return true;
  return (m.array() >= m_min).all() && (m.array() <= m_max).all();
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

MinimizeResult minimize(const Objective& objective, const RVec& m0,
                        const OptimizerConfig& cfg,
                        const StoppingCriteria& stop) {
  if (stop.maxiter < 0) throw ValidationError("maxiter cannot be negative");
  MinimizeResult res;
  res.history.memory = cfg.lbfgs_memory;
  RVec m = m0;
  cfg.bounds.clip(m);

  RVec g;
  double J = 0.0;
  double gnorm = 0.0;
  auto refresh = [&]() {
    J = objective(m, &g);
    gnorm = g.norm();
    if (!std::isfinite(J) || !g.allFinite())
      throw NumericalError("non-finite misfit or gradient");
    if (J < res.history.best_misfit) {
      res.history.best_misfit = J;
      res.history.best_model = m;
    }
  };
  if (stop.maxiter == 0) {
    res.m = m;
    return res;
  }
  refresh();

  RVec prev_m, prev_g;
  double alpha = 0.0;
  int k = 0;
  while (k < stop.maxiter && gnorm > stop.tol_g && J > stop.tol_J) {
    auto t0 = std::chrono::steady_clock::now();
    // Seed/fallback step alpha_0 = tau*||m||/||g||; a zero start point
    // falls back to unit scale so the first step is still finite.
    double seed = cfg.seed_step_fraction *
                  (m.norm() > 0.0 ? m.norm() : 1.0) / gnorm;
    if (cfg.method == OptMethod::BB) {
      if (prev_m.size() == 0) {
        alpha = seed;
      } else {
        RVec s = m - prev_m;
        RVec y = g - prev_g;
        alpha = bb_step(s, y, cfg.bb_variant, seed);
      }
      prev_m = m;
      prev_g = g;
      m -= alpha * g;
      cfg.bounds.clip(m);
      refresh();
      res.history.push_pair(m - prev_m, g - prev_g);
    } else {
      RVec d = lbfgs_direction(res.history, g);
      double gd = g.dot(d);
      if (gd >= 0.0) {  // not a descent direction; restart on -g
        res.history.pairs.clear();
        d = -g;
        gd = g.dot(d);
      }
      alpha = res.history.pairs.empty() ? seed * gnorm / d.norm() : 1.0;
      prev_m = m;
      prev_g = g;
      double J_trial = 0.0;
      RVec m_trial;
      int bt = 0;
      for (; bt <= cfg.max_backtracks; ++bt) {
        m_trial = m + alpha * d;
        cfg.bounds.clip(m_trial);
        J_trial = objective(m_trial, nullptr);
        if (std::isfinite(J_trial) && J_trial <= J + cfg.armijo_c * alpha * gd)
          break;
        alpha *= 0.5;
      }
      m = m_trial;
      refresh();
      res.history.push_pair(m - prev_m, g - prev_g);
    }

    ++k;
    res.history.records.push_back({k, J, gnorm, alpha, seconds_since(t0)});
  }

  res.m = m;
  res.final_misfit = J;
  res.final_grad_norm = gnorm;
  return res;
}

MinimizeResult minimize_single_frequency(
    const ModelField& m_init, double omega, const FrequencyDataset& observed,
    const HexGrid& grid, const AcquisitionGeometry& geom,
    const VelocityModel& model_like, const ForwardConfig& fwd_cfg,
    const OptimizerConfig& cfg, const StoppingCriteria& stop) {
  m_init.validate();
  if (std::abs(observed.omega - omega) > 1e-12 * std::max(1.0, omega))
    throw ValidationError("observed data frequency does not match omega");
  MisfitGradientEvaluator eval(grid, geom, observed, model_like, fwd_cfg);
  Objective obj = [&eval](const RVec& m, RVec* grad) {
    return eval.evaluate(m, grad);
  };
  return minimize(obj, m_init.values, cfg, stop);
}

}  // namespace fwi
