#include "fwi/stencil.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fwi/errors.hpp"

namespace fwi {

namespace {

// Symmetry-reduced local RBF-FD system: with t = (eps*h)^2 the 7x7 Gaussian
// collocation problem for the Laplacian functional collapses to the
// unknowns (center, neighbor, constant-multiplier). Neighbor-to-neighbor
// distances on the hexagon are h, sqrt(3)h and 2h.
StencilWeights solve_reduced(double eps, double h) {
  const double t = eps * eps * h * h;
  const double e1 = std::exp(-t);
  const double e3 = std::exp(-3 * t);
  const double e4 = std::exp(-4 * t);
  Eigen::Matrix3d A;
  A << 1.0, 6.0 * e1, 1.0,
       e1, 1.0 + 2.0 * e1 + 2.0 * e3 + e4, 1.0,
       1.0, 6.0, 0.0;
  Eigen::Vector3d b;
  const double eps2 = t / (h * h);
  b << -4.0 * eps2, 4.0 * eps2 * (t - 1.0) * e1, 0.0;
  Eigen::Vector3d w = A.fullPivLu().solve(b);
  return {w[0], w[1], eps};
}

// Small-t series of the reduced solve (the direct system cancels
// catastrophically as t -> 0). neighbor*h^2 = 2/3 + t/2 + t^2/36 - t^3/24
// + 17 t^4/2160 + O(t^5); center = -6*neighbor.
StencilWeights series_weights(double eps, double h) {
  const double t = eps * eps * h * h;
  double wn = (2.0 / 3.0 + t / 2.0 + t * t / 36.0 - t * t * t / 24.0 +
               17.0 * t * t * t * t / 2160.0) /
              (h * h);
  return {-6.0 * wn, wn, eps};
}

}  // namespace

StencilWeights rbf_fd_weights(double eps, double h) {
  if (!(h > 0.0)) throw ValidationError("stencil spacing must be positive");
  if (eps < 0.0) throw ValidationError("shape parameter cannot be negative");
  const double t = eps * eps * h * h;
  if (t > 4.0)
    throw ValidationError(
        "invalid-shape-parameter: eps*h = " + std::to_string(eps * h) +
        " puts the local RBF system outside its usable range");
  if (t < 1e-2) return series_weights(eps, h);
  return solve_reduced(eps, h);
}

double stencil_symbol(const StencilWeights& w, double h, double kmag,
                      double theta) {
  double s = w.center;
  for (int j = 0; j < 6; ++j) {
    double ang = theta + j * M_PI / 3.0;
    s += w.neighbor * std::cos(kmag * h * std::cos(ang));
  }
  return s;
}

double suggest_shape_parameter(double k, double h) {
  const double kh = k * h;
  if (!(kh > 1e-3)) return 0.0;
  // Worst-case symbol error over the anisotropy extremes of the hexagon.
  auto err = [&](double t) {
    StencilWeights w = rbf_fd_weights(std::sqrt(t) / h, h);
    double e = 0.0;
    for (double th : {0.0, M_PI / 12.0, M_PI / 6.0})
      e = std::max(e, std::abs(stencil_symbol(w, h, k, th) + k * k));
    return e;
  };
  // Golden-section scan on t = (eps*h)^2.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 1e-6, b = std::min(4.0, 4.0 * kh * kh);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = err(c), fd = err(d);
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = err(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = err(d);
    }
  }
  double t = 0.5 * (a + b);
  return std::sqrt(t) / h;
}

ShapeRule classical_shape() {
  return [](double, double) { return 0.0; };
}

ShapeRule fixed_shape(double eps) {
  return [eps](double, double) { return eps; };
}

ShapeRule tuned_shape() {
  return [](double k, double h) { return suggest_shape_parameter(k, h); };
}

}  // namespace fwi
