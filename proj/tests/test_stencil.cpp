#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fwi/errors.hpp"
#include "fwi/stencil.hpp"

using namespace fwi;

namespace {

// Applies the stencil to u over the 7-node hexagon of radius h at (cx, cz).
double apply(const StencilWeights& w, double h, double cx, double cz,
             double (*u)(double, double)) {
  double s = w.center * u(cx, cz);
  for (int j = 0; j < 6; ++j) {
    double a = j * M_PI / 3.0;
    s += w.neighbor * u(cx + h * std::cos(a), cz + h * std::sin(a));
  }
  return s;
}

double quad(double x, double z) { return x * x + z * z; }

}  // namespace

TEST_CASE("classical limit is exact at eps = 0") {
  StencilWeights w = rbf_fd_weights(0.0, 1.0);
  CHECK(w.neighbor == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w.center == doctest::Approx(-4.0).epsilon(1e-15));
  // Taylor oracle: the classical weights reproduce the Laplacian of
  // quadratics exactly
  CHECK(apply(w, 1.0, 0.3, -0.2, quad) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("weights annihilate constants for all valid eps") {
  for (double eps : {0.0, 1e-3, 1e-2, 0.05, 0.1, 0.3, 0.8, 1.5}) {
    StencilWeights w = rbf_fd_weights(eps, 1.0);
    CHECK(std::abs(w.center + 6.0 * w.neighbor) <=
          1e-10 * std::abs(w.center));
  }
}

TEST_CASE("eps -> 0 converges to the classical hexagonal Laplacian") {
  double h = 2.5;
  double prev_gap = 1e300;
  for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
    StencilWeights w = rbf_fd_weights(eps / h, h);
    double gap = std::abs(w.neighbor - 2.0 / (3.0 * h * h));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  StencilWeights w = rbf_fd_weights(1e-8, h);
  CHECK(w.neighbor == doctest::Approx(2.0 / (3.0 * h * h)).epsilon(1e-10));
  CHECK(w.center == doctest::Approx(-4.0 / (h * h)).epsilon(1e-10));
}

TEST_CASE("small-eps weights reproduce the Laplacian of quadratics") {
  StencilWeights w = rbf_fd_weights(0.1, 1.0);
  double got = apply(w, 1.0, 0.0, 0.0, quad);
  // O((eps h)^2) consistency gap
  CHECK(std::abs(got - 4.0) <= 10.0 * 0.1 * 0.1 * 4.0);
  CHECK(got == doctest::Approx(6.0 * w.neighbor).epsilon(1e-12));
}

TEST_CASE("series and direct solve agree across the switchover") {
  double h = 1.0;
  // direct solve just above the t = 0.01 branch boundary vs the series
  // evaluated at the same t
  double t = 0.01001;
  StencilWeights direct = rbf_fd_weights(std::sqrt(t), h);
  double series = 2.0 / 3.0 + t / 2.0 + t * t / 36.0 - t * t * t / 24.0 +
                  17.0 * t * t * t * t / 2160.0;
  CHECK(direct.neighbor == doctest::Approx(series).epsilon(1e-9));
}

TEST_CASE("too-large shape parameter is rejected") {
  CHECK_THROWS_AS(rbf_fd_weights(3.0, 1.0), ValidationError);
  CHECK_THROWS_AS(rbf_fd_weights(-0.1, 1.0), ValidationError);
  CHECK_THROWS_AS(rbf_fd_weights(0.1, 0.0), ValidationError);
}

TEST_CASE("classical symbol matches -k^2 to O((kh)^2)") {
  double h = 1.0;
  StencilWeights w = rbf_fd_weights(0.0, h);
  for (double kh : {0.2, 0.4, 0.74}) {
    for (double th : {0.0, 0.3, M_PI / 6.0}) {
      double s = stencil_symbol(w, h, kh, th);
      // leading error h^2 k^4 / 16
      CHECK(std::abs(s + kh * kh) <= 1.5 * kh * kh * kh * kh / 16.0);
    }
  }
}

TEST_CASE("tuned shape parameter slashes dispersion at Ng = 8.5") {
  double h = 1.0;
  double kh = 2.0 * M_PI / 8.5;
  double eps = suggest_shape_parameter(kh, h);
  CHECK(eps > 0.0);
  StencilWeights tuned = rbf_fd_weights(eps, h);
  StencilWeights classical = rbf_fd_weights(0.0, h);
  double worst_tuned = 0.0, worst_classical = 0.0;
  for (double th = 0.0; th <= M_PI / 6.0 + 1e-12; th += M_PI / 24.0) {
    worst_tuned = std::max(worst_tuned,
                           std::abs(stencil_symbol(tuned, h, kh, th) + kh * kh));
    worst_classical = std::max(
        worst_classical, std::abs(stencil_symbol(classical, h, kh, th) + kh * kh));
  }
  CHECK(worst_tuned < 0.05 * worst_classical);
}

TEST_CASE("shape rules") {
  CHECK(classical_shape()(10.0, 1.0) == 0.0);
  CHECK(fixed_shape(0.25)(10.0, 1.0) == 0.25);
  double kh = 0.7;
  CHECK(tuned_shape()(kh, 1.0) == suggest_shape_parameter(kh, 1.0));
  CHECK(tuned_shape()(1e-6, 1.0) == 0.0);
}
