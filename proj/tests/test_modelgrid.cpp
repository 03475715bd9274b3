#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fwi/errors.hpp"
#include "fwi/hexgrid.hpp"

using namespace fwi;

namespace {

VelocityModel const_model(int nz, int nx, double d, double c0) {
  VelocityModel m;
  m.nz = nz;
  m.nx = nx;
  m.dz = m.dx = d;
  m.c = RVec::Constant(static_cast<Eigen::Index>(nz) * nx, c0);
  return m;
}

}  // namespace

TEST_CASE("velocity model validation") {
  VelocityModel m = const_model(3, 4, 10.0, 1500.0);
  CHECK_NOTHROW(m.validate());
  m.c[5] = -1.0;
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m = const_model(1, 4, 10.0, 1500.0);
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m = const_model(3, 4, -1.0, 1500.0);
  CHECK_THROWS_AS(m.validate(), ValidationError);
}

TEST_CASE("marmousi-size lattice spacing") {
  // 3 km x 11 km footprint, min(c) = 1500, f = 1 Hz, Ng = 8.5
  VelocityModel m = const_model(150, 550, 20.0, 1500.0);
  HexGrid g = build_hex_grid(m, 1.0, 8.5, 0.0, 50'000'000);
  CHECK(g.h == doctest::Approx(1500.0 / 8.5).epsilon(1e-12));
  CHECK(g.width == doctest::Approx(11000.0));
  CHECK(g.depth == doctest::Approx(3000.0));
}

TEST_CASE("doubling f halves h exactly") {
  VelocityModel m = const_model(10, 10, 50.0, 2000.0);
  HexGrid a = build_hex_grid(m, 3.0, 8.5, 1.0);
  HexGrid b = build_hex_grid(m, 6.0, 8.5, 1.0);
  CHECK(a.h == 2.0 * b.h);
}

TEST_CASE("h * Ng * f = min(c) for random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uc(300.0, 6000.0), uf(0.1, 20.0),
      ung(2.5, 15.0);
  for (int trial = 0; trial < 100; ++trial) {
    VelocityModel m = const_model(5, 5, 100.0, uc(rng));
    double f = uf(rng), ng = ung(rng);
    HexGrid g = build_hex_grid(m, f, ng, 0.5);
    CHECK(g.h * ng * f == doctest::Approx(m.min_c()).epsilon(1e-13));
  }
}

TEST_CASE("lattice regularity by brute-force neighbor scan") {
  // ~100 nodes on a unit square
  VelocityModel m = const_model(2, 2, 0.5, 1.0);
  // h = min(c)/(Ng*f); choose f, Ng so h ~ 0.12
  HexGrid g = build_hex_grid(m, 1.0, 8.0, 0.25);
  REQUIRE(g.node_count() > 50);
  for (int p = 0; p < g.node_count(); ++p) {
    if (!g.interior[p] && !g.pml[p]) continue;
    // brute-force: exactly 6 nodes at distance h
    int found = 0;
    for (int q = 0; q < g.node_count(); ++q) {
      if (q == p) continue;
      double d = std::hypot(g.x[q] - g.x[p], g.z[q] - g.z[p]);
      if (std::abs(d - g.h) <= 1e-9 * g.h) ++found;
    }
    CHECK(found == 6);
    // and the stored table matches
    for (int k = 0; k < 6; ++k) {
      int q = g.nbr[p][k];
      REQUIRE(q >= 0);
      double d = std::hypot(g.x[q] - g.x[p], g.z[q] - g.z[p]);
      CHECK(d == doctest::Approx(g.h).epsilon(1e-9));
    }
  }
}

TEST_CASE("node set covers domain plus collar; masks disjoint") {
  VelocityModel m = const_model(4, 8, 100.0, 1600.0);
  HexGrid g = build_hex_grid(m, 4.0, 6.0, 1.0);
  double xmin = 1e300, xmax = -1e300, zmin = 1e300, zmax = -1e300;
  for (int p = 0; p < g.node_count(); ++p) {
    xmin = std::min(xmin, g.x[p]);
    xmax = std::max(xmax, g.x[p]);
    zmin = std::min(zmin, g.z[p]);
    zmax = std::max(zmax, g.z[p]);
    CHECK_FALSE((g.interior[p] && g.pml[p]));
  }
  CHECK(xmin <= -g.delta);
  CHECK(xmax >= g.width + g.delta);
  CHECK(zmin <= -g.delta);
  CHECK(zmax >= g.depth + g.delta);
}

TEST_CASE("build rejects bad inputs") {
  VelocityModel m = const_model(5, 5, 100.0, 1500.0);
  CHECK_THROWS_AS(build_hex_grid(m, -1.0, 8.5, 1.0), ValidationError);
  CHECK_THROWS_AS(build_hex_grid(m, 0.0, 8.5, 1.0), ValidationError);
  CHECK_THROWS_AS(build_hex_grid(m, 1.0, 2.0, 1.0), ValidationError);
  // node budget guard
  CHECK_THROWS_AS(build_hex_grid(m, 100.0, 12.0, 1.0, 1000), ValidationError);
}

TEST_CASE("sizing fields") {
  VelocityModel m = const_model(5, 5, 100.0, 1500.0);
  m.c[0] = 3000.0;  // mean shifts
  HexGrid g = build_hex_grid(m, 2.0, 8.5, 1.0);
  CHECK(g.sizing.lambda_min == doctest::Approx(1500.0 / 2.0));
  CHECK(g.sizing.lambda_mean == doctest::Approx(m.mean_c() / 2.0));
  CHECK(g.delta == doctest::Approx(g.sizing.lambda_mean));
}

TEST_CASE("sample_to_hex reproduces constants") {
  VelocityModel m = const_model(6, 9, 50.0, 2000.0);
  ModelField f;
  f.nz = m.nz;
  f.nx = m.nx;
  f.quantity = Quantity::Velocity;
  f.values = RVec::Constant(m.c.size(), 2000.0);
  HexGrid g = build_hex_grid(m, 5.0, 6.0, 1.0);
  RVec v = sample_to_hex(f, g, m);
  for (int p = 0; p < g.node_count(); ++p)
    CHECK(v[p] == doctest::Approx(2000.0).epsilon(1e-14));
}

TEST_CASE("sample_to_hex exact on depth-linear fields inside the footprint") {
  VelocityModel m = const_model(12, 12, 25.0, 1500.0);
  const double a = 1200.0, b = 3.5;
  ModelField f;
  f.nz = m.nz;
  f.nx = m.nx;
  f.quantity = Quantity::Velocity;
  f.values.resize(m.c.size());
  for (int iz = 0; iz < m.nz; ++iz)
    for (int ix = 0; ix < m.nx; ++ix)
      f.values[iz * m.nx + ix] = a + b * (iz + 0.5) * m.dz;
  HexGrid g = build_hex_grid(m, 10.0, 6.0, 0.5);
  RVec v = sample_to_hex(f, g, m);
  double half = 0.5 * m.dz;
  for (int p = 0; p < g.node_count(); ++p) {
    // bilinear is exact on linears away from the clamped border band
    if (g.z[p] < half || g.z[p] > m.depth() - half) continue;
    if (g.x[p] < 0.0 || g.x[p] > m.width()) continue;
    double want = a + b * g.z[p];
    CHECK(v[p] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("bilinear value at a cell-center corner is the 4-cell average") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1000.0, 5000.0);
  VelocityModel m = const_model(5, 5, 10.0, 1.0);
  for (Eigen::Index i = 0; i < m.c.size(); ++i) m.c[i] = u(rng);
  ModelField f;
  f.nz = 5;
  f.nx = 5;
  f.quantity = Quantity::Velocity;
  f.values = m.c;
  // a one-node "grid" placed exactly at the corner shared by 4 cells
  HexGrid g;
  g.h = 1.0;
  g.width = m.width();
  g.depth = m.depth();
  g.x = {2.0 * m.dx};
  g.z = {3.0 * m.dz};
  g.interior = {1};
  g.pml = {0};
  g.nbr.assign(1, {-1, -1, -1, -1, -1, -1});
  RVec v = sample_to_hex(f, g, m);
  double want = 0.25 * (m.at(2, 1) + m.at(2, 2) + m.at(3, 1) + m.at(3, 2));
  CHECK(v[0] == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("project_to_model basics") {
  VelocityModel m = const_model(8, 10, 40.0, 1800.0);
  HexGrid g = build_hex_grid(m, 6.0, 6.0, 0.5);
  RVec zero = RVec::Zero(g.node_count());
  ModelField f = project_to_model(zero, g, m);
  CHECK(f.quantity == Quantity::Gradient);
  CHECK(f.values.norm() == 0.0);

  // single interior node -> its bilinear weight row
  int pick = -1;
  for (int p = 0; p < g.node_count(); ++p)
    if (g.interior[p]) {
      pick = p;
      break;
    }
  REQUIRE(pick >= 0);
  RVec e = RVec::Zero(g.node_count());
  e[pick] = 1.0;
  ModelField row = project_to_model(e, g, m);
  CHECK(row.values.sum() == doctest::Approx(1.0).epsilon(1e-12));
  int nnz = 0;
  for (Eigen::Index i = 0; i < row.values.size(); ++i)
    if (row.values[i] != 0.0) ++nnz;
  CHECK(nnz <= 4);
}

TEST_CASE("project_to_model is the adjoint of sample_to_hex") {
  VelocityModel m = const_model(7, 9, 60.0, 2000.0);
  HexGrid g = build_hex_grid(m, 5.0, 6.5, 1.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    ModelField u;
    u.nz = m.nz;
    u.nx = m.nx;
    u.quantity = Quantity::Velocity;
    u.values.resize(m.c.size());
    for (Eigen::Index i = 0; i < u.values.size(); ++i) u.values[i] = gauss(rng);
    RVec v(g.node_count());
    for (int p = 0; p < g.node_count(); ++p)
      v[p] = (g.interior[p] || g.pml[p]) ? gauss(rng) : 0.0;
    // Dirichlet components of Su do not participate: restrict to PDE rows
    RVec su = sample_to_hex(u, g, m);
    double lhs = 0.0;
    for (int p = 0; p < g.node_count(); ++p)
      if (g.interior[p] || g.pml[p]) lhs += su[p] * v[p];
    ModelField pv = project_to_model(v, g, m);
    double rhs = u.values.dot(pv.values);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}
