#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "fwi/errors.hpp"
#include "fwi/io.hpp"

using namespace fwi;

namespace {

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / "fwi_io_test";
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

VelocityModel random_model(int nz, int nx, std::uint64_t seed) {
  VelocityModel m;
  m.nz = nz;
  m.nx = nx;
  m.dz = 20.0;
  m.dx = 25.0;
  m.c.resize(static_cast<Eigen::Index>(nz) * nx);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1500.0, 5000.0);
  for (Eigen::Index i = 0; i < m.c.size(); ++i) m.c[i] = u(rng);
  return m;
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  return std::vector<char>(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("model roundtrip") {
  fs::path dir = scratch_dir();
  VelocityModel m = random_model(7, 9, 3);
  m.origin_x = 100.0;
  m.origin_z = -50.0;

  SUBCASE("f32 interchange quantizes to float") {
    write_model(dir / "m32", m);
    VelocityModel back = read_model(dir / "m32");
    CHECK(back.nz == m.nz);
    CHECK(back.nx == m.nx);
    CHECK(back.dz == m.dz);
    CHECK(back.dx == m.dx);
    CHECK(back.origin_x == m.origin_x);
    CHECK(back.origin_z == m.origin_z);
    for (Eigen::Index i = 0; i < m.c.size(); ++i)
      CHECK(back.c[i] == static_cast<double>(static_cast<float>(m.c[i])));
  }
  SUBCASE("f64 state is bitwise exact") {
    write_model(dir / "m64", m, "f64");
    VelocityModel back = read_model(dir / "m64");
    CHECK(back.c == m.c);
  }
  SUBCASE("unknown dtype rejected") {
    CHECK_THROWS_AS(write_model(dir / "bad", m, "i16"), ValidationError);
  }
  SUBCASE("payload length is validated") {
    write_model(dir / "trunc", m);
    auto bytes = slurp(dir / "trunc.bin");
    bytes.pop_back();
    std::ofstream os(dir / "trunc.bin", std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    os.close();
    CHECK_THROWS_AS(read_model(dir / "trunc"), ValidationError);
  }
  SUBCASE("missing files rejected") {
    CHECK_THROWS_AS(read_model(dir / "nothere"), ValidationError);
  }
}

TEST_CASE("field f64 roundtrip keeps sign and bits") {
  fs::path dir = scratch_dir();
  VelocityModel like = random_model(5, 6, 4);
  ModelField f;
  f.nz = 5;
  f.nx = 6;
  f.quantity = Quantity::Gradient;
  f.values.resize(30);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  for (Eigen::Index i = 0; i < 30; ++i) f.values[i] = gauss(rng) * 1e-7;
  write_field_f64(dir / "grad", f, like);
  ModelField back = read_field_f64(dir / "grad", Quantity::Gradient);
  CHECK(back.nz == 5);
  CHECK(back.nx == 6);
  CHECK(back.values == f.values);  // bitwise
}

TEST_CASE("dataset naming by millihertz") {
  CHECK(dataset_stem(1.0) == "d_0001000mHz");
  CHECK(dataset_stem(0.2) == "d_0000200mHz");
  CHECK(dataset_stem(15.0) == "d_0015000mHz");
  CHECK(dataset_stem(4.5) == "d_0004500mHz");
  // rounds rather than truncates
  CHECK(dataset_stem(0.0499999999) == "d_0000050mHz");
}

TEST_CASE("dataset roundtrip is bitwise") {
  fs::path dir = scratch_dir();
  FrequencyDataset ds;
  ds.omega = 2.0 * M_PI * 2.4;
  ds.provenance = Provenance::Observed;
  ds.data.resize(3, 5);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss;
  for (Eigen::Index s = 0; s < 3; ++s)
    for (Eigen::Index r = 0; r < 5; ++r)
      ds.data(s, r) = Complex(gauss(rng), gauss(rng));
  write_dataset(dir, ds);
  CHECK(fs::exists(dir / "d_0002400mHz.json"));
  CHECK(fs::exists(dir / "d_0002400mHz.bin"));
  // payload is exactly ns*nr complex doubles
  CHECK(fs::file_size(dir / "d_0002400mHz.bin") == 3 * 5 * 16);
  FrequencyDataset back = read_dataset(dir, 2.4);
  CHECK(back.omega == ds.omega);
  CHECK(back.provenance == Provenance::Observed);
  CHECK(back.data == ds.data);  // bitwise

  CHECK_THROWS_AS(read_dataset(dir, 7.7), ValidationError);
}

TEST_CASE("grayscale image bytes") {
  fs::path dir = scratch_dir();
  VelocityModel m;
  m.nz = 2;
  m.nx = 2;
  m.dz = m.dx = 10.0;
  m.c.resize(4);
  m.c << 1000.0, 1500.0, 2000.0, 4000.0;  // last clips at clip_max = 3000
  emit_image(m, dir / "v.pgm", "gray", 1000.0, 3000.0);
  auto bytes = slurp(dir / "v.pgm");
  std::string header(bytes.begin(), bytes.begin() + 12);
  CHECK(header.rfind("P5\n2 2\n255\n", 0) == 0);
  REQUIRE(bytes.size() == 11 + 4);
  auto px = [&](int i) { return static_cast<unsigned char>(bytes[11 + i]); };
  CHECK(px(0) == 0);    // at clip_min
  CHECK(px(1) == 64);   // round(0.25*255)
  CHECK(px(2) == 128);  // round(0.5*255)
  CHECK(px(3) == 255);  // clipped to clip_max

  CHECK_THROWS_AS(emit_image(m, dir / "x.pgm", "gray", 5.0, 5.0),
                  ValidationError);
  CHECK_THROWS_AS(emit_image(m, dir / "x.pgm", "plasma", 0.0, 1.0),
                  ValidationError);
}

TEST_CASE("seismic palette endpoints and midpoint") {
  fs::path dir = scratch_dir();
  VelocityModel m;
  m.nz = 2;
  m.nx = 3;
  m.dz = m.dx = 10.0;
  m.c.resize(6);
  m.c << 0.0, 128.0, 255.0, 0.0, 128.0, 255.0;
  // validate() requires positive c, so shift the range instead
  m.c.array() += 1.0;
  emit_image(m, dir / "v.ppm", "seismic", 1.0, 256.0);
  auto bytes = slurp(dir / "v.ppm");
  std::string header(bytes.begin(), bytes.begin() + 11);
  CHECK(header.rfind("P6\n3 2\n255\n", 0) == 0);
  REQUIRE(bytes.size() == 11 + 18);
  auto px = [&](int i) { return static_cast<unsigned char>(bytes[11 + i]); };
  // low end: blue
  CHECK(px(0) == 0);
  CHECK(px(2) == 255);
  // high end: red
  CHECK(px(6) == 255);
  CHECK(px(8) == 0);
  // middle: light, roughly neutral
  CHECK(px(3) > 200);
  CHECK(px(5) > 200);
}

TEST_CASE("profiles snap to the nearest column") {
  fs::path dir = scratch_dir();
  VelocityModel m;
  m.nz = 3;
  m.nx = 4;
  m.dz = 10.0;
  m.dx = 100.0;
  m.c.resize(12);
  for (int iz = 0; iz < 3; ++iz)
    for (int ix = 0; ix < 4; ++ix) m.c[iz * 4 + ix] = 1000.0 + iz * 100 + ix;
  // 140 m is nearest to column 1 (center 150); 260 m to column 2 (250)
  emit_profiles(m, {140.0, 260.0}, dir / "p.csv");
  std::ifstream is(dir / "p.csv");
  std::string header, row0;
  std::getline(is, header);
  std::getline(is, row0);
  CHECK(header == "depth_m,x=150,x=250");
  CHECK(row0 == "5,1001,1002");

  CHECK_THROWS_AS(emit_profiles(m, {}, dir / "q.csv"), ValidationError);
  CHECK_THROWS_AS(emit_profiles(m, {-5.0}, dir / "q.csv"), ValidationError);
  CHECK_THROWS_AS(emit_profiles(m, {401.0}, dir / "q.csv"), ValidationError);
}

TEST_CASE("jsonl appenders emit one object per line") {
  std::ostringstream os;
  SolveStats st;
  st.nodes = 1234;
  st.nonzeros = 8000;
  st.factor_seconds = 0.5;
  st.solve_seconds_per_rhs = 0.01;
  append_stats_jsonl(os, st);
  IterationRecord rec{3, 1.5e-3, 2.5e-6, 0.75, 0.2};
  append_iteration_jsonl(os, 4.0, rec);
  std::istringstream is(os.str());
  std::string l1, l2, extra;
  REQUIRE(std::getline(is, l1));
  REQUIRE(std::getline(is, l2));
  CHECK_FALSE(std::getline(is, extra));
  CHECK(l1.find("\"nodes\":1234") != std::string::npos);
  CHECK(l1.find("\"nonzeros\":8000") != std::string::npos);
  CHECK(l2.find("\"frequency_hz\":4.0") != std::string::npos);
  CHECK(l2.find("\"k\":3") != std::string::npos);
  CHECK(l2.find("\"alpha\":0.75") != std::string::npos);
}

TEST_CASE("tool version string") {
  CHECK(tool_version().rfind("hexfwi ", 0) == 0);
}
