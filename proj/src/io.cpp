#include "fwi/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "fwi/errors.hpp"

namespace fwi {

using nlohmann::json;

namespace {

void write_bytes(const fs::path& path, const void* data, std::size_t bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open for writing: " + path.string());
  os.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
  if (!os) throw ValidationError("short write: " + path.string());
}

std::vector<char> read_bytes(const fs::path& path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw ValidationError("cannot open: " + path.string());
  auto size = is.tellg();
  is.seekg(0);
  std::vector<char> buf(static_cast<std::size_t>(size));
  is.read(buf.data(), size);
  if (!is) throw ValidationError("short read: " + path.string());
  return buf;
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open: " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ValidationError("bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open for writing: " + path.string());
  os << j.dump(2) << "\n";
}

}  // namespace

void write_model(const fs::path& stem, const VelocityModel& model,
                 const std::string& dtype) {
  model.validate();
  json hdr = {{"nz", model.nz},
              {"nx", model.nx},
              {"dz", model.dz},
              {"dx", model.dx},
              {"origin", {model.origin_x, model.origin_z}},
              {"dtype", dtype},
              {"order", "row-major"}};
  write_json(fs::path(stem).concat(".json"), hdr);
  if (dtype == "f32") {
    std::vector<float> buf(model.c.size());
    for (Eigen::Index i = 0; i < model.c.size(); ++i)
      buf[i] = static_cast<float>(model.c[i]);
    write_bytes(fs::path(stem).concat(".bin"), buf.data(),
                buf.size() * sizeof(float));
  } else if (dtype == "f64") {
    write_bytes(fs::path(stem).concat(".bin"), model.c.data(),
                static_cast<std::size_t>(model.c.size()) * sizeof(double));
  } else {
    throw ValidationError("unsupported dtype: " + dtype);
  }
}

VelocityModel read_model(const fs::path& stem) {
  json hdr = read_json(fs::path(stem).concat(".json"));
  VelocityModel m;
  m.nz = hdr.at("nz").get<int>();
  m.nx = hdr.at("nx").get<int>();
  m.dz = hdr.at("dz").get<double>();
  m.dx = hdr.at("dx").get<double>();
  if (hdr.contains("origin")) {
    m.origin_x = hdr["origin"][0].get<double>();
    m.origin_z = hdr["origin"][1].get<double>();
  }
  std::string dtype = hdr.value("dtype", "f32");
  auto bytes = read_bytes(fs::path(stem).concat(".bin"));
  std::size_t n = static_cast<std::size_t>(m.nz) * m.nx;
  std::size_t word = dtype == "f64" ? 8 : 4;
  if (bytes.size() != n * word)
    throw ValidationError("payload length mismatch: expected " +
                          std::to_string(n * word) + " bytes, got " +
                          std::to_string(bytes.size()));
  m.c.resize(static_cast<Eigen::Index>(n));
  if (dtype == "f32") {
    const float* p = reinterpret_cast<const float*>(bytes.data());
    for (std::size_t i = 0; i < n; ++i) m.c[i] = p[i];
  } else if (dtype == "f64") {
    const double* p = reinterpret_cast<const double*>(bytes.data());
    for (std::size_t i = 0; i < n; ++i) m.c[i] = p[i];
  } else {
    throw ValidationError("unsupported dtype: " + dtype);
  }
  m.validate();
  return m;
}

void write_field_f64(const fs::path& stem, const ModelField& field,
                     const VelocityModel& like) {
  field.validate();
  json hdr = {{"nz", field.nz},
              {"nx", field.nx},
              {"dz", like.dz},
              {"dx", like.dx},
              {"origin", {like.origin_x, like.origin_z}},
              {"dtype", "f64"},
              {"order", "row-major"},
              {"quantity", quantity_name(field.quantity)}};
  write_json(fs::path(stem).concat(".json"), hdr);
  write_bytes(fs::path(stem).concat(".bin"), field.values.data(),
              static_cast<std::size_t>(field.values.size()) * sizeof(double));
}

ModelField read_field_f64(const fs::path& stem, Quantity quantity) {
  json hdr = read_json(fs::path(stem).concat(".json"));
  ModelField f;
  f.nz = hdr.at("nz").get<int>();
  f.nx = hdr.at("nx").get<int>();
  f.quantity = quantity;
  auto bytes = read_bytes(fs::path(stem).concat(".bin"));
  std::size_t n = static_cast<std::size_t>(f.nz) * f.nx;
  if (bytes.size() != n * sizeof(double))
    throw ValidationError("payload length mismatch in " + stem.string());
  f.values.resize(static_cast<Eigen::Index>(n));
  const double* p = reinterpret_cast<const double*>(bytes.data());
  for (std::size_t i = 0; i < n; ++i) f.values[i] = p[i];
  return f;
}

std::string dataset_stem(double frequency_hz) {
  long long mhz = std::llround(frequency_hz * 1000.0);
  std::ostringstream os;
  os << "d_" << std::setw(7) << std::setfill('0') << mhz << "mHz";
  return os.str();
}

void write_dataset(const fs::path& dir, const FrequencyDataset& ds) {
  fs::create_directories(dir);
  std::string stem = dataset_stem(ds.frequency_hz());
  json hdr = {{"omega", ds.omega},
              {"n_sources", ds.data.rows()},
              {"n_receivers", ds.data.cols()},
              {"layout", "row-major"},
              {"dtype", "c128-interleaved"},
              {"provenance",
               ds.provenance == Provenance::Observed ? "observed" : "predicted"}};
  write_json(dir / (stem + ".json"), hdr);
  std::vector<double> buf;
  buf.reserve(static_cast<std::size_t>(ds.data.size()) * 2);
  for (Eigen::Index s = 0; s < ds.data.rows(); ++s)
    for (Eigen::Index r = 0; r < ds.data.cols(); ++r) {
      buf.push_back(ds.data(s, r).real());
      buf.push_back(ds.data(s, r).imag());
    }
  write_bytes(dir / (stem + ".bin"), buf.data(), buf.size() * sizeof(double));
}

FrequencyDataset read_dataset(const fs::path& dir, double frequency_hz) {
  std::string stem = dataset_stem(frequency_hz);
  json hdr = read_json(dir / (stem + ".json"));
  FrequencyDataset ds;
  ds.omega = hdr.at("omega").get<double>();
  Eigen::Index ns = hdr.at("n_sources").get<Eigen::Index>();
  Eigen::Index nr = hdr.at("n_receivers").get<Eigen::Index>();
  ds.provenance = hdr.value("provenance", "observed") == "observed"
                      ? Provenance::Observed
                      : Provenance::Predicted;
  auto bytes = read_bytes(dir / (stem + ".bin"));
  std::size_t need = static_cast<std::size_t>(ns) * nr * 2 * sizeof(double);
  if (bytes.size() != need)
    throw ValidationError("dataset payload length mismatch: " + stem);
  const double* p = reinterpret_cast<const double*>(bytes.data());
  ds.data.resize(ns, nr);
  for (Eigen::Index s = 0; s < ns; ++s)
    for (Eigen::Index r = 0; r < nr; ++r) {
      ds.data(s, r) = Complex(p[0], p[1]);
      p += 2;
    }
  return ds;
}

void emit_image(const VelocityModel& model, const fs::path& out,
                const std::string& palette, double clip_min, double clip_max) {
  model.validate();
  if (!(clip_max > clip_min)) throw ValidationError("invalid clip range");
  auto level = [&](double v) -> int {
    double t = (v - clip_min) / (clip_max - clip_min);
    t = std::clamp(t, 0.0, 1.0);
    return static_cast<int>(std::lround(t * 255.0));
  };
  std::ofstream os(out, std::ios::binary);
  if (!os) throw ValidationError("cannot open for writing: " + out.string());
  if (palette == "gray") {
    os << "P5\n" << model.nx << " " << model.nz << "\n255\n";
    for (int iz = 0; iz < model.nz; ++iz)
      for (int ix = 0; ix < model.nx; ++ix)
        os.put(static_cast<char>(level(model.at(iz, ix))));
  } else if (palette == "seismic") {
    // blue -> white -> red
    os << "P6\n" << model.nx << " " << model.nz << "\n255\n";
    for (int iz = 0; iz < model.nz; ++iz)
      for (int ix = 0; ix < model.nx; ++ix) {
        int v = level(model.at(iz, ix));
        int r = v < 128 ? 2 * v : 255;
        int b = v < 128 ? 255 : 2 * (255 - v);
        int g = v < 128 ? 2 * v : 2 * (255 - v);
        os.put(static_cast<char>(r));
        os.put(static_cast<char>(g));
        os.put(static_cast<char>(b));
      }
  } else {
    throw ValidationError("unknown palette: " + palette);
  }
}

void emit_profiles(const VelocityModel& model,
                   const std::vector<double>& x_positions,
                   const fs::path& out_csv) {
  model.validate();
  if (x_positions.empty()) throw ValidationError("no profile positions");
  std::vector<int> cols;
  for (double px : x_positions) {
    if (px < model.origin_x || px > model.origin_x + model.width())
      throw ValidationError("profile x outside model width");
    double gx = (px - model.origin_x) / model.dx - 0.5;
    cols.push_back(std::clamp(static_cast<int>(std::lround(gx)), 0,
                              model.nx - 1));
  }
  std::ofstream os(out_csv);
  if (!os) throw ValidationError("cannot open for writing: " + out_csv.string());
  os << "depth_m";
  os << std::setprecision(17);
  for (int c : cols)
    os << ",x=" << model.origin_x + (c + 0.5) * model.dx;
  os << "\n";
  for (int iz = 0; iz < model.nz; ++iz) {
    os << model.origin_z + (iz + 0.5) * model.dz;
    for (int c : cols) os << "," << model.at(iz, c);
    os << "\n";
  }
}

void append_stats_jsonl(std::ostream& os, const SolveStats& s) {
  json j = {{"nodes", s.nodes},
            {"nonzeros", s.nonzeros},
            {"factor_seconds", s.factor_seconds},
            {"solve_seconds_per_rhs", s.solve_seconds_per_rhs}};
  os << j.dump() << "\n";
}

void append_iteration_jsonl(std::ostream& os, double frequency_hz,
                            const IterationRecord& rec) {
  json j = {{"frequency_hz", frequency_hz}, {"k", rec.k},
            {"misfit", rec.misfit},        {"grad_norm", rec.grad_norm},
            {"alpha", rec.alpha},          {"iter_seconds", rec.seconds}};
  os << j.dump() << "\n";
}

std::string tool_version() { return "hexfwi 0.1.0"; }

}  // namespace fwi
