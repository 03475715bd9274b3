#ifndef FWI_IO_HPP
#define FWI_IO_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "fwi/forward.hpp"
#include "fwi/optimize.hpp"

namespace fwi {

namespace fs = std::filesystem;

// ---- velocity model / model field files ------------------------------
// JSON header {nz, nx, dz, dx, origin, dtype, order:"row-major"} at
// <path>.json plus raw little-endian binary payload at <path>.bin.
// dtype "f32" is the interchange format; "f64" is used for exact
// checkpoint state.

void write_model(const fs::path& stem, const VelocityModel& model,
                 const std::string& dtype = "f32");
VelocityModel read_model(const fs::path& stem);

void write_field_f64(const fs::path& stem, const ModelField& field,
                     const VelocityModel& like);
ModelField read_field_f64(const fs::path& stem, Quantity quantity);

// ---- frequency dataset files -----------------------------------------
// JSON header {omega, n_sources, n_receivers, layout:"row-major",
// dtype:"c128-interleaved"} + float64 (re,im) payload. Files are named by
// frequency in mHz: d_<mHz>mHz.{json,bin}.

std::string dataset_stem(double frequency_hz);
void write_dataset(const fs::path& dir, const FrequencyDataset& ds);
FrequencyDataset read_dataset(const fs::path& dir, double frequency_hz);

// ---- images and profiles ---------------------------------------------

/// Pixel-per-cell grayscale PGM (palette "gray") or indexed-color PPM
/// (palette "seismic"), values affinely mapped from [clip_min, clip_max].
void emit_image(const VelocityModel& model, const fs::path& out,
                const std::string& palette, double clip_min, double clip_max);

/// Depth-vs-velocity CSV, one column per requested x (nearest model
/// column; the snapped x is recorded in the header).
void emit_profiles(const VelocityModel& model,
                   const std::vector<double>& x_positions,
                   const fs::path& out_csv);

// ---- logs -------------------------------------------------------------

void append_stats_jsonl(std::ostream& os, const SolveStats& s);
void append_iteration_jsonl(std::ostream& os, double frequency_hz,
                            const IterationRecord& rec);

std::string tool_version();

}  // namespace fwi

#endif
