#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cellsom/incidence.hpp"

namespace cellsom {

/// Hexagonal lattice of rows x cols units, indexed row-major. Odd rows are
/// shifted right by half a unit; rows are sqrt(3)/2 apart, so every interior
/// unit has six neighbors at lattice distance exactly 1.
class MapGrid {
public:
  MapGrid(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t units() const noexcept { return rows_ * cols_; }

  std::size_t row_of(std::size_t unit) const noexcept { return unit / cols_; }
  std::size_t col_of(std::size_t unit) const noexcept { return unit % cols_; }
  std::size_t unit_at(std::size_t row, std::size_t col) const noexcept { return row * cols_ + col; }

  /// Planar lattice position of a unit.
  double x(std::size_t unit) const noexcept;
  double y(std::size_t unit) const noexcept;

  /// Exact squared lattice distance (always a multiple of 1/4).
  double sq_distance(std::size_t a, std::size_t b) const noexcept;
  double distance(std::size_t a, std::size_t b) const noexcept;

  /// Squared lattice distance from `unit` to every unit.
  void sq_distances_from(std::size_t unit, std::span<double> out) const noexcept;
  std::vector<double> sq_distances_from(std::size_t unit) const;

  /// Units at lattice distance 1, ascending.
  std::vector<std::size_t> neighbors(std::size_t unit) const;

  /// Every adjacent pair once, as (a, b) with a < b, ascending.
  std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs() const;

  friend bool operator==(const MapGrid& a, const MapGrid& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_;
  }

private:
  std::size_t rows_;
  std::size_t cols_;
};

/// Smallest near-square grid (rows - cols in {0, 1}) with at least
/// 5 * sqrt(parts) units.
MapGrid default_grid(std::size_t parts);

/// Parses "RxC" (also "RXC"); rejects zero or malformed sizes.
MapGrid parse_grid(const std::string& text);

struct TrainingPhase {
  std::size_t epochs = 1;
  double alpha_start = 0.5;
  double alpha_end = 0.05;
  double sigma_start = 1.0;
  double sigma_end = 0.1;
};

/// Gaussian-neighborhood schedule; alpha and sigma move linearly from start
/// to end over the steps of each phase.
struct TrainingSchedule {
  std::vector<TrainingPhase> phases;

  /// Throws Error when empty, non-decreasing parameters are given, alpha is
  /// outside [0, 1], sigma is negative or the last phase ends above sigma 1.
  void validate() const;
  std::size_t total_epochs() const noexcept;
};

/// Rough phase (sigma max(rows,cols)/2 -> 1, alpha 0.5 -> 0.05, 10 epochs)
/// followed by fine tuning (sigma 1 -> 0.1, alpha 0.05 -> 0.01, 20 epochs).
TrainingSchedule default_schedule(const MapGrid& grid);

struct SomModel {
  MapGrid grid{1, 1};
  std::size_t input_dim = 0;
  std::vector<double> codebook;  // units x input_dim, row-major
  std::uint64_t seed = 42;
  std::size_t trained_epochs = 0;
  TrainingSchedule schedule;  // phases applied so far

  std::span<const double> unit_vector(std::size_t unit) const {
    return {codebook.data() + unit * input_dim, input_dim};
  }
  std::size_t units() const noexcept { return grid.units(); }
};

/// Linear initialization on the plane of the data's two leading principal
/// components, scaled to stay inside [0,1]^n. PC1 runs along the longer
/// lattice side. Data with rank 1 spans a line; rank 0 data gets seeded
/// jitter of radius < 0.1 around the mean.
SomModel init_codebook(const MapGrid& grid, const IncidenceMatrix& data, std::uint64_t seed);

/// Nearest unit by Euclidean distance, lowest index on ties.
std::size_t find_bmu(const SomModel& model, std::span<const double> x);

/// BMU of every part.
std::vector<std::size_t> find_bmus(const SomModel& model, const IncidenceMatrix& data);

/// Sequential training. Every epoch visits the parts in an order shuffled
/// by a generator seeded from the model's seed.
SomModel train(const SomModel& model, const IncidenceMatrix& data, const TrainingSchedule& schedule);

/// Mean Euclidean distance from each part to its BMU.
double quantization_error(const SomModel& model, const IncidenceMatrix& data);

std::string serialize_model(const SomModel& model);
SomModel deserialize_model(const std::string& json_text);
void save_model(const SomModel& model, const std::filesystem::path& path);
SomModel load_model(const std::filesystem::path& path);

}  // namespace cellsom
