#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cellsom/assignment.hpp"
#include "cellsom/incidence.hpp"
#include "cellsom/pca.hpp"
#include "cellsom/som.hpp"

namespace cellsom {

struct UMatrixPair {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double value = 0.0;
};

/// Unified distance matrix on the augmented (2R-1) x (2C-1) hexagonal grid:
/// unit (r, c) sits at (2r, 2c) and each adjacent pair at the cell between
/// its two units.
struct UMatrix {
  std::size_t unit_rows = 0;
  std::size_t unit_cols = 0;
  std::vector<double> values;  // rows() x cols(), row-major
  std::vector<UMatrixPair> pairs;

  std::size_t rows() const noexcept { return unit_rows ? 2 * unit_rows - 1 : 0; }
  std::size_t cols() const noexcept { return unit_cols ? 2 * unit_cols - 1 : 0; }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
  double unit_value(std::size_t unit) const;
  /// Throws Error when a and b are not adjacent.
  double pair_value(std::size_t a, std::size_t b) const;
};

struct ComponentPlane {
  std::size_t machine_index = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // per unit
};

struct Projection {
  std::vector<std::array<double, 2>> unit_points;
  std::vector<std::array<double, 2>> part_points;
  std::vector<Eigenpair> pc_axes;  // one or two, orthonormal
  std::vector<double> mean;
  std::vector<std::pair<std::size_t, std::size_t>> unit_edges;  // lattice neighbors
  std::vector<std::string> part_labels;

  /// Coordinates of an arbitrary input vector in the projection plane.
  std::array<double, 2> project(std::span<const double> x) const;
};

struct HitHistogram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> hits;                 // per unit
  std::vector<std::vector<std::string>> labels;  // per unit, part labels
  std::vector<std::size_t> part_bmu;             // per part

  std::size_t nonempty_units() const;
};

UMatrix compute_umatrix(const SomModel& model);

std::vector<ComponentPlane> component_planes(const SomModel& model);

/// Throws Error when fewer than two parts or all parts are identical.
Projection pca_project(const SomModel& model, const IncidenceMatrix& data);

HitHistogram compute_hits(const SomModel& model, const IncidenceMatrix& data);

/// Pearson correlation of two equally sized series (0 if either is constant).
double pearson(std::span<const double> a, std::span<const double> b);

// --- file output -----------------------------------------------------------

/// Grayscale ramp: minimum white, maximum black, constant surface mid-gray.
std::string gray_fill(double value, double min, double max);

std::string umatrix_svg(const UMatrix& u);
std::string component_plane_svg(const ComponentPlane& plane, const std::string& title);
/// Zero-hit units are drawn hollow. `unit_cluster` (1-based ids) picks a
/// categorical fill per unit when given.
std::string hits_svg(const HitHistogram& h, std::span<const std::size_t> unit_cluster = {});
std::string projection_svg(const Projection& p, std::span<const std::size_t> part_cluster = {});

void export_svg(const UMatrix& u, const std::filesystem::path& path);
void export_svg(const ComponentPlane& plane, const std::filesystem::path& path, const std::string& title);
void export_svg(const HitHistogram& h, const std::filesystem::path& path,
                std::span<const std::size_t> unit_cluster = {});
void export_svg(const Projection& p, const std::filesystem::path& path,
                std::span<const std::size_t> part_cluster = {});

/// Cell id for every unit: the family of the parts it hosts, else that of
/// the nearest hosting unit in codebook space.
std::vector<std::size_t> unit_cells(const SomModel& model, const HitHistogram& hits,
                                    const CellAssignment& assignment);

/// Denormalized data/prototype table: columns source,id,m1..mn,cell.
std::string scatter_csv(const SomModel& model, const IncidenceMatrix& data, const CellAssignment& assignment);
void export_scatter_data(const SomModel& model, const IncidenceMatrix& data, const CellAssignment& assignment,
                         const std::filesystem::path& path);

}  // namespace cellsom
