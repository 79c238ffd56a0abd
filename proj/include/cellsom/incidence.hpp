#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cellsom/error.hpp"

namespace cellsom {

/// Binary part x machine incidence matrix. Rows are parts, columns are
/// machines. Immutable once constructed; every row and column holds at
/// least one 1.
class IncidenceMatrix {
public:
  /// Validates and takes ownership of a row-major P*M grid of 0/1 values.
  /// Throws Error on non-binary values, empty rows/columns or a size mismatch.
  IncidenceMatrix(std::size_t parts, std::size_t machines,
                  std::vector<std::uint8_t> entries);

  std::size_t parts() const noexcept { return parts_; }
  std::size_t machines() const noexcept { return machines_; }

  std::uint8_t at(std::size_t part, std::size_t machine) const {
    return entries_[part * machines_ + machine];
  }
  std::span<const std::uint8_t> row(std::size_t part) const {
    return {entries_.data() + part * machines_, machines_};
  }
  const std::vector<std::uint8_t>& entries() const noexcept { return entries_; }

  /// Part vector as doubles, the SOM's input x.
  std::vector<double> part_vector(std::size_t part) const;

  std::size_t ones() const noexcept;

  std::string part_label(std::size_t part) const { return "p" + std::to_string(part + 1); }
  std::string machine_label(std::size_t machine) const {
    return "m" + std::to_string(machine + 1);
  }
  std::vector<std::string> part_labels() const;
  std::vector<std::string> machine_labels() const;

  IncidenceMatrix transposed() const;

  /// Reorders parts and machines: entry (i, j) of the result is
  /// at(part_order[i], machine_order[j]).
  IncidenceMatrix permuted(std::span<const std::size_t> part_order,
                           std::span<const std::size_t> machine_order) const;

  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

private:
  std::size_t parts_;
  std::size_t machines_;
  std::vector<std::uint8_t> entries_;
};

/// Reads the text matrix format:
///   '#' lines are comments; first line "P M"; then P lines of M 0/1 tokens.
/// When `transpose` is set the file is taken as machines x parts.
IncidenceMatrix parse_matrix(std::istream& in, bool transpose = false);
IncidenceMatrix parse_matrix(const std::string& text, bool transpose = false);
IncidenceMatrix load_matrix(const std::filesystem::path& path, bool transpose = false);

/// Inverse of parse_matrix.
std::string format_matrix(const IncidenceMatrix& m);

/// One diagonal block: half-open ranges into the reordered rows and columns.
struct CellBlock {
  std::size_t part_begin = 0;
  std::size_t part_end = 0;
  std::size_t machine_begin = 0;
  std::size_t machine_end = 0;

  friend bool operator==(const CellBlock&, const CellBlock&) = default;
};

struct BlockDiagonalView {
  std::vector<std::size_t> row_order;  // part indices
  std::vector<std::size_t> col_order;  // machine indices
  std::vector<CellBlock> cells;

  /// Throws DimensionError unless the orders are permutations of the given
  /// sizes and the blocks tile both axes contiguously in order.
  void validate(std::size_t parts, std::size_t machines) const;

  static BlockDiagonalView identity(std::size_t parts, std::size_t machines);
};

/// Text grid of the permuted matrix with labels, '|' between machine ranges
/// and a '-' rule between part ranges.
std::string render_block_diagonal(const IncidenceMatrix& m, const BlockDiagonalView& view);

/// The 10x10 demonstration instance (problem #1).
IncidenceMatrix problem1_matrix();

}  // namespace cellsom
