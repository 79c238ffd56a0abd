#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cellsom/incidence.hpp"

namespace cellsom {

/// Partition of parts into families and machines into cells. Cell ids run
/// 1..k and each id is used by at least one part and one machine.
struct CellAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> part_family;   // per part, in [1, k]
  std::vector<std::size_t> machine_cell;  // per machine, in [1, k]

  /// Throws Error when an id is out of range or a cell is empty on a side.
  void validate() const;
  /// Throws DimensionError unless sized to `m`, then validate().
  void validate_for(const IncidenceMatrix& m) const;

  friend bool operator==(const CellAssignment&, const CellAssignment&) = default;
};

/// Relabels ids to 1..k in order of first appearance over parts then
/// machines. Two assignments equal up to relabeling have equal canonical forms.
CellAssignment canonical(const CellAssignment& a);

bool same_partition(const CellAssignment& a, const CellAssignment& b);

std::string assignment_to_json(const CellAssignment& a, const IncidenceMatrix& m);
CellAssignment assignment_from_json(const std::string& text);

}  // namespace cellsom
