#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

#include "cellsom/assignment.hpp"
#include "cellsom/incidence.hpp"

namespace cellsom {

/// Exact grouping efficacy (N1 - N1out) / (N1 + N0in), kept unreduced so the
/// counts stay visible. Comparison is by value, so 50/52 == 25/26.
struct Efficacy {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Efficacy& a, const Efficacy& b) noexcept { return a.num * b.den == b.num * a.den; }
  friend std::strong_ordering operator<=>(const Efficacy& a, const Efficacy& b) noexcept {
    return a.num * b.den <=> b.num * a.den;
  }
};

struct BlockCounts {
  std::size_t n1 = 0;                 // ones in the matrix
  std::size_t n1_out = 0;             // exceptional elements
  std::size_t n0_in = 0;              // voids
  std::size_t in_block_elements = 0;  // cells inside diagonal blocks
  std::size_t total_elements = 0;     // P * M
};

struct GroupingScore {
  BlockCounts counts;
  Efficacy efficacy;
  double r = 0.5;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double efficiency = 0.0;
};

/// Entry (p, j) is in-block iff part_family[p] == machine_cell[j].
BlockCounts count_blocks(const IncidenceMatrix& data, const CellAssignment& assignment);

/// Throws Error when counts.n1 == 0.
Efficacy grouping_efficacy(const BlockCounts& counts);

struct Efficiency {
  double eta1 = 1.0;
  double eta2 = 1.0;
  double eta = 1.0;
};

/// eta = r*eta1 + (1-r)*eta2. A ratio with an empty denominator counts as 1.
/// Throws Error unless 0 < r < 1.
Efficiency grouping_efficiency(const BlockCounts& counts, double r);

GroupingScore score(const IncidenceMatrix& data, const CellAssignment& assignment, double r = 0.5);

std::string score_to_json(const GroupingScore& s);

enum class Execution { serial, parallel };

struct OracleResult {
  CellAssignment assignment;
  Efficacy efficacy;
  std::uint64_t evaluated = 0;  // complete assignments scored (after pruning)
};

inline constexpr std::size_t kOracleMaxParts = 10;
inline constexpr std::size_t kOracleMaxMachines = 10;
inline constexpr std::size_t kOracleMaxCells = 3;

/// Exhaustive optimum over every assignment with at most k cells in which
/// each cell holds a part and a machine. Ties go to the lexicographically
/// smallest canonical (part_family, machine_cell). Throws Error beyond
/// P, M <= 10 and k <= 3.
OracleResult oracle_best_assignment(const IncidenceMatrix& data, std::size_t k,
                                    Execution exec = Execution::parallel);

}  // namespace cellsom
