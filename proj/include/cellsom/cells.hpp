#pragma once

#include <cstddef>
#include <vector>

#include "cellsom/assignment.hpp"
#include "cellsom/incidence.hpp"
#include "cellsom/metrics.hpp"
#include "cellsom/som.hpp"
#include "cellsom/viz.hpp"

namespace cellsom {

/// k-means over the codebook vectors of units with at least one hit:
/// farthest-first seeding (first center drawn with the model's seed), Lloyd
/// iterations until the assignment is stable or 100 rounds. Zero-hit units
/// take the cluster of the nearest hit unit in codebook space. Returns a
/// 1-based cluster id per unit, numbered by first appearance over units.
/// Throws Error unless 1 <= k <= number of hit units.
std::vector<std::size_t> cluster_map(const SomModel& model, const HitHistogram& hits, std::size_t k);

/// Each part takes its BMU's cluster.
std::vector<std::size_t> assign_parts(const std::vector<std::size_t>& unit_clusters, const HitHistogram& hits);

/// Machine j joins the family with the highest share of its parts using j;
/// ties go to the smaller family id. Families are 1-based; ids without parts
/// never receive machines.
std::vector<std::size_t> assign_machines(const IncidenceMatrix& data, const std::vector<std::size_t>& part_family);

/// Drops empty cells and renumbers the rest 1..k keeping their order. Parts
/// whose family received no machine move to the cell where they score the
/// most in-block ones net of voids (smaller id on ties).
CellAssignment compact_assignment(const IncidenceMatrix& data, std::vector<std::size_t> part_family,
                                  std::vector<std::size_t> machine_cell);

/// Hill climb on the part families: single-part moves (into any cell up to
/// k_max, including a fresh one), then pairs of parts moving together or
/// swapping cells. Machines always follow assign_machines, and a move is kept
/// only when it strictly raises efficacy and its machine cells are a fixed
/// point of assign_machines. Never returns a lower efficacy than its input.
CellAssignment refine_assignment(const IncidenceMatrix& data, CellAssignment assignment, std::size_t k_max);

struct SweepEntry {
  std::size_t k_requested = 0;
  CellAssignment assignment;
  Efficacy efficacy;
};

struct CellFormation {
  CellAssignment assignment;
  Efficacy efficacy;
  std::vector<SweepEntry> sweep;
};

/// max(2, ceil(min(P, M) / 2)).
std::size_t default_kmax(std::size_t parts, std::size_t machines);

/// Tries k = 2..min(k_max, hit units, M, P), refines each candidate with
/// refine_assignment and keeps the one with the highest grouping efficacy,
/// the earlier k on ties. When no k >= 2 is possible the single-cell
/// assignment is returned. Throws Error when k_max < 2 or dimensions
/// disagree.
CellFormation form_cells(const SomModel& model, const IncidenceMatrix& data, std::size_t k_max);

/// Rows and columns sorted by (cell id, original index), one block per cell.
BlockDiagonalView build_view(const CellAssignment& assignment);

}  // namespace cellsom
