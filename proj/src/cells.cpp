#include "cellsom/cells.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>

namespace cellsom {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

constexpr int kMaxLloydIterations = 100;

}  // namespace

std::vector<std::size_t> cluster_map(const SomModel& model, const HitHistogram& hits, std::size_t k) {
  const std::size_t n = model.input_dim;
  std::vector<std::size_t> active;
  for (std::size_t u = 0; u < model.units(); ++u)
    if (hits.hits[u] > 0) active.push_back(u);
  if (k < 1 || k > active.size())
    throw Error("cluster count " + std::to_string(k) + " must lie in 1.." + std::to_string(active.size()) +
                " (units with hits)");

  std::vector<std::size_t> label(active.size(), 0);  // 0-based cluster per active unit
  if (k > 1) {
    std::mt19937_64 rng(model.seed);
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    std::vector<std::size_t> seeds{pick(rng)};
    std::vector<double> nearest(active.size(), std::numeric_limits<double>::infinity());
    while (seeds.size() < k) {
      auto last = model.unit_vector(active[seeds.back()]);
      for (std::size_t i = 0; i < active.size(); ++i)
        nearest[i] = std::min(nearest[i], sq_dist(model.unit_vector(active[i]), last));
      std::size_t far = 0;
      for (std::size_t i = 1; i < active.size(); ++i)
        if (nearest[i] > nearest[far]) far = i;
      seeds.push_back(far);
    }

    std::vector<double> centers(k * n);
    for (std::size_t c = 0; c < k; ++c) {
      auto v = model.unit_vector(active[seeds[c]]);
      std::copy(v.begin(), v.end(), centers.begin() + static_cast<std::ptrdiff_t>(c * n));
    }
    std::vector<std::size_t> prev;
    for (int it = 0; it < kMaxLloydIterations; ++it) {
      for (std::size_t i = 0; i < active.size(); ++i) {
        auto x = model.unit_vector(active[i]);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
          double d = sq_dist(x, std::span<const double>(centers.data() + c * n, n));
          if (d < best_d) {
            best_d = d;
            best = c;
          }
        }
        label[i] = best;
      }
      if (label == prev) break;
      prev = label;
      std::vector<double> sum(k * n, 0.0);
      std::vector<std::size_t> count(k, 0);
      for (std::size_t i = 0; i < active.size(); ++i) {
        auto x = model.unit_vector(active[i]);
        for (std::size_t j = 0; j < n; ++j) sum[label[i] * n + j] += x[j];
        ++count[label[i]];
      }
      for (std::size_t c = 0; c < k; ++c)
        if (count[c] > 0)
          for (std::size_t j = 0; j < n; ++j) centers[c * n + j] = sum[c * n + j] / static_cast<double>(count[c]);
    }
  }

  // Renumber by first appearance; clusters left empty by Lloyd vanish.
  std::map<std::size_t, std::size_t> relabel;
  std::vector<std::size_t> out(model.units(), 0);
  for (std::size_t i = 0; i < active.size(); ++i) {
    auto [it, inserted] = relabel.try_emplace(label[i], relabel.size() + 1);
    out[active[i]] = it->second;
  }
  for (std::size_t u = 0; u < model.units(); ++u) {
    if (hits.hits[u] > 0) continue;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t a : active) {
      double d = sq_dist(model.unit_vector(u), model.unit_vector(a));
      if (d < best_d) {
        best_d = d;
        out[u] = out[a];
      }
    }
  }
  return out;
}

std::vector<std::size_t> assign_parts(const std::vector<std::size_t>& unit_clusters, const HitHistogram& hits) {
  std::vector<std::size_t> fam;
  fam.reserve(hits.part_bmu.size());
  for (std::size_t bmu : hits.part_bmu) fam.push_back(unit_clusters.at(bmu));
  return fam;
}

std::vector<std::size_t> assign_machines(const IncidenceMatrix& data, const std::vector<std::size_t>& part_family) {
  if (part_family.size() != data.parts()) throw DimensionError("part family vector does not match matrix");
  const std::size_t k = part_family.empty() ? 0 : *std::max_element(part_family.begin(), part_family.end());
  std::vector<std::size_t> size(k + 1, 0);
  for (std::size_t c : part_family) ++size[c];

  std::vector<std::size_t> out(data.machines(), 0);
  for (std::size_t j = 0; j < data.machines(); ++j) {
    std::vector<std::size_t> ones(k + 1, 0);
    for (std::size_t p = 0; p < data.parts(); ++p) ones[part_family[p]] += data.at(p, j);
    std::size_t best = 0;
    for (std::size_t c = 1; c <= k; ++c) {
      if (size[c] == 0) continue;
      // ones[c]/size[c] > ones[best]/size[best], exactly.
      if (best == 0 || ones[c] * size[best] > ones[best] * size[c]) best = c;
    }
    out[j] = best;
  }
  return out;
}

CellAssignment compact_assignment(const IncidenceMatrix& data, std::vector<std::size_t> part_family,
                                  std::vector<std::size_t> machine_cell) {
  std::size_t k = 0;
  for (std::size_t c : part_family) k = std::max(k, c);
  for (std::size_t c : machine_cell) k = std::max(k, c);
  std::vector<std::size_t> machines_in(k + 1, 0);
  for (std::size_t c : machine_cell) ++machines_in[c];

  for (std::size_t p = 0; p < part_family.size(); ++p) {
    if (machines_in[part_family[p]] > 0) continue;
    std::size_t best = 0;
    long best_score = std::numeric_limits<long>::min();
    for (std::size_t c = 1; c <= k; ++c) {
      if (machines_in[c] == 0) continue;
      long ones = 0;
      for (std::size_t j = 0; j < machine_cell.size(); ++j)
        if (machine_cell[j] == c) ones += data.at(p, j);
      long s = 2 * ones - static_cast<long>(machines_in[c]);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    part_family[p] = best;
  }

  std::vector<bool> has_part(k + 1, false);
  for (std::size_t c : part_family) has_part[c] = true;
  std::vector<std::size_t> renumber(k + 1, 0);
  std::size_t next = 0;
  for (std::size_t c = 1; c <= k; ++c)
    if (has_part[c] && machines_in[c] > 0) renumber[c] = ++next;

  CellAssignment a;
  a.k = next;
  for (std::size_t c : part_family) a.part_family.push_back(renumber[c]);
  // A machine whose cell lost all parts cannot occur: machines only join
  // families that have parts, and such parts are never moved out.
  for (std::size_t c : machine_cell) a.machine_cell.push_back(renumber[c]);
  a.validate();
  return a;
}

namespace {

// Per-family column counts for scoring family changes without a full pass.
class FamilyStats {
public:
  FamilyStats(const IncidenceMatrix& data, const std::vector<std::size_t>& families, std::size_t cells)
      : data_(data), m_(data.machines()), ones_((cells + 1) * m_, 0), size_(cells + 1, 0), used_(cells + 1, 0) {
    for (std::size_t p = 0; p < families.size(); ++p) move(p, 0, families[p]);
    n1_ = static_cast<std::int64_t>(data.ones());
  }

  // Moves part p from family `from` to `to`; family 0 means "nowhere".
  void move(std::size_t p, std::size_t from, std::size_t to) {
    auto row = data_.row(p);
    if (from) {
      --size_[from];
      for (std::size_t j = 0; j < m_; ++j) ones_[from * m_ + j] -= row[j];
    }
    if (to) {
      ++size_[to];
      for (std::size_t j = 0; j < m_; ++j) ones_[to * m_ + j] += row[j];
    }
  }

  // Efficacy with machines placed by density, or nullopt when some family
  // with parts receives no machine (compaction would move parts).
  std::optional<Efficacy> score() {
    const std::size_t cells = size_.size() - 1;
    std::fill(used_.begin(), used_.end(), 0);
    std::int64_t in_ones = 0, in_elems = 0;
    for (std::size_t j = 0; j < m_; ++j) {
      std::size_t best = 0;
      for (std::size_t c = 1; c <= cells; ++c) {
        if (size_[c] == 0) continue;
        if (best == 0 || ones_[c * m_ + j] * size_[best] > ones_[best * m_ + j] * size_[c]) best = c;
      }
      in_ones += ones_[best * m_ + j];
      in_elems += size_[best];
      ++used_[best];
    }
    for (std::size_t c = 1; c <= cells; ++c)
      if (size_[c] > 0 && used_[c] == 0) return std::nullopt;
    return Efficacy{in_ones, n1_ + in_elems - in_ones};
  }

private:
  const IncidenceMatrix& data_;
  std::size_t m_;
  std::vector<std::int64_t> ones_;
  std::vector<std::int64_t> size_;
  std::vector<std::size_t> used_;
  std::int64_t n1_ = 0;
};

}  // namespace

CellAssignment refine_assignment(const IncidenceMatrix& data, CellAssignment assignment, std::size_t k_max) {
  assignment.validate_for(data);
  const std::size_t P = data.parts();
  Efficacy best = grouping_efficacy(count_blocks(data, assignment));
  auto cell_limit = [&] { return std::min({k_max, assignment.k + 1, P, data.machines()}); };
  std::optional<FamilyStats> stats;
  auto rebuild = [&] { stats.emplace(data, assignment.part_family, assignment.k + 1); };
  rebuild();

  auto accept = [&](const std::vector<std::size_t>& families) {
    auto cand = compact_assignment(data, families, assign_machines(data, families));
    if (assign_machines(data, cand.part_family) != cand.machine_cell) return false;
    auto e = grouping_efficacy(count_blocks(data, cand));
    if (!(e > best)) return false;
    best = e;
    assignment = std::move(cand);
    rebuild();
    return true;
  };
  // Scores the families after `moves` (part, new family); keeps strict gains
  // whose machine cells are a fixed point of assign_machines.
  auto try_moves = [&](std::initializer_list<std::pair<std::size_t, std::size_t>> moves) {
    auto f = assignment.part_family;
    for (auto [p, c] : moves) f[p] = c;
    if (f == assignment.part_family) return false;
    for (auto [p, c] : moves) stats->move(p, assignment.part_family[p], c);
    auto e = stats->score();
    for (auto [p, c] : moves) stats->move(p, c, assignment.part_family[p]);
    // Without an empty machine-less family the result needs no compaction,
    // so it is already a fixed point and can be judged from the counts.
    if (e && !(*e > best)) return false;
    return accept(f);
  };

  auto single_moves = [&] {
    bool any = false;
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t c = 1; c <= cell_limit(); ++c) any |= try_moves({{p, c}});
    return any;
  };
  // Two parts moving to the same cell, or trading cells.
  auto pair_moves = [&] {
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = p + 1; q < P; ++q) {
        for (std::size_t c = 1; c <= cell_limit(); ++c)
          if (try_moves({{p, c}, {q, c}})) return true;
        if (try_moves({{p, assignment.part_family[q]}, {q, assignment.part_family[p]}})) return true;
      }
    return false;
  };

  while (single_moves() || pair_moves()) {
  }
  return assignment;
}

std::size_t default_kmax(std::size_t parts, std::size_t machines) {
  return std::max<std::size_t>(2, (std::min(parts, machines) + 1) / 2);
}

CellFormation form_cells(const SomModel& model, const IncidenceMatrix& data, std::size_t k_max) {
  if (k_max < 2) throw Error("k_max must be at least 2");
  if (data.machines() != model.input_dim)
    throw DimensionError("model expects " + std::to_string(model.input_dim) + " machines, matrix has " +
                         std::to_string(data.machines()));
  const HitHistogram hits = compute_hits(model, data);
  const std::size_t k_hi = std::min({k_max, hits.nonempty_units(), data.machines(), data.parts()});

  CellFormation out;
  if (k_hi < 2) {
    CellAssignment single{1, std::vector<std::size_t>(data.parts(), 1), std::vector<std::size_t>(data.machines(), 1)};
    out.efficacy = grouping_efficacy(count_blocks(data, single));
    out.assignment = single;
    out.sweep.push_back({1, single, out.efficacy});
    return out;
  }

  out.sweep.resize(k_hi - 1);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.sweep.size());
#pragma omp parallel for schedule(dynamic, 1) if (n > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) + 2;
    auto clusters = cluster_map(model, hits, k);
    auto families = assign_parts(clusters, hits);
    auto machines = assign_machines(data, families);
    auto a = refine_assignment(data, compact_assignment(data, std::move(families), std::move(machines)), k_max);
    out.sweep[static_cast<std::size_t>(i)] = {k, a, grouping_efficacy(count_blocks(data, a))};
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.sweep.size(); ++i)
    if (out.sweep[i].efficacy > out.sweep[best].efficacy) best = i;
  out.assignment = out.sweep[best].assignment;
  out.efficacy = out.sweep[best].efficacy;
  return out;
}

BlockDiagonalView build_view(const CellAssignment& assignment) {
  assignment.validate();
  BlockDiagonalView v;
  v.row_order.resize(assignment.part_family.size());
  v.col_order.resize(assignment.machine_cell.size());
  std::iota(v.row_order.begin(), v.row_order.end(), std::size_t{0});
  std::iota(v.col_order.begin(), v.col_order.end(), std::size_t{0});
  std::stable_sort(v.row_order.begin(), v.row_order.end(),
                   [&](std::size_t a, std::size_t b) { return assignment.part_family[a] < assignment.part_family[b]; });
  std::stable_sort(v.col_order.begin(), v.col_order.end(), [&](std::size_t a, std::size_t b) {
    return assignment.machine_cell[a] < assignment.machine_cell[b];
  });
  std::size_t pr = 0, mc = 0;
  for (std::size_t c = 1; c <= assignment.k; ++c) {
    std::size_t np = static_cast<std::size_t>(std::count(assignment.part_family.begin(), assignment.part_family.end(), c));
    std::size_t nm =
        static_cast<std::size_t>(std::count(assignment.machine_cell.begin(), assignment.machine_cell.end(), c));
    v.cells.push_back({pr, pr + np, mc, mc + nm});
    pr += np;
    mc += nm;
  }
  return v;
}

}  // namespace cellsom
