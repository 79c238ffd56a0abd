#include "cellsom/metrics.hpp"

#include <array>
#include <vector>

namespace cellsom {

namespace {

using Labels = std::vector<std::uint8_t>;  // 0-based family per part

// Restricted growth strings of length n with at most k distinct values, in
// lexicographic order. Each is a canonical labeling of a set partition.
std::vector<Labels> part_labelings(std::size_t n, std::size_t k) {
  std::vector<Labels> out;
  Labels cur(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::uint8_t used) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (std::uint8_t c = 0; c <= used && c < k; ++c) {
      cur[i] = c;
      self(self, i + 1, std::max<std::uint8_t>(used, static_cast<std::uint8_t>(c + 1)));
    }
  };
  cur[0] = 0;
  if (n > 0) rec(rec, 1, 1);
  return out;
}

struct Best {
  Efficacy mu{0, 1};
  bool found = false;
  Labels machines;
  std::uint64_t evaluated = 0;
};

// Exhaustive machine assignment for a fixed part partition. Machines are
// tried in lexicographic order and only strict improvements replace the
// incumbent, so the first optimum found is the lexicographically smallest.
Best best_for_partition(const IncidenceMatrix& data, const Labels& parts) {
  const std::size_t m = data.machines();
  std::uint8_t families = 0;
  for (auto c : parts) families = std::max<std::uint8_t>(families, static_cast<std::uint8_t>(c + 1));

  std::array<std::int64_t, kOracleMaxCells> size{};
  for (auto c : parts) ++size[c];
  // ones[j][c]: ones of machine j among parts of family c.
  std::vector<std::array<std::int64_t, kOracleMaxCells>> ones(m);
  std::int64_t n1 = 0;
  for (std::size_t p = 0; p < data.parts(); ++p)
    for (std::size_t j = 0; j < m; ++j)
      if (data.at(p, j)) {
        ++ones[j][parts[p]];
        ++n1;
      }

  // rest_ones[j]: most in-block ones machines j.. can still add.
  std::vector<std::int64_t> rest_ones(m + 1, 0);
  for (std::size_t j = m; j-- > 0;) {
    std::int64_t mx = 0;
    for (std::uint8_t c = 0; c < families; ++c) mx = std::max(mx, ones[j][c]);
    rest_ones[j] = rest_ones[j + 1] + mx;
  }

  Best best;
  Labels cur(m, 0);
  std::array<std::size_t, kOracleMaxCells> used{};
  auto rec = [&](auto&& self, std::size_t j, std::int64_t in_ones, std::int64_t voids,
                 std::size_t uncovered) -> void {
    if (uncovered > m - j) return;
    // No completion can beat the incumbent strictly: prune.
    if (best.found && Efficacy{in_ones + rest_ones[j], n1 + voids} <= best.mu) return;
    if (j == m) {
      ++best.evaluated;
      Efficacy mu{in_ones, n1 + voids};
      if (!best.found || mu > best.mu) {
        best.mu = mu;
        best.found = true;
        best.machines = cur;
      }
      return;
    }
    for (std::uint8_t c = 0; c < families; ++c) {
      cur[j] = c;
      std::size_t unc = uncovered - (used[c] == 0 ? 1 : 0);
      ++used[c];
      self(self, j + 1, in_ones + ones[j][c], voids + size[c] - ones[j][c], unc);
      --used[c];
    }
  };
  rec(rec, 0, 0, 0, families);
  return best;
}

}  // namespace

OracleResult oracle_best_assignment(const IncidenceMatrix& data, std::size_t k, Execution exec) {
  if (k == 0) throw Error("oracle needs k >= 1");
  if (data.parts() > kOracleMaxParts || data.machines() > kOracleMaxMachines || k > kOracleMaxCells)
    throw Error("instance " + std::to_string(data.parts()) + "x" + std::to_string(data.machines()) + " with k=" +
                std::to_string(k) + " exceeds the oracle bound (P <= " + std::to_string(kOracleMaxParts) +
                ", M <= " + std::to_string(kOracleMaxMachines) + ", k <= " + std::to_string(kOracleMaxCells) + ")");

  // A family count above M cannot give every cell a machine.
  const std::size_t kk = std::min({k, data.parts(), data.machines()});
  const auto labelings = part_labelings(data.parts(), kk);
  std::vector<Best> per(labelings.size());

  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(labelings.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) per[i] = best_for_partition(data, labelings[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) per[i] = best_for_partition(data, labelings[i]);
  }

  // Labelings are in lexicographic order: keep the first strict maximum.
  OracleResult result;
  std::size_t best_i = 0;
  bool found = false;
  for (std::size_t i = 0; i < per.size(); ++i) {
    result.evaluated += per[i].evaluated;
    if (per[i].found && (!found || per[i].mu > per[best_i].mu)) {
      best_i = i;
      found = true;
    }
  }
  if (!found) throw Error("oracle found no feasible assignment");
  result.efficacy = per[best_i].mu;
  std::size_t cells = 0;
  for (auto c : labelings[best_i]) {
    result.assignment.part_family.push_back(c + 1u);
    cells = std::max<std::size_t>(cells, c + 1u);
  }
  for (auto c : per[best_i].machines) result.assignment.machine_cell.push_back(c + 1u);
  result.assignment.k = cells;
  return result;
}

}  // namespace cellsom
