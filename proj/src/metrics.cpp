#include "cellsom/metrics.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace cellsom {

BlockCounts count_blocks(const IncidenceMatrix& data, const CellAssignment& assignment) {
  if (assignment.part_family.size() != data.parts() || assignment.machine_cell.size() != data.machines())
    throw DimensionError("assignment does not match matrix dimensions");
  BlockCounts c;
  c.total_elements = data.parts() * data.machines();
  for (std::size_t p = 0; p < data.parts(); ++p)
    for (std::size_t j = 0; j < data.machines(); ++j) {
      bool in = assignment.part_family[p] == assignment.machine_cell[j];
      bool one = data.at(p, j) == 1;
      c.n1 += one;
      c.in_block_elements += in;
      c.n1_out += one && !in;
      c.n0_in += !one && in;
    }
  return c;
}

Efficacy grouping_efficacy(const BlockCounts& counts) {
  if (counts.n1 == 0) throw Error("grouping efficacy is undefined for a matrix without ones");
  return {static_cast<std::int64_t>(counts.n1 - counts.n1_out), static_cast<std::int64_t>(counts.n1 + counts.n0_in)};
}

Efficiency grouping_efficiency(const BlockCounts& counts, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error("efficiency weight r must satisfy 0 < r < 1");
  Efficiency e;
  if (counts.in_block_elements > 0)
    e.eta1 = static_cast<double>(counts.n1 - counts.n1_out) / static_cast<double>(counts.in_block_elements);
  const std::size_t off_elements = counts.total_elements - counts.in_block_elements;
  if (off_elements > 0)
    e.eta2 = static_cast<double>(off_elements - counts.n1_out) / static_cast<double>(off_elements);
  e.eta = r * e.eta1 + (1.0 - r) * e.eta2;
  return e;
}

GroupingScore score(const IncidenceMatrix& data, const CellAssignment& assignment, double r) {
  GroupingScore s;
  s.counts = count_blocks(data, assignment);
  s.efficacy = grouping_efficacy(s.counts);
  auto e = grouping_efficiency(s.counts, r);
  s.r = r;
  s.eta1 = e.eta1;
  s.eta2 = e.eta2;
  s.efficiency = e.eta;
  return s;
}

std::string score_to_json(const GroupingScore& s) {
  auto fixed4 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  nlohmann::ordered_json j;
  j["n1"] = s.counts.n1;
  j["n1_out"] = s.counts.n1_out;
  j["n0_in"] = s.counts.n0_in;
  j["in_block_elements"] = s.counts.in_block_elements;
  j["total_elements"] = s.counts.total_elements;
  j["efficacy"] = s.efficacy.str();
  j["efficacy_num"] = s.efficacy.num;
  j["efficacy_den"] = s.efficacy.den;
  j["efficacy_value"] = fixed4(s.efficacy.value());
  j["efficacy_percent"] = fixed4(100.0 * s.efficacy.value());
  j["r"] = s.r;
  j["eta1"] = s.eta1;
  j["eta2"] = s.eta2;
  j["efficiency"] = s.efficiency;
  return j.dump(2) + "\n";
}

}  // namespace cellsom
