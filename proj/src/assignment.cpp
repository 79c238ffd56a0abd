#include "cellsom/assignment.hpp"

#include <map>

#include <json.hpp>

namespace cellsom {

void CellAssignment::validate() const {
  if (k == 0) throw Error("assignment must have at least one cell");
  std::vector<bool> has_part(k + 1, false), has_machine(k + 1, false);
  for (std::size_t c : part_family) {
    if (c < 1 || c > k) throw Error("part family id " + std::to_string(c) + " outside 1.." + std::to_string(k));
    has_part[c] = true;
  }
  for (std::size_t c : machine_cell) {
    if (c < 1 || c > k) throw Error("machine cell id " + std::to_string(c) + " outside 1.." + std::to_string(k));
    has_machine[c] = true;
  }
  for (std::size_t c = 1; c <= k; ++c)
    if (!has_part[c] || !has_machine[c]) throw Error("cell " + std::to_string(c) + " is empty on one side");
}

void CellAssignment::validate_for(const IncidenceMatrix& m) const {
  if (part_family.size() != m.parts() || machine_cell.size() != m.machines())
    throw DimensionError("assignment sized " + std::to_string(part_family.size()) + "x" +
                         std::to_string(machine_cell.size()) + " does not match matrix " +
                         std::to_string(m.parts()) + "x" + std::to_string(m.machines()));
  validate();
}

CellAssignment canonical(const CellAssignment& a) {
  std::map<std::size_t, std::size_t> relabel;
  auto map_id = [&](std::size_t c) {
    auto [it, inserted] = relabel.try_emplace(c, relabel.size() + 1);
    return it->second;
  };
  CellAssignment out;
  for (std::size_t c : a.part_family) out.part_family.push_back(map_id(c));
  for (std::size_t c : a.machine_cell) out.machine_cell.push_back(map_id(c));
  out.k = relabel.size();
  return out;
}

bool same_partition(const CellAssignment& a, const CellAssignment& b) { return canonical(a) == canonical(b); }

std::string assignment_to_json(const CellAssignment& a, const IncidenceMatrix& m) {
  nlohmann::json j;
  j["k"] = a.k;
  j["part_family"] = a.part_family;
  j["machine_cell"] = a.machine_cell;
  j["part_labels"] = m.part_labels();
  j["machine_labels"] = m.machine_labels();
  return j.dump(2) + "\n";
}

CellAssignment assignment_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    CellAssignment a;
    a.k = j.at("k").get<std::size_t>();
    a.part_family = j.at("part_family").get<std::vector<std::size_t>>();
    a.machine_cell = j.at("machine_cell").get<std::vector<std::size_t>>();
    a.validate();
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed assignment JSON: ") + e.what());
  }
}

}  // namespace cellsom
