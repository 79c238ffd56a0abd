#include "cellsom/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "cellsom/file_util.hpp"
#include "cellsom/kernels.hpp"

namespace cellsom {

namespace {

// Augmented-grid cell of the pair (a, b) on a hexagonal lattice whose odd
// rows are shifted right.
std::pair<std::size_t, std::size_t> augmented_cell(const MapGrid& g, std::size_t a, std::size_t b) {
  std::size_t ra = g.row_of(a), ca = g.col_of(a), rb = g.row_of(b), cb = g.col_of(b);
  if (ra == rb) return {2 * ra, 2 * std::min(ca, cb) + 1};
  std::size_t top = std::min(ra, rb);
  if (ca == cb) return {2 * top + 1, 2 * ca};
  return {2 * top + 1, 2 * std::min(ca, cb) + 1};
}

}  // namespace

double UMatrix::unit_value(std::size_t unit) const {
  std::size_t r = unit / unit_cols, c = unit % unit_cols;
  return at(2 * r, 2 * c);
}

double UMatrix::pair_value(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{a, b},
                             [](const UMatrixPair& p, const std::pair<std::size_t, std::size_t>& key) {
                               return std::pair{p.a, p.b} < key;
                             });
  if (it == pairs.end() || it->a != a || it->b != b)
    throw Error("units " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
  return it->value;
}

UMatrix compute_umatrix(const SomModel& model) {
  const MapGrid& g = model.grid;
  UMatrix u;
  u.unit_rows = g.rows();
  u.unit_cols = g.cols();
  u.values.assign(u.rows() * u.cols(), 0.0);

  auto adj = g.adjacent_pairs();
  std::vector<std::size_t> pa, pb;
  for (auto [a, b] : adj) {
    pa.push_back(a);
    pb.push_back(b);
  }
  std::vector<double> d(adj.size());
  kernels::parallel::pair_distances(model.codebook, model.input_dim, pa, pb, d);

  std::vector<double> sum(g.units(), 0.0);
  std::vector<std::size_t> count(g.units(), 0);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    u.pairs.push_back({pa[i], pb[i], d[i]});
    auto [r, c] = augmented_cell(g, pa[i], pb[i]);
    u.values[r * u.cols() + c] = d[i];
    sum[pa[i]] += d[i];
    sum[pb[i]] += d[i];
    ++count[pa[i]];
    ++count[pb[i]];
  }
  for (std::size_t unit = 0; unit < g.units(); ++unit)
    u.values[2 * g.row_of(unit) * u.cols() + 2 * g.col_of(unit)] =
        count[unit] ? sum[unit] / static_cast<double>(count[unit]) : 0.0;
  return u;
}

std::vector<ComponentPlane> component_planes(const SomModel& model) {
  std::vector<ComponentPlane> out;
  for (std::size_t j = 0; j < model.input_dim; ++j) {
    ComponentPlane p{j, model.grid.rows(), model.grid.cols(), {}};
    p.values.reserve(model.units());
    for (std::size_t u = 0; u < model.units(); ++u) p.values.push_back(model.codebook[u * model.input_dim + j]);
    out.push_back(std::move(p));
  }
  return out;
}

std::array<double, 2> Projection::project(std::span<const double> x) const {
  std::array<double, 2> out{0.0, 0.0};
  for (std::size_t a = 0; a < pc_axes.size() && a < 2; ++a)
    for (std::size_t k = 0; k < mean.size(); ++k) out[a] += (x[k] - mean[k]) * pc_axes[a].vector[k];
  return out;
}

Projection pca_project(const SomModel& model, const IncidenceMatrix& data) {
  if (data.parts() < 2) throw Error("projection needs at least two parts");
  if (data.machines() != model.input_dim) throw DimensionError("model and matrix dimensions differ");
  std::vector<double> samples(data.entries().begin(), data.entries().end());
  auto pc = principal_components(samples, data.parts(), data.machines(), 2);
  if (pc.components.empty() || pc.components[0].value <= 1e-12)
    throw Error("projection undefined: all parts are identical (zero variance)");

  Projection p;
  p.mean = pc.mean;
  p.pc_axes = pc.components;
  for (std::size_t i = 0; i < data.parts(); ++i) {
    p.part_points.push_back(p.project(std::span<const double>(samples.data() + i * data.machines(), data.machines())));
    p.part_labels.push_back(data.part_label(i));
  }
  for (std::size_t u = 0; u < model.units(); ++u) p.unit_points.push_back(p.project(model.unit_vector(u)));
  p.unit_edges = model.grid.adjacent_pairs();
  return p;
}

std::size_t HitHistogram::nonempty_units() const {
  return static_cast<std::size_t>(std::count_if(hits.begin(), hits.end(), [](std::size_t h) { return h > 0; }));
}

HitHistogram compute_hits(const SomModel& model, const IncidenceMatrix& data) {
  HitHistogram h;
  h.rows = model.grid.rows();
  h.cols = model.grid.cols();
  h.hits.assign(model.units(), 0);
  h.labels.assign(model.units(), {});
  h.part_bmu = find_bmus(model, data);
  for (std::size_t p = 0; p < data.parts(); ++p) {
    ++h.hits[h.part_bmu[p]];
    h.labels[h.part_bmu[p]].push_back(data.part_label(p));
  }
  return h;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("pearson: series lengths differ");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0 || sbb <= 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::size_t> unit_cells(const SomModel& model, const HitHistogram& hits,
                                    const CellAssignment& assignment) {
  const std::size_t units = model.units();
  std::vector<std::size_t> cell(units, 0);
  // Majority family among the unit's parts, smaller id on ties.
  std::vector<std::map<std::size_t, std::size_t>> votes(units);
  for (std::size_t p = 0; p < hits.part_bmu.size(); ++p) ++votes[hits.part_bmu[p]][assignment.part_family[p]];
  for (std::size_t u = 0; u < units; ++u) {
    std::size_t best = 0, best_n = 0;
    for (auto [c, n] : votes[u])
      if (n > best_n) {
        best = c;
        best_n = n;
      }
    cell[u] = best;
  }
  for (std::size_t u = 0; u < units; ++u) {
    if (cell[u] != 0 || hits.hits[u] > 0) continue;
    double best_d = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t v = 0; v < units; ++v) {
      if (hits.hits[v] == 0) continue;
      double d = 0;
      auto x = model.unit_vector(u), y = model.unit_vector(v);
      for (std::size_t k = 0; k < model.input_dim; ++k) d += (x[k] - y[k]) * (x[k] - y[k]);
      if (d < best_d) {
        best_d = d;
        best = cell[v];
      }
    }
    cell[u] = best;
  }
  return cell;
}

std::string scatter_csv(const SomModel& model, const IncidenceMatrix& data, const CellAssignment& assignment) {
  assignment.validate_for(data);
  auto hits = compute_hits(model, data);
  auto ucell = unit_cells(model, hits, assignment);

  std::string out = "source,id";
  for (std::size_t j = 0; j < data.machines(); ++j) out += "," + data.machine_label(j);
  out += ",cell\n";
  for (std::size_t p = 0; p < data.parts(); ++p) {
    out += "data," + data.part_label(p);
    for (std::size_t j = 0; j < data.machines(); ++j) out += data.at(p, j) ? ",1" : ",0";
    out += "," + std::to_string(assignment.part_family[p]) + "\n";
  }
  char buf[40];
  for (std::size_t u = 0; u < model.units(); ++u) {
    out += "prototype,u" + std::to_string(u + 1);
    for (double v : model.unit_vector(u)) {
      std::snprintf(buf, sizeof buf, ",%.10g", v);
      out += buf;
    }
    out += "," + std::to_string(ucell[u]) + "\n";
  }
  return out;
}

void export_scatter_data(const SomModel& model, const IncidenceMatrix& data, const CellAssignment& assignment,
                         const std::filesystem::path& path) {
  write_file_atomic(path, scatter_csv(model, data, assignment));
}

}  // namespace cellsom
