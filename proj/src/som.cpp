#include "cellsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <regex>

#include <json.hpp>

#include "cellsom/error.hpp"
#include "cellsom/file_util.hpp"
#include "cellsom/kernels.hpp"
#include "cellsom/pca.hpp"

namespace cellsom {

namespace {

constexpr double kRowHeight = 0.86602540378443864676;  // sqrt(3)/2
constexpr double kRankEps = 1e-12;

std::vector<double> data_as_doubles(const IncidenceMatrix& data) {
  return {data.entries().begin(), data.entries().end()};
}

}  // namespace

// --- MapGrid ---------------------------------------------------------------

MapGrid::MapGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw Error("map grid needs at least one row and one column");
}

double MapGrid::sq_distance(std::size_t a, std::size_t b) const noexcept {
  // Work in half-unit x steps: 2x = 2*col + (row odd), y^2 = 3/4 * row^2.
  auto twice_x = [this](std::size_t u) {
    return static_cast<long long>(2 * col_of(u) + (row_of(u) % 2));
  };
  long long dx2 = twice_x(a) - twice_x(b);
  long long dr = static_cast<long long>(row_of(a)) - static_cast<long long>(row_of(b));
  return static_cast<double>(dx2 * dx2 + 3 * dr * dr) / 4.0;
}

void MapGrid::sq_distances_from(std::size_t unit, std::span<double> out) const noexcept {
  for (std::size_t v = 0; v < units(); ++v) out[v] = sq_distance(unit, v);
}

std::vector<double> MapGrid::sq_distances_from(std::size_t unit) const {
  std::vector<double> out(units());
  sq_distances_from(unit, out);
  return out;
}

double MapGrid::x(std::size_t unit) const noexcept {
  return static_cast<double>(col_of(unit)) + (row_of(unit) % 2 == 1 ? 0.5 : 0.0);
}

double MapGrid::y(std::size_t unit) const noexcept { return static_cast<double>(row_of(unit)) * kRowHeight; }

double MapGrid::distance(std::size_t a, std::size_t b) const noexcept { return std::sqrt(sq_distance(a, b)); }

std::vector<std::size_t> MapGrid::neighbors(std::size_t unit) const {
  std::vector<std::size_t> out;
  const std::size_t r0 = row_of(unit) ? row_of(unit) - 1 : 0, r1 = std::min(rows_ - 1, row_of(unit) + 1);
  const std::size_t c0 = col_of(unit) ? col_of(unit) - 1 : 0, c1 = std::min(cols_ - 1, col_of(unit) + 1);
  for (std::size_t r = r0; r <= r1; ++r)
    for (std::size_t c = c0; c <= c1; ++c) {
      std::size_t v = unit_at(r, c);
      if (v != unit && sq_distance(unit, v) == 1.0) out.push_back(v);
    }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> MapGrid::adjacent_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < units(); ++a)
    for (std::size_t b : neighbors(a))
      if (a < b) out.emplace_back(a, b);
  return out;
}

MapGrid default_grid(std::size_t parts) {
  const double target = 5.0 * std::sqrt(static_cast<double>(std::max<std::size_t>(parts, 1)));
  for (std::size_t s = 1;; ++s) {
    if (static_cast<double>(s * s) >= target) return {s, s};
    if (static_cast<double>((s + 1) * s) >= target) return {s + 1, s};
  }
}

MapGrid parse_grid(const std::string& text) {
  static const std::regex re(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw Error("grid must look like RxC, got '" + text + "'");
  std::size_t rows = std::stoul(m[1].str()), cols = std::stoul(m[2].str());
  if (rows == 0 || cols == 0) throw Error("grid dimensions must be positive, got '" + text + "'");
  if (rows * cols > 10000) throw Error("grid '" + text + "' exceeds 10000 units");
  return {rows, cols};
}

// --- TrainingSchedule -------------------------------------------------------

void TrainingSchedule::validate() const {
  if (phases.empty()) throw Error("training schedule has no phases");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto& p = phases[i];
    const std::string where = "phase " + std::to_string(i + 1) + ": ";
    if (p.epochs == 0) throw Error(where + "epochs must be positive");
    if (!(p.alpha_start >= 0.0 && p.alpha_start <= 1.0 && p.alpha_end >= 0.0 && p.alpha_end <= 1.0))
      throw Error(where + "learning rate must lie in [0, 1]");
    if (!(p.sigma_start >= 0.0 && p.sigma_end >= 0.0)) throw Error(where + "radius must be non-negative");
    if (p.alpha_end > p.alpha_start || p.sigma_end > p.sigma_start)
      throw Error(where + "learning rate and radius must not increase");
  }
  if (phases.back().sigma_end > 1.0) throw Error("final phase must end with radius <= 1");
}

std::size_t TrainingSchedule::total_epochs() const noexcept {
  std::size_t n = 0;
  for (const auto& p : phases) n += p.epochs;
  return n;
}

TrainingSchedule default_schedule(const MapGrid& grid) {
  double rough_sigma = std::max(1.0, static_cast<double>(std::max(grid.rows(), grid.cols())) / 2.0);
  return TrainingSchedule{{
      {10, 0.5, 0.05, rough_sigma, 1.0},
      {20, 0.05, 0.01, 1.0, 0.1},
  }};
}

// --- model operations -------------------------------------------------------

SomModel init_codebook(const MapGrid& grid, const IncidenceMatrix& data, std::uint64_t seed) {
  const std::size_t n = data.machines();
  SomModel model;
  model.grid = grid;
  model.input_dim = n;
  model.seed = seed;
  model.codebook.assign(grid.units() * n, 0.0);

  auto samples = data_as_doubles(data);
  auto pc = principal_components(samples, data.parts(), n, 2);
  const double scale = std::max(1.0, pc.components.empty() ? 0.0 : pc.components[0].value);
  std::size_t rank = 0;
  for (const auto& c : pc.components)
    if (c.value > kRankEps * scale) ++rank;

  if (rank == 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    const double per_component = 0.099 / std::sqrt(static_cast<double>(n));
    for (std::size_t u = 0; u < grid.units(); ++u)
      for (std::size_t k = 0; k < n; ++k)
        model.codebook[u * n + k] = std::clamp(pc.mean[k] + per_component * jitter(rng), 0.0, 1.0);
    return model;
  }

  // Normalized lattice coordinates in [-1, 1]; the first component follows
  // the longer side of the map.
  const bool rows_long = grid.rows() >= grid.cols();
  auto norm_coord = [](std::size_t i, std::size_t count) {
    return count > 1 ? 2.0 * static_cast<double>(i) / static_cast<double>(count - 1) - 1.0 : 0.0;
  };
  std::vector<double> delta(grid.units() * n, 0.0);
  for (std::size_t u = 0; u < grid.units(); ++u) {
    double along_r = norm_coord(grid.row_of(u), grid.rows());
    double along_c = norm_coord(grid.col_of(u), grid.cols());
    double c1 = rows_long ? along_r : along_c;
    double c2 = rows_long ? along_c : along_r;
    for (std::size_t k = 0; k < n; ++k) {
      double d = c1 * std::sqrt(pc.components[0].value) * pc.components[0].vector[k];
      if (rank >= 2) d += c2 * std::sqrt(pc.components[1].value) * pc.components[1].vector[k];
      delta[u * n + k] = d;
    }
  }

  // Shrink the plane until every unit lies in [0,1]^n.
  double t = 1.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    double d = delta[i], m = pc.mean[i % n];
    if (d > kRankEps) t = std::min(t, (1.0 - m) / d);
    else if (d < -kRankEps) t = std::min(t, m / -d);
  }
  for (std::size_t i = 0; i < delta.size(); ++i)
    model.codebook[i] = std::clamp(pc.mean[i % n] + t * delta[i], 0.0, 1.0);
  return model;
}

std::size_t find_bmu(const SomModel& model, std::span<const double> x) {
  return kernels::parallel::best_matching_unit(model.codebook, model.input_dim, x);
}

std::vector<std::size_t> find_bmus(const SomModel& model, const IncidenceMatrix& data) {
  if (data.machines() != model.input_dim)
    throw DimensionError("matrix has " + std::to_string(data.machines()) + " machines, model expects " +
                         std::to_string(model.input_dim));
  auto samples = data_as_doubles(data);
  std::vector<std::size_t> out(data.parts());
  kernels::parallel::best_matching_units(model.codebook, model.input_dim, samples, out);
  return out;
}

SomModel train(const SomModel& model, const IncidenceMatrix& data, const TrainingSchedule& schedule) {
  schedule.validate();
  if (data.machines() != model.input_dim)
    throw DimensionError("matrix has " + std::to_string(data.machines()) + " machines, model expects " +
                         std::to_string(model.input_dim));

  SomModel out = model;
  const std::size_t n = model.input_dim;
  const auto samples = data_as_doubles(data);
  std::vector<std::size_t> order(data.parts());
  std::vector<double> lattice(model.units());
  std::mt19937_64 rng(model.seed ^ (0x9E3779B97F4A7C15ULL * (model.trained_epochs + 1)));

  for (const auto& phase : schedule.phases) {
    const std::size_t steps = phase.epochs * data.parts();
    std::size_t step = 0;
    for (std::size_t e = 0; e < phase.epochs; ++e) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t p : order) {
        double frac = steps > 1 ? static_cast<double>(step) / static_cast<double>(steps - 1) : 0.0;
        double alpha = phase.alpha_start + (phase.alpha_end - phase.alpha_start) * frac;
        double sigma = phase.sigma_start + (phase.sigma_end - phase.sigma_start) * frac;
        std::span<const double> x(samples.data() + p * n, n);
        std::size_t c = kernels::parallel::best_matching_unit(out.codebook, n, x);
        out.grid.sq_distances_from(c, lattice);
        kernels::parallel::neighborhood_update(out.codebook, n, lattice, x, alpha, sigma);
        ++step;
      }
    }
    out.schedule.phases.push_back(phase);
    out.trained_epochs += phase.epochs;
  }
  return out;
}

double quantization_error(const SomModel& model, const IncidenceMatrix& data) {
  auto bmus = find_bmus(model, data);
  double total = 0.0;
  for (std::size_t p = 0; p < data.parts(); ++p) {
    auto m = model.unit_vector(bmus[p]);
    double s = 0.0;
    for (std::size_t k = 0; k < model.input_dim; ++k) {
      double d = static_cast<double>(data.at(p, k)) - m[k];
      s += d * d;
    }
    total += std::sqrt(s);
  }
  return total / static_cast<double>(data.parts());
}

// --- persistence ------------------------------------------------------------

std::string serialize_model(const SomModel& model) {
  nlohmann::json j;
  j["format"] = "cellsom-model";
  j["version"] = 1;
  j["grid"] = {{"rows", model.grid.rows()}, {"cols", model.grid.cols()}, {"topology", "hexagonal"}};
  j["input_dim"] = model.input_dim;
  j["seed"] = model.seed;
  j["trained_epochs"] = model.trained_epochs;
  auto phases = nlohmann::json::array();
  for (const auto& p : model.schedule.phases)
    phases.push_back({{"epochs", p.epochs},
                      {"alpha_start", p.alpha_start},
                      {"alpha_end", p.alpha_end},
                      {"sigma_start", p.sigma_start},
                      {"sigma_end", p.sigma_end},
                      {"kernel", "gaussian"}});
  j["schedule"] = phases;
  auto cb = nlohmann::json::array();
  for (std::size_t u = 0; u < model.units(); ++u) {
    auto v = model.unit_vector(u);
    cb.push_back(std::vector<double>(v.begin(), v.end()));
  }
  j["codebook"] = cb;
  return j.dump(1) + "\n";
}

SomModel deserialize_model(const std::string& json_text) {
  try {
    auto j = nlohmann::json::parse(json_text);
    if (j.value("format", "") != "cellsom-model") throw Error("not a cellsom model document");
    SomModel m;
    m.grid = MapGrid(j.at("grid").at("rows").get<std::size_t>(), j.at("grid").at("cols").get<std::size_t>());
    m.input_dim = j.at("input_dim").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.trained_epochs = j.at("trained_epochs").get<std::size_t>();
    for (const auto& p : j.at("schedule"))
      m.schedule.phases.push_back({p.at("epochs").get<std::size_t>(), p.at("alpha_start").get<double>(),
                                   p.at("alpha_end").get<double>(), p.at("sigma_start").get<double>(),
                                   p.at("sigma_end").get<double>()});
    const auto& cb = j.at("codebook");
    if (cb.size() != m.grid.units()) throw DimensionError("codebook has wrong number of units");
    if (m.input_dim == 0) throw DimensionError("model input dimension must be positive");
    m.codebook.reserve(m.grid.units() * m.input_dim);
    for (const auto& v : cb) {
      if (v.size() != m.input_dim) throw DimensionError("codebook vector has wrong dimension");
      for (const auto& x : v) {
        double d = x.get<double>();
        if (!std::isfinite(d)) throw Error("codebook value is not finite");
        m.codebook.push_back(d);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model JSON: ") + e.what());
  }
}

void save_model(const SomModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

SomModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace cellsom
