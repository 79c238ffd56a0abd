#include "cellsom/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "cellsom/file_util.hpp"

namespace cellsom {

PipelineResult run_pipeline(const IncidenceMatrix& data, const MapGrid& grid, std::uint64_t seed, std::size_t k_max) {
  PipelineResult r;
  r.seed = seed;
  r.model = train(init_codebook(grid, data, seed), data, default_schedule(grid));
  r.formation = form_cells(r.model, data, k_max);
  return r;
}

std::vector<BenchCase> load_manifest(const std::filesystem::path& manifest) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest '" + manifest.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.is_array()) throw Error("manifest '" + manifest.string() + "' must be a JSON array");

  const auto base = manifest.parent_path();
  std::vector<BenchCase> cases;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& rec = j[i];
    BenchCase c;
    c.name = "case" + std::to_string(i + 1);
    try {
      if (!rec.is_object()) throw Error("record is not an object");
      if (rec.contains("name")) c.name = rec.at("name").get<std::string>();
      std::filesystem::path p = rec.at("path").get<std::string>();
      c.path = p.is_absolute() ? p : base / p;
      if (rec.contains("target_efficacy") && !rec.at("target_efficacy").is_null()) {
        double t = rec.at("target_efficacy").get<double>();
        if (!(t > 0.0 && t <= 1.0)) throw Error("target_efficacy must lie in (0, 1]");
        c.target_efficacy = t;
      }
      if (rec.contains("source_note")) c.source_note = rec.at("source_note").get<std::string>();
    } catch (const std::exception& e) {
      c.manifest_error = e.what();
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::matched: return "matched";
    case Verdict::improved: return "improved";
    case Verdict::regressed: return "regressed";
    case Verdict::no_target: return "no_target";
    case Verdict::failed: return "failed";
  }
  return "failed";
}

BenchResult run_case(const BenchCase& c, const BenchOptions& opts) {
  BenchResult r;
  r.name = c.name;
  r.target = c.target_efficacy;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (!c.manifest_error.empty()) throw Error("manifest: " + c.manifest_error);
    if (opts.restarts == 0) throw Error("restarts must be positive");
    if (!std::filesystem::exists(c.path)) throw Error("matrix file '" + c.path.string() + "' does not exist");
    auto data = load_matrix(c.path, opts.transpose);
    r.parts = data.parts();
    r.machines = data.machines();
    MapGrid grid = opts.grid.value_or(default_grid(data.parts()));
    std::size_t k_max = opts.k_max.value_or(default_kmax(data.parts(), data.machines()));

    bool have = false;
    for (std::size_t i = 0; i < opts.restarts; ++i) {
      auto res = run_pipeline(data, grid, opts.seed + i, k_max);
      if (!have || res.formation.efficacy > r.efficacy) {
        have = true;
        r.efficacy = res.formation.efficacy;
        r.assignment = res.formation.assignment;
        r.k = res.formation.assignment.k;
        r.best_seed = res.seed;
      }
    }
    if (r.target) {
      r.delta = r.efficacy.value() - *r.target;
      if (std::abs(*r.delta) < kMatchTolerance) r.verdict = Verdict::matched;
      else r.verdict = *r.delta > 0 ? Verdict::improved : Verdict::regressed;
    } else {
      r.verdict = Verdict::no_target;
    }
  } catch (const std::exception& e) {
    r.error = e.what();
    r.verdict = Verdict::failed;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

BenchReport run_bench(const std::vector<BenchCase>& cases, const BenchOptions& opts) {
  BenchReport report;
  report.restarts = opts.restarts;
  report.results.resize(cases.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cases.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) report.results[static_cast<std::size_t>(i)] = run_case(cases[i], opts);

  for (const auto& r : report.results) {
    switch (r.verdict) {
      case Verdict::matched: ++report.matched; break;
      case Verdict::improved: ++report.improved; break;
      case Verdict::regressed: ++report.regressed; break;
      case Verdict::no_target: ++report.no_target; break;
      case Verdict::failed: ++report.failed; break;
    }
  }
  return report;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string report_csv(const BenchReport& report) {
  std::string out = "name,P,M,k,mu_num,mu_den,mu,target,delta,seconds\n";
  for (const auto& r : report.results) {
    out += csv_field(r.name) + ",";
    if (r.verdict == Verdict::failed) {
      out += ",,,,,,";
    } else {
      out += std::to_string(r.parts) + "," + std::to_string(r.machines) + "," + std::to_string(r.k) + "," +
             std::to_string(r.efficacy.num) + "," + std::to_string(r.efficacy.den) + "," +
             fixed(r.efficacy.value(), 4) + ",";
    }
    out += (r.target ? fixed(*r.target, 4) : "") + ",";
    out += (r.delta ? fixed(*r.delta, 4) : "") + ",";
    out += fixed(r.seconds, 3) + "\n";
  }
  return out;
}

std::string report_json(const BenchReport& report) {
  nlohmann::ordered_json j;
  j["restarts"] = report.restarts;
  j["restart_policy"] = "best grouping efficacy over seeded restarts (seed + r)";
  auto cases = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["verdict"] = verdict_name(r.verdict);
    if (r.verdict == Verdict::failed) {
      c["error"] = r.error;
    } else {
      c["P"] = r.parts;
      c["M"] = r.machines;
      c["k"] = r.k;
      c["mu"] = r.efficacy.str();
      c["mu_num"] = r.efficacy.num;
      c["mu_den"] = r.efficacy.den;
      c["mu_value"] = fixed(r.efficacy.value(), 4);
      c["mu_percent"] = fixed(100.0 * r.efficacy.value(), 2);
      c["best_seed"] = r.best_seed;
      c["part_family"] = r.assignment.part_family;
      c["machine_cell"] = r.assignment.machine_cell;
    }
    c["target"] = r.target ? nlohmann::ordered_json(*r.target) : nlohmann::ordered_json(nullptr);
    c["delta"] = r.delta ? nlohmann::ordered_json(*r.delta) : nlohmann::ordered_json(nullptr);
    c["seconds"] = r.seconds;
    cases.push_back(std::move(c));
  }
  j["cases"] = cases;
  j["summary"] = {{"cases", report.results.size()}, {"matched", report.matched},   {"improved", report.improved},
                  {"regressed", report.regressed},  {"no_target", report.no_target}, {"failed", report.failed}};
  return j.dump(2) + "\n";
}

}  // namespace cellsom
