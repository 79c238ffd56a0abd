#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cellsom/cells.hpp"
#include "cellsom/metrics.hpp"
#include "cellsom/som.hpp"

namespace cellsom {

/// Train a fresh map with the default schedule and form cells from it.
struct PipelineResult {
  SomModel model;
  CellFormation formation;
  std::uint64_t seed = 0;
};

PipelineResult run_pipeline(const IncidenceMatrix& data, const MapGrid& grid, std::uint64_t seed, std::size_t k_max);

struct BenchCase {
  std::string name;
  std::filesystem::path path;  // resolved against the manifest directory
  std::optional<double> target_efficacy;
  std::string source_note;
  std::string manifest_error;  // non-empty when the record itself is broken
};

/// Reads a JSON array of {name, path, target_efficacy?, source_note?}.
/// Broken records become cases carrying manifest_error; a document that is
/// not an array throws Error.
std::vector<BenchCase> load_manifest(const std::filesystem::path& manifest);

struct BenchOptions {
  std::size_t restarts = 10;
  std::uint64_t seed = 42;            // restart r uses seed + r
  std::optional<MapGrid> grid;        // default_grid(P) when unset
  std::optional<std::size_t> k_max;   // default_kmax(P, M) when unset
  bool transpose = false;
};

enum class Verdict { matched, improved, regressed, no_target, failed };

const char* verdict_name(Verdict v);

struct BenchResult {
  std::string name;
  std::string error;
  std::size_t parts = 0;
  std::size_t machines = 0;
  std::size_t k = 0;
  Efficacy efficacy;
  std::optional<double> target;
  std::optional<double> delta;  // efficacy - target
  double seconds = 0.0;
  std::uint64_t best_seed = 0;
  CellAssignment assignment;
  Verdict verdict = Verdict::failed;
};

struct BenchReport {
  std::size_t restarts = 0;
  std::vector<BenchResult> results;  // manifest order
  std::size_t matched = 0;
  std::size_t improved = 0;
  std::size_t regressed = 0;
  std::size_t no_target = 0;
  std::size_t failed = 0;
};

/// |delta| below this counts as a match; targets carry four decimals.
inline constexpr double kMatchTolerance = 5e-5;

BenchResult run_case(const BenchCase& c, const BenchOptions& opts);

/// Cases run concurrently; results are reduced in manifest order.
BenchReport run_bench(const std::vector<BenchCase>& cases, const BenchOptions& opts);

std::string report_csv(const BenchReport& r);
std::string report_json(const BenchReport& r);

}  // namespace cellsom
