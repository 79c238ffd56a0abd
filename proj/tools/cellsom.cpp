// cellsom: SOM-based machine-part cell formation from the command line.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellsom/bench.hpp"
#include "cellsom/cells.hpp"
#include "cellsom/file_util.hpp"
#include "cellsom/metrics.hpp"
#include "cellsom/som.hpp"
#include "cellsom/viz.hpp"

namespace fs = std::filesystem;
using namespace cellsom;

namespace {

struct Common {
  std::string input;
  bool transpose = false;
};

void add_input(CLI::App* cmd, Common& c, bool required = true) {
  auto* opt = cmd->add_option("--input,-i", c.input, "Incidence matrix file (rows = parts)");
  if (required) opt->required();
  cmd->add_flag("--transpose", c.transpose, "Input file lists machines as rows");
}

void print_efficacy(const Efficacy& e) {
  std::printf("grouping efficacy: %s = %.4f (%.2f%%)\n", e.str().c_str(), e.value(), 100.0 * e.value());
}

std::string describe(const CellAssignment& a, const IncidenceMatrix& m) {
  std::string s;
  for (std::size_t c = 1; c <= a.k; ++c) {
    s += "cell " + std::to_string(c) + ": parts {";
    bool first = true;
    for (std::size_t p = 0; p < m.parts(); ++p)
      if (a.part_family[p] == c) {
        s += (first ? "" : ",") + m.part_label(p);
        first = false;
      }
    s += "} machines {";
    first = true;
    for (std::size_t j = 0; j < m.machines(); ++j)
      if (a.machine_cell[j] == c) {
        s += (first ? "" : ",") + m.machine_label(j);
        first = false;
      }
    s += "}\n";
  }
  return s;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw Error("cannot create output directory '" + dir.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Machine-part cell formation with a hexagonal self-organizing map"};
  app.require_subcommand(1);

  // train
  Common train_in;
  std::string train_grid, train_out;
  std::uint64_t train_seed = 42;
  auto* train_cmd = app.add_subcommand("train", "Train a map on an incidence matrix and save it as JSON");
  add_input(train_cmd, train_in);
  train_cmd->add_option("--grid", train_grid, "Map size RxC (default: near-square, >= 5*sqrt(P) units)");
  train_cmd->add_option("--seed", train_seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--out,-o", train_out, "Model JSON output")->required();

  // cells
  Common cells_in;
  std::string cells_model, cells_out_dir = ".";
  std::optional<std::size_t> cells_kmax;
  double cells_r = 0.5;
  auto* cells_cmd = app.add_subcommand("cells", "Form machine cells and part families from a trained map");
  add_input(cells_cmd, cells_in);
  cells_cmd->add_option("--model,-m", cells_model, "Model JSON from 'train'")->required();
  cells_cmd->add_option("--kmax", cells_kmax, "Largest cell count tried (default max(2, ceil(min(P,M)/2)))");
  cells_cmd->add_option("--r", cells_r, "Grouping efficiency weight, 0 < r < 1")->capture_default_str();
  cells_cmd->add_option("--out-dir", cells_out_dir, "Directory for assignment.json and score.json")
      ->capture_default_str();

  // viz
  Common viz_in;
  std::string viz_model, viz_out_dir = ".";
  std::vector<std::string> viz_only;
  std::optional<std::size_t> viz_kmax;
  auto* viz_cmd = app.add_subcommand("viz", "Write U-matrix, component planes, hits, projection and scatter data");
  add_input(viz_cmd, viz_in);
  viz_cmd->add_option("--model,-m", viz_model, "Model JSON")->required();
  viz_cmd->add_option("--out-dir", viz_out_dir, "Output directory")->capture_default_str();
  viz_cmd->add_option("--only", viz_only, "Subset of: umatrix, planes, hits, projection, scatter")
      ->delimiter(',')
      ->check(CLI::IsMember({"umatrix", "planes", "hits", "projection", "scatter"}));
  viz_cmd->add_option("--kmax", viz_kmax, "Largest cell count for the cell coloring");

  // metrics
  Common metrics_in;
  std::string metrics_assignment, metrics_out;
  double metrics_r = 0.5;
  auto* metrics_cmd = app.add_subcommand("metrics", "Score an assignment: grouping efficacy and efficiency");
  add_input(metrics_cmd, metrics_in);
  metrics_cmd->add_option("--assignment,-a", metrics_assignment, "Assignment JSON")->required();
  metrics_cmd->add_option("--r", metrics_r, "Grouping efficiency weight, 0 < r < 1")->capture_default_str();
  metrics_cmd->add_option("--out,-o", metrics_out, "Score JSON output");

  // oracle
  Common oracle_in;
  std::size_t oracle_k = 2;
  std::string oracle_out;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum for small instances (P, M <= 10, k <= 3)");
  add_input(oracle_cmd, oracle_in);
  oracle_cmd->add_option("--k", oracle_k, "Maximum number of cells")->capture_default_str();
  oracle_cmd->add_option("--out,-o", oracle_out, "Assignment JSON output");

  // bench
  std::string bench_corpus, bench_manifest, bench_out_dir = ".", bench_grid;
  std::size_t bench_restarts = 10;
  std::uint64_t bench_seed = 42;
  std::optional<std::size_t> bench_kmax;
  bool bench_transpose = false;
  auto* bench_cmd = app.add_subcommand("bench", "Score a corpus of matrices against target efficacies");
  bench_cmd->add_option("--corpus", bench_corpus, "Corpus directory containing manifest.json");
  bench_cmd->add_option("--manifest", bench_manifest, "Manifest path (overrides --corpus)");
  bench_cmd->add_option("--restarts,-R", bench_restarts, "Seeded restarts per case")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "First restart seed")->capture_default_str();
  bench_cmd->add_option("--grid", bench_grid, "Map size RxC for every case");
  bench_cmd->add_option("--kmax", bench_kmax, "Largest cell count tried");
  bench_cmd->add_flag("--transpose", bench_transpose, "Corpus files list machines as rows");
  bench_cmd->add_option("--out-dir", bench_out_dir, "Directory for report.csv and report.json")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      // Validate the grid before touching the input.
      if (!train_grid.empty()) parse_grid(train_grid);
      auto data = load_matrix(train_in.input, train_in.transpose);
      MapGrid grid = train_grid.empty() ? default_grid(data.parts()) : parse_grid(train_grid);
      auto init = init_codebook(grid, data, train_seed);
      double qe0 = quantization_error(init, data);
      auto model = train(init, data, default_schedule(grid));
      save_model(model, train_out);
      std::printf("grid %zux%zu, %zu epochs, seed %llu\n", grid.rows(), grid.cols(), model.trained_epochs,
                  static_cast<unsigned long long>(train_seed));
      std::printf("quantization error: %.6f (initial %.6f)\n", quantization_error(model, data), qe0);
      return 0;
    }

    if (*cells_cmd) {
      auto data = load_matrix(cells_in.input, cells_in.transpose);
      auto model = load_model(cells_model);
      if (model.input_dim != data.machines())
        throw DimensionError("model was trained on " + std::to_string(model.input_dim) + " machines but '" +
                             cells_in.input + "' has " + std::to_string(data.machines()));
      auto f = form_cells(model, data, cells_kmax.value_or(default_kmax(data.parts(), data.machines())));
      auto s = score(data, f.assignment, cells_r);
      std::cout << render_block_diagonal(data, build_view(f.assignment)) << "\n" << describe(f.assignment, data);
      std::printf("k = %zu\n", f.assignment.k);
      print_efficacy(s.efficacy);
      std::printf("grouping efficiency (r=%.2f): %.4f\n", cells_r, s.efficiency);
      ensure_dir(cells_out_dir);
      write_file_atomic(fs::path(cells_out_dir) / "assignment.json", assignment_to_json(f.assignment, data));
      write_file_atomic(fs::path(cells_out_dir) / "score.json", score_to_json(s));
      return 0;
    }

    if (*viz_cmd) {
      auto data = load_matrix(viz_in.input, viz_in.transpose);
      auto model = load_model(viz_model);
      if (model.input_dim != data.machines()) throw DimensionError("model and matrix machine counts differ");
      std::set<std::string> want(viz_only.begin(), viz_only.end());
      auto on = [&](const char* what) { return want.empty() || want.count(what) > 0; };
      ensure_dir(viz_out_dir);
      const fs::path dir = viz_out_dir;

      auto hits = compute_hits(model, data);
      auto f = form_cells(model, data, viz_kmax.value_or(default_kmax(data.parts(), data.machines())));
      auto ucells = unit_cells(model, hits, f.assignment);
      std::size_t files = 0;
      if (on("umatrix")) {
        export_svg(compute_umatrix(model), dir / "umatrix.svg");
        ++files;
      }
      if (on("planes"))
        for (const auto& p : component_planes(model)) {
          auto label = data.machine_label(p.machine_index);
          export_svg(p, dir / ("plane_" + label + ".svg"), "component plane " + label);
          ++files;
        }
      if (on("hits")) {
        export_svg(hits, dir / "hits.svg", ucells);
        ++files;
      }
      if (on("projection")) {
        export_svg(pca_project(model, data), dir / "projection.svg", f.assignment.part_family);
        ++files;
      }
      if (on("scatter")) {
        export_scatter_data(model, data, f.assignment, dir / "scatter.csv");
        ++files;
      }
      std::printf("wrote %zu files to %s\n", files, dir.string().c_str());
      return 0;
    }

    if (*metrics_cmd) {
      auto data = load_matrix(metrics_in.input, metrics_in.transpose);
      auto a = assignment_from_json(read_file(metrics_assignment));
      a.validate_for(data);
      auto s = score(data, a, metrics_r);
      std::printf("N1 = %zu, N1out = %zu, N0in = %zu\n", s.counts.n1, s.counts.n1_out, s.counts.n0_in);
      print_efficacy(s.efficacy);
      std::printf("grouping efficiency (r=%.2f): eta1 %.4f, eta2 %.4f, eta %.4f\n", metrics_r, s.eta1, s.eta2,
                  s.efficiency);
      if (!metrics_out.empty()) write_file_atomic(metrics_out, score_to_json(s));
      return 0;
    }

    if (*oracle_cmd) {
      auto data = load_matrix(oracle_in.input, oracle_in.transpose);
      auto r = oracle_best_assignment(data, oracle_k);
      std::printf("evaluated %llu assignments\n", static_cast<unsigned long long>(r.evaluated));
      print_efficacy(r.efficacy);
      std::cout << describe(r.assignment, data);
      if (!oracle_out.empty()) write_file_atomic(oracle_out, assignment_to_json(r.assignment, data));
      return 0;
    }

    if (*bench_cmd) {
      fs::path manifest = !bench_manifest.empty() ? fs::path(bench_manifest)
                          : !bench_corpus.empty() ? fs::path(bench_corpus) / "manifest.json"
                                                  : throw Error("bench needs --corpus or --manifest");
      BenchOptions opts;
      opts.restarts = bench_restarts;
      opts.seed = bench_seed;
      opts.k_max = bench_kmax;
      opts.transpose = bench_transpose;
      if (!bench_grid.empty()) opts.grid = parse_grid(bench_grid);
      std::vector<BenchCase> cases;
      if (fs::exists(manifest)) cases = load_manifest(manifest);
      else if (bench_manifest.empty() && fs::is_directory(bench_corpus)) cases = {};
      else throw Error("manifest '" + manifest.string() + "' not found");
      auto report = run_bench(cases, opts);
      ensure_dir(bench_out_dir);
      write_file_atomic(fs::path(bench_out_dir) / "report.csv", report_csv(report));
      write_file_atomic(fs::path(bench_out_dir) / "report.json", report_json(report));
      std::cout << report_csv(report);
      for (const auto& r : report.results)
        if (r.verdict == Verdict::failed) std::fprintf(stderr, "%s: %s\n", r.name.c_str(), r.error.c_str());
      std::fflush(stderr);
      std::printf("cases %zu: matched %zu, improved %zu, regressed %zu, no target %zu, failed %zu\n",
                  report.results.size(), report.matched, report.improved, report.regressed, report.no_target,
                  report.failed);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
