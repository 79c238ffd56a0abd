#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "cellsom/cells.hpp"
#include "cellsom/viz.hpp"
#include "test_support.hpp"

using namespace cellsom;
using namespace cellsom::testing;

namespace {

SomModel make_model(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> cb) {
  SomModel m;
  m.grid = MapGrid(rows, cols);
  m.input_dim = dim;
  m.codebook = std::move(cb);
  return m;
}

SomModel trained_problem1(std::uint64_t seed) {
  auto data = problem1_matrix();
  MapGrid g(12, 10);
  return train(init_codebook(g, data, seed), data, default_schedule(g));
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

// Every opening element is closed in order; self-closing tags balance.
bool balanced_xml(const std::string& s) {
  std::regex tag(R"(<(/?)([a-zA-Z]+)[^>]*?(/?)>)");
  std::vector<std::string> stack;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[3] == "/") continue;
    if (m[1] == "/") {
      if (stack.empty() || stack.back() != m[2]) return false;
      stack.pop_back();
    } else {
      stack.push_back(m[2]);
    }
  }
  return stack.empty();
}

std::set<std::string> fills(const std::string& svg) {
  std::set<std::string> out;
  std::regex fill(R"re(<polygon[^>]*fill="([^"]+)")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), fill); it != std::sregex_iterator(); ++it)
    out.insert((*it)[1]);
  return out;
}

}  // namespace

TEST_SUITE("viz") {

TEST_CASE("U-matrix of identical vectors is zero") {
  auto m = make_model(3, 3, 2, std::vector<double>(18, 0.25));
  auto u = compute_umatrix(m);
  CHECK(u.rows() == 5);
  CHECK(u.cols() == 5);
  for (double v : u.values) CHECK(v == 0.0);
}

TEST_CASE("U-matrix on a 1x2 map") {
  auto m = make_model(1, 2, 2, {0, 0, 3, 4});
  auto u = compute_umatrix(m);
  REQUIRE(u.values.size() == 3);
  CHECK(u.at(0, 0) == doctest::Approx(5.0));
  CHECK(u.at(0, 1) == doctest::Approx(5.0));
  CHECK(u.at(0, 2) == doctest::Approx(5.0));
  CHECK(u.pair_value(0, 1) == doctest::Approx(5.0));
  CHECK(u.pair_value(1, 0) == doctest::Approx(5.0));
}

TEST_CASE("property: U-matrix is symmetric, non-negative and unit cells average their pairs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0, 1);
  for (int t = 0; t < 10; ++t) {
    auto m = make_model(2 + t % 4, 2 + t % 3, 3, {});
    m.codebook.resize(m.units() * 3);
    for (double& v : m.codebook) v = uni(rng);
    auto u = compute_umatrix(m);
    CHECK(u.pairs.size() == m.grid.adjacent_pairs().size());
    for (const auto& pr : u.pairs) {
      CHECK(pr.value >= 0.0);
      CHECK(u.pair_value(pr.a, pr.b) == u.pair_value(pr.b, pr.a));
      double d = 0;
      for (std::size_t k = 0; k < 3; ++k) d += std::pow(m.codebook[pr.a * 3 + k] - m.codebook[pr.b * 3 + k], 2);
      CHECK(pr.value == doctest::Approx(std::sqrt(d)));
    }
    for (std::size_t unit = 0; unit < m.units(); ++unit) {
      auto nb = m.grid.neighbors(unit);
      double s = 0;
      for (auto n : nb) s += u.pair_value(unit, n);
      CHECK(u.unit_value(unit) == doctest::Approx(s / static_cast<double>(nb.size())));
    }
    CHECK_THROWS_AS(u.pair_value(0, m.units() - 1), Error);
  }
}

TEST_CASE("component planes re-slice the codebook") {
  auto data = problem1_matrix();
  auto m = trained_problem1(42);
  auto planes = component_planes(m);
  REQUIRE(planes.size() == 10);
  for (std::size_t j = 0; j < 10; ++j) {
    CHECK(planes[j].machine_index == j);
    for (std::size_t u = 0; u < m.units(); ++u) CHECK(planes[j].values[u] == m.codebook[u * 10 + j]);
  }
  auto flat = make_model(2, 2, 3, std::vector<double>(12, 0.5));
  for (const auto& p : component_planes(flat))
    for (double v : p.values) CHECK(v == 0.5);
}

TEST_CASE("component-plane correlations on the trained example") {
  auto planes = component_planes(trained_problem1(42));
  CHECK(pearson(planes[0].values, planes[2].values) > 0.8);
  CHECK(pearson(planes[0].values, planes[1].values) < -0.5);
}

TEST_CASE("pearson") {
  std::vector<double> a = {1, 2, 3, 4}, b = {2, 4, 6, 8}, c = {4, 3, 2, 1}, k = {1, 1, 1, 1};
  CHECK(pearson(a, b) == doctest::Approx(1.0));
  CHECK(pearson(a, c) == doctest::Approx(-1.0));
  CHECK(pearson(a, k) == 0.0);
}

TEST_CASE("projection of collinear parts") {
  auto data = parse_matrix(std::string("3 2\n1 1\n0 1\n0 1\n"));
  auto m = make_model(1, 2, 2, {1, 1, 0, 1});
  auto p = pca_project(m, data);
  REQUIRE(p.part_points.size() == 3);
  for (const auto& pt : p.part_points) CHECK(pt[1] == doctest::Approx(0.0));
  CHECK(std::abs(p.part_points[0][0]) == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(p.part_points[1][0]) == doctest::Approx(1.0 / 3.0));
  CHECK(p.part_points[1][0] * p.part_points[0][0] < 0);
  auto origin = p.project(p.mean);
  CHECK(origin[0] == doctest::Approx(0.0));
  CHECK(origin[1] == doctest::Approx(0.0));
  CHECK(p.unit_points.size() == 2);
  CHECK(p.unit_edges.size() == 1);
}

TEST_CASE("projection needs variance and at least two parts") {
  auto same = parse_matrix(std::string("3 2\n1 1\n1 1\n1 1\n"));
  auto m = make_model(1, 1, 2, {0.5, 0.5});
  CHECK_THROWS_AS(pca_project(m, same), Error);
  auto one = parse_matrix(std::string("1 2\n1 1\n"));
  CHECK_THROWS_AS(pca_project(m, one), Error);
}

TEST_CASE("property: the projection plane captures the most variance") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    auto data = random_matrix(rng, 8, 3, 0.5);
    auto m = make_model(1, 1, 3, {0.5, 0.5, 0.5});
    Projection p;
    try {
      p = pca_project(m, data);
    } catch (const Error&) {
      continue;
    }
    std::vector<double> mean(3, 0.0);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 3; ++j) mean[j] += data.at(i, j) / 8.0;
    double captured = 0;
    for (const auto& pt : p.part_points) captured += pt[0] * pt[0] + pt[1] * pt[1];
    // Any plane is the orthogonal complement of a normal n.
    for (int a = 0; a <= 60; ++a)
      for (int b = 0; b < 120; ++b) {
        double th = std::numbers::pi * a / 60, ph = 2 * std::numbers::pi * b / 120;
        double n[3] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        double v = 0;
        for (std::size_t i = 0; i < 8; ++i) {
          double d2 = 0, dn = 0;
          for (std::size_t j = 0; j < 3; ++j) {
            double c = data.at(i, j) - mean[j];
            d2 += c * c;
            dn += c * n[j];
          }
          v += d2 - dn * dn;
        }
        CHECK(captured >= v - 1e-9);
      }
  }
}

TEST_CASE("hit histogram") {
  auto data = problem1_matrix();
  auto m = trained_problem1(42);
  auto h = compute_hits(m, data);
  std::size_t total = 0;
  for (auto x : h.hits) total += x;
  CHECK(total == 10);
  CHECK(h.part_bmu.size() == 10);

  auto single = make_model(1, 1, 10, std::vector<double>(10, 0.5));
  auto hs = compute_hits(single, data);
  CHECK(hs.hits[0] == 10);
  CHECK(hs.nonempty_units() == 1);

  auto f = form_cells(m, data, 5);
  auto cells = unit_cells(m, h, f.assignment);
  std::size_t fam_a = 0, fam_b = 0;
  std::size_t a = cells[h.part_bmu[0]];
  for (std::size_t u = 0; u < m.units(); ++u) (cells[u] == a ? fam_a : fam_b) += h.hits[u];
  CHECK(std::min(fam_a, fam_b) == 3);
  CHECK(std::max(fam_a, fam_b) == 7);
  CHECK(has_boundary_ridge(compute_umatrix(m), cells));
}

TEST_CASE("grayscale ramp") {
  CHECK(gray_fill(0, 0, 1) == "#ffffff");
  CHECK(gray_fill(1, 0, 1) == "#000000");
  CHECK(gray_fill(3, 3, 3) == "#808080");
}

TEST_CASE("SVG output") {
  auto flat = make_model(3, 3, 2, std::vector<double>(18, 0.5));
  auto planes = component_planes(flat);
  auto svg = component_plane_svg(planes[0], "m1");
  CHECK(fills(svg) == std::set<std::string>{"#808080"});
  CHECK(balanced_xml(svg));

  auto two = make_model(1, 2, 1, {0.0, 1.0});
  auto svg2 = component_plane_svg(component_planes(two)[0], "m1");
  CHECK(fills(svg2).size() == 2);

  auto m = trained_problem1(42);
  auto usvg = umatrix_svg(compute_umatrix(m));
  CHECK(count(usvg, "<polygon") == 23 * 19);
  CHECK(balanced_xml(usvg));

  auto data = problem1_matrix();
  auto h = compute_hits(m, data);
  auto hsvg = hits_svg(h);
  CHECK(balanced_xml(hsvg));
  CHECK(count(hsvg, "fill=\"none\"") == 120 - h.nonempty_units());
  CHECK(balanced_xml(projection_svg(pca_project(m, data))));
}

TEST_CASE("scatter CSV") {
  auto data = problem1_matrix();
  auto m = trained_problem1(42);
  auto f = form_cells(m, data, 5);
  auto csv = scatter_csv(m, data, f.assignment);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "source,id,m1,m2,m3,m4,m5,m6,m7,m8,m9,m10,cell");
  std::size_t rows = 0, data_rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(count(line, ",") == 12);
    if (line.rfind("data,", 0) == 0) ++data_rows;
  }
  CHECK(rows == 130);
  CHECK(data_rows == 10);
}

}  // TEST_SUITE
