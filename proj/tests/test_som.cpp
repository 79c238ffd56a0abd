#include <doctest.h>

#include <cmath>
#include <random>

#include "cellsom/som.hpp"
#include "test_support.hpp"

using namespace cellsom;
using namespace cellsom::testing;

namespace {

SomModel model_from(std::size_t rows, std::size_t cols, std::size_t dim, std::vector<double> cb) {
  SomModel m;
  m.grid = MapGrid(rows, cols);
  m.input_dim = dim;
  m.codebook = std::move(cb);
  return m;
}

std::size_t naive_bmu(const std::vector<double>& cb, std::size_t dim, const std::vector<double>& x) {
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t u = 0; u * dim < cb.size(); ++u) {
    double d = 0;
    for (std::size_t k = 0; k < dim; ++k) d += (cb[u * dim + k] - x[k]) * (cb[u * dim + k] - x[k]);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("som") {

TEST_CASE("hexagonal lattice geometry") {
  MapGrid g(5, 4);
  CHECK(g.units() == 20);
  CHECK(g.neighbors(g.unit_at(2, 1)).size() == 6);
  CHECK(g.neighbors(g.unit_at(0, 0)).size() == 2);
  for (std::size_t a = 0; a < g.units(); ++a)
    for (std::size_t b = 0; b < g.units(); ++b) {
      CHECK(g.sq_distance(a, b) == g.sq_distance(b, a));
      CHECK((g.sq_distance(a, b) == 0.0) == (a == b));
      double dx = g.x(a) - g.x(b), dy = g.y(a) - g.y(b);
      CHECK(g.sq_distance(a, b) == doctest::Approx(dx * dx + dy * dy));
    }
  // Each adjacent pair is listed once.
  CHECK(g.adjacent_pairs().size() == 5 * 3 + 4 * (4 + 3));
}

TEST_CASE("grid parsing and default sizing") {
  CHECK(parse_grid("12x10") == MapGrid(12, 10));
  CHECK_THROWS_AS(parse_grid("0x5"), Error);
  CHECK_THROWS_AS(parse_grid("12 by 10"), Error);
  CHECK(default_grid(10) == MapGrid(4, 4));   // 5*sqrt(10) = 15.8
  CHECK(default_grid(6) == MapGrid(4, 4));    // 12.2 > 4*3
  CHECK(default_grid(1) == MapGrid(3, 2));
  CHECK(default_grid(35).units() >= 5 * std::sqrt(35.0));
}

TEST_CASE("schedule validation") {
  TrainingSchedule empty;
  CHECK_THROWS_AS(empty.validate(), Error);
  CHECK_NOTHROW(default_schedule(MapGrid(12, 10)).validate());
  CHECK(default_schedule(MapGrid(12, 10)).phases[0].sigma_start == 6.0);
  CHECK(default_schedule(MapGrid(12, 10)).total_epochs() == 30);
  CHECK_THROWS_AS((TrainingSchedule{{{1, 0.1, 0.2, 1, 0.5}}}).validate(), Error);  // alpha rises
  CHECK_THROWS_AS((TrainingSchedule{{{1, 0.5, 0.1, 3, 2}}}).validate(), Error);    // ends above 1
  CHECK_THROWS_AS((TrainingSchedule{{{0, 0.5, 0.1, 1, 1}}}).validate(), Error);
}

TEST_CASE("find_bmu: nearest unit, lowest index on ties") {
  auto m = model_from(1, 2, 2, {0, 0, 1, 1});
  CHECK(find_bmu(m, std::vector<double>{0.9, 0.8}) == 1);
  CHECK(find_bmu(m, std::vector<double>{1, 0}) == 0);
  CHECK_THROWS_AS(find_bmu(m, std::vector<double>{1, 0, 0}), DimensionError);
}

TEST_CASE("property: find_bmu equals an exhaustive scan") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  auto m = model_from(1, 5, 3, std::vector<double>(15));
  for (double& v : m.codebook) v = u(rng);
  for (int q = 0; q < 20; ++q) {
    std::vector<double> x = {u(rng), u(rng), u(rng)};
    CHECK(find_bmu(m, x) == naive_bmu(m.codebook, 3, x));
  }
}

TEST_CASE("init_codebook is deterministic and stays in the unit cube") {
  auto data = problem1_matrix();
  auto a = init_codebook(MapGrid(12, 10), data, 42);
  auto b = init_codebook(MapGrid(12, 10), data, 42);
  CHECK(a.codebook == b.codebook);
  for (double v : a.codebook) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("init_codebook: degenerate rank falls back near the common vector") {
  auto data = parse_matrix(std::string("3 3\n1 1 1\n1 1 1\n1 1 1\n"));
  auto m = init_codebook(MapGrid(4, 3), data, 7);
  auto m2 = init_codebook(MapGrid(4, 3), data, 7);
  CHECK(m.codebook == m2.codebook);
  for (std::size_t u = 0; u < m.units(); ++u) {
    double d = 0;
    for (double v : m.unit_vector(u)) d += (v - 1.0) * (v - 1.0);
    CHECK(std::sqrt(d) < 0.2);
  }
}

TEST_CASE("init_codebook: corners are ordered along the first principal component") {
  auto data = problem1_matrix();
  std::vector<double> x(data.entries().begin(), data.entries().end());
  auto ref = eigen_oracle(covariance_oracle(x, 10, 10), 10);
  auto pc1 = ref.vectors[0];
  // Same sign convention as the implementation: largest loading positive.
  auto it = std::max_element(pc1.begin(), pc1.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0)
    for (double& v : pc1) v = -v;

  MapGrid g(12, 10);
  auto m = init_codebook(g, data, 42);
  auto along = [&](std::size_t unit) {
    double s = 0;
    auto v = m.unit_vector(unit);
    for (std::size_t k = 0; k < 10; ++k) s += v[k] * pc1[k];
    return s;
  };
  // PC1 follows the 12-unit side (rows).
  CHECK(along(g.unit_at(11, 0)) > along(g.unit_at(0, 0)));
  CHECK(along(g.unit_at(11, 9)) > along(g.unit_at(0, 9)));
  for (std::size_t r = 1; r < 12; ++r) CHECK(along(g.unit_at(r, 0)) > along(g.unit_at(r - 1, 0)));
}

TEST_CASE("train: zero learning rate leaves the codebook unchanged") {
  auto data = problem1_matrix();
  auto m = init_codebook(MapGrid(4, 4), data, 1);
  auto t = train(m, data, TrainingSchedule{{{3, 0.0, 0.0, 2.0, 1.0}}});
  CHECK(t.codebook == m.codebook);
  CHECK(t.trained_epochs == 3);
}

TEST_CASE("train: one unit, alpha 1 copies the input") {
  auto data = parse_matrix(std::string("1 3\n1 1 1\n"));
  auto m = model_from(1, 1, 3, {0.2, 0.4, 0.6});
  m.seed = 3;
  for (double sigma : {0.0, 0.5, 5.0}) {
    auto t = train(m, data, TrainingSchedule{{{1, 1.0, 1.0, sigma, std::min(sigma, 1.0)}}});
    CHECK(t.codebook == std::vector<double>{1, 1, 1});
  }
}

TEST_CASE("train: deterministic, lowers quantization error, keeps values in range") {
  auto data = problem1_matrix();
  MapGrid g(12, 10);
  auto init = init_codebook(g, data, 42);
  auto a = train(init, data, default_schedule(g));
  auto b = train(init, data, default_schedule(g));
  CHECK(a.codebook == b.codebook);
  CHECK(quantization_error(a, data) < quantization_error(init, data));
  for (double v : a.codebook) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  auto c = train(init_codebook(g, data, 43), data, default_schedule(g));
  CHECK(c.codebook != a.codebook);
}

TEST_CASE("train rejects bad input") {
  auto data = problem1_matrix();
  auto m = model_from(2, 2, 3, std::vector<double>(12, 0.5));
  CHECK_THROWS_AS(train(m, data, default_schedule(m.grid)), DimensionError);
  auto ok = init_codebook(MapGrid(2, 2), data, 1);
  CHECK_THROWS_AS(train(ok, data, TrainingSchedule{}), Error);
}

TEST_CASE("property: each component stays within its initial-and-input range") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.2, 0.7);
  for (int t = 0; t < 10; ++t) {
    auto data = random_matrix(rng, 6, 4, 0.5);
    auto m = model_from(3, 3, 4, std::vector<double>(36));
    for (double& v : m.codebook) v = u(rng);
    m.seed = rng();
    std::vector<double> lo(4, INFINITY), hi(4, -INFINITY);
    for (std::size_t i = 0; i < m.codebook.size(); ++i) {
      lo[i % 4] = std::min(lo[i % 4], m.codebook[i]);
      hi[i % 4] = std::max(hi[i % 4], m.codebook[i]);
    }
    for (std::size_t p = 0; p < 6; ++p)
      for (std::size_t j = 0; j < 4; ++j) {
        lo[j] = std::min<double>(lo[j], data.at(p, j));
        hi[j] = std::max<double>(hi[j], data.at(p, j));
      }
    auto out = train(m, data, TrainingSchedule{{{5, 1.0, 0.3, 2.0, 0.5}}});
    for (std::size_t i = 0; i < out.codebook.size(); ++i) {
      CHECK(out.codebook[i] >= lo[i % 4]);
      CHECK(out.codebook[i] <= hi[i % 4]);
    }
  }
}

TEST_CASE("quantization error") {
  auto data = parse_matrix(std::string("3 2\n1 0\n0 1\n1 0\n"));
  auto exact = model_from(1, 2, 2, {1, 0, 0, 1});
  CHECK(quantization_error(exact, data) == 0.0);

  auto two = parse_matrix(std::string("2 4\n1 0 0 0\n0 1 1 1\n"));
  auto mean = model_from(1, 1, 4, {0.5, 0.5, 0.5, 0.5});
  CHECK(quantization_error(mean, two) == doctest::Approx(1.0));

  auto p1 = problem1_matrix();
  std::vector<double> centroid(10, 0.0);
  for (std::size_t p = 0; p < 10; ++p)
    for (std::size_t j = 0; j < 10; ++j) centroid[j] += p1.at(p, j) / 10.0;
  auto baseline = model_from(1, 1, 10, centroid);
  MapGrid g(12, 10);
  auto trained = train(init_codebook(g, p1, 42), p1, default_schedule(g));
  CHECK(quantization_error(trained, p1) < quantization_error(baseline, p1));
}

TEST_CASE("model JSON round-trips exactly") {
  auto data = problem1_matrix();
  MapGrid g(5, 3);
  auto m = train(init_codebook(g, data, 9), data, default_schedule(g));
  auto back = deserialize_model(serialize_model(m));
  CHECK(back.codebook == m.codebook);
  CHECK(back.grid == m.grid);
  CHECK(back.seed == 9);
  CHECK(back.trained_epochs == 30);
  CHECK(back.schedule.phases.size() == 2);
  CHECK_THROWS_AS(deserialize_model("{}"), Error);
  CHECK_THROWS_AS(deserialize_model("not json"), Error);
}

}  // TEST_SUITE
