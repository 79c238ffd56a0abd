#include <doctest.h>

#include <random>

#include "cellsom/incidence.hpp"
#include "test_support.hpp"

using namespace cellsom;
using cellsom::testing::strip_decoration;

TEST_SUITE("incidence") {

TEST_CASE("problem 1 parses with rows as parts") {
  auto m = problem1_matrix();
  CHECK(m.parts() == 10);
  CHECK(m.machines() == 10);
  std::vector<std::uint8_t> p3 = {1, 0, 1, 0, 1, 0, 0, 0, 1, 1};
  auto row = m.row(2);
  CHECK(std::vector<std::uint8_t>(row.begin(), row.end()) == p3);
  CHECK(m.part_label(2) == "p3");
  CHECK(m.machine_label(9) == "m10");
  CHECK(m.ones() == 52);
}

TEST_CASE("smallest and identity matrices") {
  auto one = parse_matrix(std::string("1 1\n1"));
  CHECK(one.parts() == 1);
  CHECK(one.at(0, 0) == 1);

  auto id = parse_matrix(std::string("2 2\n1 0\n0 1"));
  CHECK(id.at(0, 0) == 1);
  CHECK(id.at(0, 1) == 0);
  CHECK(id.at(1, 0) == 0);
  CHECK(id.at(1, 1) == 1);
}

TEST_CASE("comments, CRLF and label comments are accepted") {
  auto m = parse_matrix(std::string("# header comment\r\n2 3\r\n#   m1 m2 m3\r\n1 0 1\r\n  # indented comment\n0 1 0\n"));
  CHECK(m.parts() == 2);
  CHECK(m.machines() == 3);
  CHECK(m.at(1, 1) == 1);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_matrix(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t(9999);
  };
  CHECK(line_of("2 2\n1 0 1\n0 1\n") == 2);      // too many tokens
  CHECK(line_of("2 2\n1 0\n0 2\n") == 3);        // non-binary
  CHECK(line_of("2 2\n1 0\n") == 0);             // missing row
  CHECK(line_of("2 2\n1 0\n0 1\n1 1\n") == 4);   // extra row
  CHECK(line_of("2 2\n2 2\n1 0\n0 1\n") == 2);   // duplicate header
  CHECK(line_of("x y\n") == 1);
  CHECK(line_of("") == 0);
  CHECK_THROWS_AS(parse_matrix(std::string("2 2\n0 0\n1 1\n")), ParseError);  // empty row
  CHECK_THROWS_AS(parse_matrix(std::string("2 2\n1 0\n1 0\n")), ParseError);  // empty column
  CHECK_THROWS_AS(parse_matrix(std::string("0 3\n")), ParseError);
}

TEST_CASE("constructor validates invariants") {
  CHECK_THROWS_AS(IncidenceMatrix(2, 2, {1, 0, 0}), DimensionError);
  CHECK_THROWS_AS(IncidenceMatrix(1, 1, {2}), Error);
  CHECK_THROWS_AS(IncidenceMatrix(1, 2, {1, 0}), Error);
}

TEST_CASE("transpose on ingest") {
  auto m = parse_matrix(std::string("2 3\n1 0 1\n0 1 1\n"), true);
  CHECK(m.parts() == 3);
  CHECK(m.machines() == 2);
  CHECK(m.at(2, 1) == 1);
  CHECK(m.at(0, 1) == 0);
}

TEST_CASE("render reproduces the reference block form") {
  using namespace cellsom::testing;
  auto m = problem1_matrix();
  BlockDiagonalView v;
  for (const auto& l : kBlockFormRows) v.row_order.push_back(label_index(l));
  for (const auto& l : kBlockFormCols) v.col_order.push_back(label_index(l));
  v.cells = {{0, 3, 0, 5}, {3, 10, 5, 10}};
  auto text = render_block_diagonal(m, v);

  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::vector<std::string> cols;
  for (std::string t; hs >> t;)
    if (t != "|") cols.push_back(t);
  CHECK(cols == kBlockFormCols);

  auto body = parse_matrix(strip_decoration(text, 10, 10));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) CHECK(body.at(i, j) == kBlockFormGrid[i][j]);

  // One vertical bar per row and one horizontal rule.
  CHECK(std::count(text.begin(), text.end(), '|') == 11);
  CHECK(text.find("+") != std::string::npos);
}

TEST_CASE("identity view renders the matrix verbatim") {
  auto m = problem1_matrix();
  auto text = render_block_diagonal(m, BlockDiagonalView::identity(10, 10));
  CHECK(text.find('|') == std::string::npos);
  CHECK(parse_matrix(strip_decoration(text, 10, 10)) == m);
}

TEST_CASE("swapping rows and columns diagonalizes the anti-diagonal") {
  auto anti = parse_matrix(std::string("2 2\n0 1\n1 0\n"));
  BlockDiagonalView v{{1, 0}, {0, 1}, {{0, 1, 0, 1}, {1, 2, 1, 2}}};
  auto body = parse_matrix(strip_decoration(render_block_diagonal(anti, v), 2, 2));
  CHECK(body == parse_matrix(std::string("2 2\n1 0\n0 1\n")));
  BlockDiagonalView w{{1, 0}, {1, 0}, {{0, 2, 0, 2}}};
  CHECK(parse_matrix(strip_decoration(render_block_diagonal(anti, w), 2, 2)) == anti);
}

TEST_CASE("render rejects mismatched views") {
  auto m = problem1_matrix();
  auto v = BlockDiagonalView::identity(9, 10);
  CHECK_THROWS_AS(render_block_diagonal(m, v), DimensionError);
  auto w = BlockDiagonalView::identity(10, 10);
  w.row_order[0] = 1;
  CHECK_THROWS_AS(render_block_diagonal(m, w), DimensionError);
  auto gap = BlockDiagonalView::identity(10, 10);
  gap.cells = {{0, 3, 0, 5}, {4, 10, 5, 10}};
  CHECK_THROWS_AS(render_block_diagonal(m, gap), DimensionError);
}

TEST_CASE("property: render round-trips and preserves the ones under any permutation") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t P = 1 + rng() % 9, M = 1 + rng() % 9;
    auto m = cellsom::testing::random_matrix(rng, P, M, 0.4);
    CHECK(parse_matrix(strip_decoration(render_block_diagonal(m, BlockDiagonalView::identity(P, M)), P, M)) == m);
    CHECK(parse_matrix(format_matrix(m)) == m);

    auto v = BlockDiagonalView::identity(P, M);
    std::shuffle(v.row_order.begin(), v.row_order.end(), rng);
    std::shuffle(v.col_order.begin(), v.col_order.end(), rng);
    auto shown = parse_matrix(strip_decoration(render_block_diagonal(m, v), P, M));
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = 0; j < M; ++j) CHECK(shown.at(i, j) == m.at(v.row_order[i], v.col_order[j]));
    CHECK(shown.ones() == m.ones());
  }
}

}  // TEST_SUITE
