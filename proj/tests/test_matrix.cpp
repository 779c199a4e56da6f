#include <random>

#include "doctest.h"
#include "support.hpp"
#include "toric/error.hpp"
#include "toric/lattice.hpp"
#include "toric/matrix.hpp"

using namespace toric;

TEST_CASE("point parsing") {
  CHECK(parse_points("(0,1);(2,3)") == std::vector<LatticePoint>{{0, 1}, {2, 3}});
  CHECK(parse_points(" ( 0 , 1 ) , (2,3) ") == std::vector<LatticePoint>{{0, 1}, {2, 3}});
  CHECK(parse_points("(0,1)(2,3)") == std::vector<LatticePoint>{{0, 1}, {2, 3}});
  CHECK(parse_points("(-1,8)") == std::vector<LatticePoint>{{-1, 8}});
  CHECK_THROWS_AS(parse_points("(0,1"), ParseError);
  CHECK_THROWS_AS(parse_points("(a,1)"), ParseError);
  CHECK_THROWS_AS(parse_points("0,1"), ParseError);
}

TEST_CASE("point sets reduce, sort and deduplicate") {
  const LatticePointSet v({{7, -1}, {0, 6}, {1, 2}}, 7);
  CHECK(v.size() == 2);
  CHECK(v.points().front() == LatticePoint{0, 6});
  CHECK(v.to_string() == "(0,6);(1,2)");
  CHECK(v.contains({1, 2}));
  CHECK(LatticePointSetHash{}(v) == LatticePointSetHash{}(LatticePointSet({{1, 2}, {0, 6}}, 7)));
}

TEST_CASE("rref properties on random matrices") {
  std::mt19937_64 rng(3);
  for (unsigned q : {2u, 5u, 8u, 9u}) {
    const auto f = field_new(q);
    std::uniform_int_distribution<unsigned> pick(0, q - 1);
    for (int t = 0; t < 30; ++t) {
      const std::size_t rows = 1 + rng() % 6, cols = rows + rng() % 8;
      CodeMatrix m(f, rows, cols);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = static_cast<Element>(pick(rng) * (rng() % 3 != 0));
      const auto red = rref(m);
      CHECK(red.matrix.rows() == red.pivots.size());
      CHECK(std::is_sorted(red.pivots.begin(), red.pivots.end()));
      for (std::size_t r = 0; r < red.pivots.size(); ++r)
        for (std::size_t s = 0; s < red.pivots.size(); ++s) CHECK(red.matrix.at(s, red.pivots[r]) == (r == s ? 1 : 0));
      CHECK(rref(red.matrix).matrix == red.matrix);
      // same row space
      for (std::size_t r = 0; r < rows; ++r)
        CHECK(testing_support::in_row_space(red.matrix, std::vector<Element>(m.row(r).begin(), m.row(r).end())));
    }
  }
}

TEST_CASE("eliminate honours the column order") {
  const auto f = field_new(3);
  const CodeMatrix g(f, 4, {{1, 0, 0, 2}, {0, 1, 0, 1}, {0, 0, 1, 1}});
  const std::vector<std::size_t> order{3, 2, 1, 0};
  const auto e = eliminate(g, order);
  CHECK(e.pivots == std::vector<std::size_t>{3, 2, 1});
  CHECK(e.matrix.at(0, 3) == 1);
  CHECK(rank(e.matrix) == 3);
}

TEST_CASE("matrix shape errors") {
  const auto f = field_new(5);
  CodeMatrix m(f, 0, 3);
  CHECK_THROWS_AS(m.append_row(std::vector<Element>{1, 2}), DimensionMismatch);
  CHECK_THROWS_AS(m.append_row(std::vector<Element>{1, 2, 5}), DimensionMismatch);
  m.append_row(std::vector<Element>{1, 2, 3});
  CHECK_THROWS_AS(vector_times(std::vector<Element>{1, 1}, m), DimensionMismatch);
  CHECK(vector_times(std::vector<Element>{2}, m) == std::vector<Element>{2, 4, 1});
  CHECK_THROWS_AS(multiply_transpose(m, CodeMatrix(f, 1, 2)), DimensionMismatch);
  CHECK(multiply_transpose(m, m).at(0, 0) == 4);  // 1 + 4 + 9 = 14 = 4 mod 5
  CHECK(weight(m.row(0)) == 3);
}
