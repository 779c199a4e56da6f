#pragma once

#include <random>
#include <vector>

#include "toric/code.hpp"
#include "toric/ga.hpp"
#include "toric/matrix.hpp"

namespace testing_support {

using namespace toric;

inline ToricCode random_code(unsigned q, std::size_t m, Rng& rng) {
  return ToricCode(field_new(q), random_point_set(static_cast<int>(q) - 1, m, rng));
}

inline bool in_row_space(const CodeMatrix& g, const std::vector<Element>& word) {
  CodeMatrix stacked = g;
  stacked.append_row(word);
  return rank(stacked) == rank(g);
}

inline ToricCode f5_example() {
  return build_code(field_new(5), std::vector<LatticePoint>{{0, 1}, {1, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 1}});
}

inline ToricCode f3_example() {
  return build_code(field_new(3), std::vector<LatticePoint>{{0, 0}, {0, 1}, {1, 0}});
}

inline const std::vector<std::vector<Element>>& f5_example_rows() {
  static const std::vector<std::vector<Element>> rows = {
      {1, 0, 0, 0, 0, 1, 3, 0, 0, 2, 0, 4, 4, 2, 2, 1}, {0, 1, 0, 0, 0, 0, 1, 3, 0, 2, 1, 3, 2, 1, 1, 0},
      {0, 0, 1, 0, 0, 4, 3, 2, 0, 4, 0, 2, 0, 2, 1, 1}, {0, 0, 0, 1, 0, 1, 1, 2, 0, 1, 1, 4, 1, 0, 2, 1},
      {0, 0, 0, 0, 1, 2, 4, 3, 0, 0, 0, 0, 4, 3, 1, 2}, {0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 4, 3, 1, 2, 4, 3}};
  return rows;
}

}  // namespace testing_support
