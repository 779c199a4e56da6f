#include "toric/code.hpp"

#include <algorithm>

#include "toric/error.hpp"

namespace toric {

std::vector<Element> evaluation_vector(const Field& field, const LatticePoint& u) {
  const int period = static_cast<int>(field.q()) - 1;
  const LatticePoint r = u.reduced(period);
  std::vector<Element> out(static_cast<std::size_t>(period) * period);
  for (int i = 0; i < period; ++i)
    for (int j = 0; j < period; ++j)
      out[static_cast<std::size_t>(i) * period + j] = field.exp(static_cast<long long>(i) * r.a +
                                                                static_cast<long long>(j) * r.b);
  return out;
}

ToricCode::ToricCode(FieldPtr field, LatticePointSet points) : field_(std::move(field)), points_(std::move(points)) {
  if (points_.empty()) throw EmptyPointSet();
  const int period = static_cast<int>(field_->q()) - 1;
  if (points_.period() != period)
    points_ = LatticePointSet(points_.points(), period);
  const std::size_t n = static_cast<std::size_t>(period) * period;
  spanning_ = CodeMatrix(field_, 0, n);
  for (const auto& u : points_) spanning_.append_row(evaluation_vector(*field_, u));
  auto reduced = rref(spanning_);
  generator_ = std::move(reduced.matrix);
  pivots_ = std::move(reduced.pivots);
}

ToricCode build_code(const FieldPtr& field, const LatticePointSet& points) { return ToricCode(field, points); }

ToricCode build_code(const FieldPtr& field, const std::vector<LatticePoint>& points) {
  return ToricCode(field, LatticePointSet(points, static_cast<int>(field->q()) - 1));
}

CodeMatrix parity_check(const CodeMatrix& generator, const std::vector<std::size_t>& pivots) {
  const Field& f = *generator.field();
  const std::size_t n = generator.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;

  // One dual vector per free column j: 1 at j, -G[r][j] at the pivot of row r.
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);

  CodeMatrix out(generator.field(), free_cols.size(), n);
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    const std::size_t j = free_cols[t];
    out.at(t, j) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) out.at(t, pivots[r]) = f.neg(generator.at(r, j));
  }
  return rref(out).matrix;
}

CodeMatrix parity_check(const ToricCode& code) { return parity_check(code.generator(), code.pivots()); }

std::vector<Element> encode(const ToricCode& code, std::span<const Element> message) {
  return vector_times(message, code.generator());
}

}  // namespace toric
