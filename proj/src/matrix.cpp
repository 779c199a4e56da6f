#include "toric/matrix.hpp"

#include <algorithm>
#include <numeric>

#include "toric/error.hpp"

namespace toric {

CodeMatrix::CodeMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

CodeMatrix::CodeMatrix(FieldPtr field, std::size_t cols, const std::vector<std::vector<Element>>& rows)
    : field_(std::move(field)), rows_(0), cols_(cols) {
  for (const auto& r : rows) append_row(r);
}

void CodeMatrix::append_row(std::span<const Element> values) {
  if (values.size() != cols_)
    throw DimensionMismatch("row has " + std::to_string(values.size()) + " entries, expected " +
                            std::to_string(cols_));
  for (Element v : values)
    if (!field_->contains(v)) throw DimensionMismatch("entry " + std::to_string(v) + " is not a field element");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

std::vector<std::vector<Element>> CodeMatrix::to_rows() const {
  std::vector<std::vector<Element>> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.emplace_back(row(r).begin(), row(r).end());
  return out;
}

bool CodeMatrix::operator==(const CodeMatrix& other) const {
  const bool same_field = field_ == other.field_ || (field_ && other.field_ && field_->q() == other.field_->q());
  return same_field && rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

RrefResult eliminate(const CodeMatrix& m, std::span<const std::size_t> column_order) {
  const Field& f = *m.field();
  CodeMatrix work = m;
  const std::size_t rows = work.rows(), cols = work.cols();
  std::vector<std::size_t> pivots;
  std::size_t next = 0;  // rows [0, next) hold pivots

  for (std::size_t c : column_order) {
    if (next == rows) break;
    std::size_t sel = next;
    while (sel < rows && work.at(sel, c) == 0) ++sel;
    if (sel == rows) continue;
    if (sel != next)
      for (std::size_t j = 0; j < cols; ++j) std::swap(work.at(sel, j), work.at(next, j));

    const Element scale = f.inv(work.at(next, c));
    for (std::size_t j = 0; j < cols; ++j) work.at(next, j) = f.mul(work.at(next, j), scale);

    for (std::size_t r = 0; r < rows; ++r) {
      if (r == next) continue;
      const Element factor = work.at(r, c);
      if (factor == 0) continue;
      const Element nf = f.neg(factor);
      for (std::size_t j = 0; j < cols; ++j) {
        const Element pv = work.at(next, j);
        if (pv) work.at(r, j) = f.add(work.at(r, j), f.mul(nf, pv));
      }
    }
    pivots.push_back(c);
    ++next;
  }

  CodeMatrix reduced(m.field(), next, cols);
  for (std::size_t r = 0; r < next; ++r) std::copy_n(work.row(r).begin(), cols, reduced.row(r).begin());
  return {std::move(reduced), std::move(pivots)};
}

RrefResult rref(const CodeMatrix& m) {
  std::vector<std::size_t> order(m.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return eliminate(m, order);
}

std::size_t rank(const CodeMatrix& m) { return rref(m).pivots.size(); }

CodeMatrix multiply_transpose(const CodeMatrix& a, const CodeMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("column counts differ in A*B^T");
  const Field& f = *a.field();
  CodeMatrix out(a.field(), a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      Element acc = 0;
      for (std::size_t c = 0; c < a.cols(); ++c) acc = f.add(acc, f.mul(a.at(i, c), b.at(j, c)));
      out.at(i, j) = acc;
    }
  return out;
}

std::size_t weight(std::span<const Element> word) noexcept {
  return static_cast<std::size_t>(std::count_if(word.begin(), word.end(), [](Element e) { return e != 0; }));
}

std::vector<Element> vector_times(std::span<const Element> message, const CodeMatrix& m) {
  if (message.size() != m.rows())
    throw DimensionMismatch("message length " + std::to_string(message.size()) + " but matrix has " +
                            std::to_string(m.rows()) + " rows");
  const Field& f = *m.field();
  std::vector<Element> out(m.cols(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const Element c = message[r];
    if (!f.contains(c)) throw DimensionMismatch("message entry " + std::to_string(c) + " is not a field element");
    if (c == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] = f.add(out[j], f.mul(c, m.at(r, j)));
  }
  return out;
}

}  // namespace toric
