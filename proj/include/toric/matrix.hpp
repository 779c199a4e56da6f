#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "toric/field.hpp"

namespace toric {

/// Dense row-major matrix over a finite field.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  CodeMatrix(FieldPtr field, std::size_t rows, std::size_t cols);
  CodeMatrix(FieldPtr field, std::size_t cols, const std::vector<std::vector<Element>>& rows);

  const FieldPtr& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  Element& at(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  Element at(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<Element> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Element> values);
  std::vector<std::vector<Element>> to_rows() const;

  bool operator==(const CodeMatrix& other) const;

 private:
  FieldPtr field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Element> data_;
};

struct RrefResult {
  CodeMatrix matrix;                // zero rows dropped
  std::vector<std::size_t> pivots;  // strictly increasing, one per row
};

/// Reduced row echelon form: pivots are 1, the only nonzero entry in their
/// column, and strictly increasing; zero rows are dropped.
RrefResult rref(const CodeMatrix& m);

/// Gaussian elimination that tries pivot columns in the given order. Rows of
/// the result are ordered by pivot discovery and are fully reduced on every
/// pivot column. Zero rows are dropped.
RrefResult eliminate(const CodeMatrix& m, std::span<const std::size_t> column_order);

std::size_t rank(const CodeMatrix& m);

/// A * B^T
CodeMatrix multiply_transpose(const CodeMatrix& a, const CodeMatrix& b);

/// Hamming weight of a vector.
std::size_t weight(std::span<const Element> word) noexcept;

/// message * matrix; throws DimensionMismatch.
std::vector<Element> vector_times(std::span<const Element> message, const CodeMatrix& m);

}  // namespace toric
