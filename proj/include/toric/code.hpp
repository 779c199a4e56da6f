#pragma once

/// @file code.hpp
/// @brief Generalised toric codes C_V(F_q).
///
/// Coordinates are the torus points (xi^i, xi^j), 0 <= i, j <= q-2, flattened
/// i-major: position i*(q-1) + j. The lattice point (a, b) contributes the
/// evaluation vector (xi^(ia + jb)).

#include <cstddef>
#include <vector>

#include "toric/field.hpp"
#include "toric/lattice.hpp"
#include "toric/matrix.hpp"

namespace toric {

class ToricCode {
 public:
  /// Throws EmptyPointSet.
  ToricCode(FieldPtr field, LatticePointSet points);

  const FieldPtr& field() const noexcept { return field_; }
  const LatticePointSet& points() const noexcept { return points_; }
  std::size_t n() const noexcept { return spanning_.cols(); }
  std::size_t k() const noexcept { return generator_.rows(); }

  /// One evaluation vector per point, in sorted point order.
  const CodeMatrix& spanning() const noexcept { return spanning_; }
  /// Canonical generator: RREF of the spanning matrix.
  const CodeMatrix& generator() const noexcept { return generator_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

 private:
  FieldPtr field_;
  LatticePointSet points_;
  CodeMatrix spanning_;
  CodeMatrix generator_;
  std::vector<std::size_t> pivots_;
};

std::vector<Element> evaluation_vector(const Field& field, const LatticePoint& u);

ToricCode build_code(const FieldPtr& field, const LatticePointSet& points);
ToricCode build_code(const FieldPtr& field, const std::vector<LatticePoint>& points);

/// (n-k) x n parity-check matrix in RREF whose rows span the dual code.
/// Empty (0 x n) when k = n.
CodeMatrix parity_check(const CodeMatrix& generator, const std::vector<std::size_t>& pivots);
CodeMatrix parity_check(const ToricCode& code);

/// message * G. Throws DimensionMismatch.
std::vector<Element> encode(const ToricCode& code, std::span<const Element> message);

}  // namespace toric
