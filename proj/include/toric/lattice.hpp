#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace toric {

/// Exponent pair (a, b) of the monomial x^a y^b, reduced into [0, period)^2.
struct LatticePoint {
  int a = 0;
  int b = 0;

  LatticePoint() = default;
  LatticePoint(int a_, int b_) : a(a_), b(b_) {}

  LatticePoint reduced(int period) const;
  auto operator<=>(const LatticePoint&) const = default;
};

/// Sorted (a-major), duplicate-free set of lattice points in [0, period)^2, with
/// period = q - 1. Coordinates are reduced modulo the period on construction.
class LatticePointSet {
 public:
  LatticePointSet() = default;
  LatticePointSet(std::vector<LatticePoint> points, int period);

  const std::vector<LatticePoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  int period() const noexcept { return period_; }
  bool contains(const LatticePoint& u) const;

  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// "(a1,b1);(a2,b2);..."
  std::string to_string() const;

  bool operator==(const LatticePointSet& other) const = default;
  auto operator<=>(const LatticePointSet& other) const = default;

 private:
  std::vector<LatticePoint> points_;
  int period_ = 0;
};

/// Parses "(a1,b1);(a2,b2);..." (whitespace tolerated, ';' or ',' between pairs).
/// Throws ParseError.
std::vector<LatticePoint> parse_points(std::string_view text);

struct LatticePointSetHash {
  std::size_t operator()(const LatticePointSet& v) const noexcept;
};

}  // namespace toric
