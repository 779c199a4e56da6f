#pragma once

/// @file field.hpp
/// @brief Table-driven arithmetic in GF(q), q = p^m <= 2^16.
///
/// Elements are integer indices in [0, q-1]. For prime fields the index is the
/// residue class; for extension fields it is the polynomial-basis encoding
/// sum_i c_i p^i (for p = 2 this is the bit pattern with the coefficient of
/// x^i in bit i). Index 0 is zero and index 1 is one in every field.
///
/// The primitive element is fixed per q: the smallest primitive root for prime
/// q, and the class of x modulo the smallest monic irreducible modulus (ordered
/// by the index encoding of its lower coefficients) for which x is primitive.
/// For q = 8 that is x^3 + x + 1.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace toric {

using Element = std::uint16_t;

class Field {
 public:
  static constexpr unsigned kMaxOrder = 65536;

  /// Throws NotPrimePower or TooLarge.
  explicit Field(unsigned q);

  unsigned q() const noexcept { return q_; }
  unsigned p() const noexcept { return p_; }
  unsigned m() const noexcept { return m_; }
  bool is_prime() const noexcept { return m_ == 1; }

  /// Modulus coefficients, low to high, length m + 1 (monic). {0, 1} for prime fields.
  const std::vector<unsigned>& modulus() const noexcept { return modulus_; }
  Element xi() const noexcept { return exp_[1 % (q_ - 1)]; }

  std::span<const Element> exp_table() const noexcept { return {exp_.data(), q_ - 1}; }
  std::span<const std::uint32_t> log_table() const noexcept { return log_; }

  Element add(Element a, Element b) const noexcept;
  Element sub(Element a, Element b) const noexcept { return add(a, neg(b)); }
  Element neg(Element a) const noexcept;
  Element mul(Element a, Element b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  /// Throws DivisionByZero for a = 0.
  Element inv(Element a) const;
  /// a^e; negative e inverts first. 0^0 = 1; 0^e for e < 0 throws DivisionByZero.
  Element pow(Element a, long long e) const;
  /// xi^e for any integer e.
  Element exp(long long e) const noexcept;
  /// Discrete log base xi of a nonzero element.
  unsigned log(Element a) const;

  /// Element with polynomial coefficient 1 at x^i and 0 elsewhere (i < m), i.e. index p^i.
  Element basis(unsigned i) const noexcept { return static_cast<Element>(pow_p_[i]); }

  bool contains(long long v) const noexcept { return v >= 0 && v < static_cast<long long>(q_); }

  /// "GF(q)" or, for m > 1, "GF(q)/[c0,c1,...,cm]".
  std::string to_string() const;

 private:
  void build_prime();
  void build_extension();

  unsigned q_ = 0, p_ = 0, m_ = 0;
  std::vector<unsigned> modulus_;
  std::vector<unsigned> pow_p_;
  std::vector<Element> exp_;         // length 2(q-1) so that mul needs no reduction
  std::vector<std::uint32_t> log_;   // log_[0] is unused
  std::vector<Element> neg_;
  std::vector<Element> add_table_;  // q*q, only for odd-characteristic extensions with q <= 256
};

using FieldPtr = std::shared_ptr<const Field>;

/// Shared, immutable field instance for q. Instances are cached per q.
FieldPtr field_new(unsigned q);

/// Factor q as p^m; returns {0, 0} if q is not a prime power.
std::pair<unsigned, unsigned> prime_power(unsigned q) noexcept;

}  // namespace toric
