#include "toric/field.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "toric/error.hpp"

namespace toric {
namespace {

std::vector<unsigned> distinct_prime_factors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

unsigned pow_mod(unsigned base, unsigned long long e, unsigned mod) {
  unsigned long long r = 1 % mod, b = base % mod;
  while (e) {
    if (e & 1) r = r * b % mod;
    b = b * b % mod;
    e >>= 1;
  }
  return static_cast<unsigned>(r);
}

using Poly = std::vector<unsigned>;  // coefficients low to high over GF(p)

// Remainder of f modulo a monic g, over GF(p).
Poly poly_mod(Poly f, const Poly& g, unsigned p) {
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg && !f.empty()) {
    const unsigned lead = f.back();
    if (lead != 0) {
      const std::size_t shift = f.size() - 1 - dg;
      for (std::size_t i = 0; i <= dg; ++i) f[shift + i] = (f[shift + i] + p - (lead * g[i]) % p) % p;
    }
    f.pop_back();
  }
  return f;
}

bool poly_is_zero(const Poly& f) {
  for (unsigned c : f)
    if (c) return false;
  return true;
}

// Trial division by every monic polynomial of degree 1..deg(f)/2.
bool is_irreducible(const Poly& f, unsigned p) {
  const unsigned deg = static_cast<unsigned>(f.size() - 1);
  for (unsigned d = 1; 2 * d <= deg; ++d) {
    unsigned long long count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned long long c = 0; c < count; ++c) {
      Poly g(d + 1);
      unsigned long long v = c;
      for (unsigned i = 0; i < d; ++i) {
        g[i] = static_cast<unsigned>(v % p);
        v /= p;
      }
      g[d] = 1;
      if (poly_is_zero(poly_mod(f, g, p))) return false;
    }
  }
  return true;
}

}  // namespace

std::pair<unsigned, unsigned> prime_power(unsigned q) noexcept {
  if (q < 2) return {0, 0};
  const auto factors = distinct_prime_factors(q);
  if (factors.size() != 1) return {0, 0};
  unsigned m = 0;
  for (unsigned v = q; v > 1; v /= factors[0]) ++m;
  return {factors[0], m};
}

Field::Field(unsigned q) : q_(q) {
  if (q > kMaxOrder) throw TooLarge("field order " + std::to_string(q) + " exceeds " + std::to_string(kMaxOrder));
  const auto [p, m] = prime_power(q);
  if (p == 0) throw NotPrimePower(std::to_string(q) + " is not a prime power");
  p_ = p;
  m_ = m;
  pow_p_.resize(m_ + 1);
  pow_p_[0] = 1;
  for (unsigned i = 1; i <= m_; ++i) pow_p_[i] = pow_p_[i - 1] * p_;

  if (m_ == 1)
    build_prime();
  else
    build_extension();

  // Doubled exp table: log a + log b < 2(q-1).
  const unsigned order = q_ - 1;
  exp_.resize(2 * order);
  for (unsigned e = 0; e < order; ++e) exp_[order + e] = exp_[e];
  log_.assign(q_, 0);
  for (unsigned e = 0; e < order; ++e) log_[exp_[e]] = e;

  neg_.resize(q_);
  for (unsigned a = 0; a < q_; ++a) {
    unsigned out = 0;
    for (unsigned i = 0; i < m_; ++i) {
      const unsigned digit = (a / pow_p_[i]) % p_;
      out += ((p_ - digit) % p_) * pow_p_[i];
    }
    neg_[a] = static_cast<Element>(out);
  }

  if (p_ != 2 && m_ > 1 && q_ <= 256) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (unsigned a = 0; a < q_; ++a)
      for (unsigned b = 0; b < q_; ++b) {
        unsigned out = 0;
        for (unsigned i = 0; i < m_; ++i) {
          const unsigned da = (a / pow_p_[i]) % p_, db = (b / pow_p_[i]) % p_;
          out += ((da + db) % p_) * pow_p_[i];
        }
        add_table_[static_cast<std::size_t>(a) * q_ + b] = static_cast<Element>(out);
      }
  }
}

void Field::build_prime() {
  modulus_ = {0, 1};
  const unsigned order = q_ - 1;
  unsigned g = 1;
  if (q_ > 2) {
    const auto factors = distinct_prime_factors(order);
    for (g = 2; g < q_; ++g) {
      bool primitive = true;
      for (unsigned f : factors)
        if (pow_mod(g, order / f, q_) == 1) {
          primitive = false;
          break;
        }
      if (primitive) break;
    }
  }
  exp_.resize(order);
  unsigned long long v = 1;
  for (unsigned e = 0; e < order; ++e) {
    exp_[e] = static_cast<Element>(v);
    v = v * g % q_;
  }
}

void Field::build_extension() {
  const unsigned order = q_ - 1;
  // Multiply an element (index encoding) by x modulo the monic polynomial with lower coefficients `low`.
  auto times_x = [&](unsigned a, const std::vector<unsigned>& low) {
    std::vector<unsigned> digits(m_ + 1, 0);
    for (unsigned i = 0; i < m_; ++i) digits[i + 1] = (a / pow_p_[i]) % p_;
    const unsigned top = digits[m_];
    unsigned out = 0;
    for (unsigned i = 0; i < m_; ++i) {
      const unsigned d = (digits[i] + p_ - (top * low[i]) % p_) % p_;
      out += d * pow_p_[i];
    }
    return out;
  };

  for (unsigned c = 1; c < q_; ++c) {
    std::vector<unsigned> low(m_);
    for (unsigned i = 0; i < m_; ++i) low[i] = (c / pow_p_[i]) % p_;
    if (low[0] == 0) continue;  // divisible by x
    Poly f = low;
    f.push_back(1);
    if (!is_irreducible(f, p_)) continue;

    std::vector<Element> powers(order);
    unsigned v = 1;
    bool primitive = true;
    for (unsigned e = 0; e < order; ++e) {
      if (e > 0 && v == 1) {
        primitive = false;
        break;
      }
      powers[e] = static_cast<Element>(v);
      v = times_x(v, low);
    }
    if (!primitive || v != 1) continue;
    modulus_ = f;
    exp_ = std::move(powers);
    return;
  }
  throw Error("no primitive modulus found for GF(" + std::to_string(q_) + ")");
}

Element Field::add(Element a, Element b) const noexcept {
  if (p_ == 2) return static_cast<Element>(a ^ b);
  if (m_ == 1) {
    const unsigned s = unsigned(a) + b;
    return static_cast<Element>(s >= q_ ? s - q_ : s);
  }
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
  unsigned out = 0;
  for (unsigned i = 0; i < m_; ++i) {
    const unsigned da = (a / pow_p_[i]) % p_, db = (b / pow_p_[i]) % p_;
    out += ((da + db) % p_) * pow_p_[i];
  }
  return static_cast<Element>(out);
}

Element Field::neg(Element a) const noexcept { return neg_[a]; }

Element Field::inv(Element a) const {
  if (a == 0) throw DivisionByZero();
  const unsigned order = q_ - 1;
  return exp_[(order - log_[a]) % order];
}

Element Field::pow(Element a, long long e) const {
  if (a == 0) {
    if (e < 0) throw DivisionByZero();
    return e == 0 ? 1 : 0;
  }
  const long long order = q_ - 1;
  long long r = (static_cast<long long>(log_[a]) * (e % order)) % order;
  if (r < 0) r += order;
  return exp_[static_cast<std::size_t>(r)];
}

Element Field::exp(long long e) const noexcept {
  const long long order = q_ - 1;
  long long r = e % order;
  if (r < 0) r += order;
  return exp_[static_cast<std::size_t>(r)];
}

unsigned Field::log(Element a) const {
  if (a == 0) throw DivisionByZero();
  return log_[a];
}

std::string Field::to_string() const {
  std::ostringstream os;
  os << "GF(" << q_ << ")";
  if (m_ > 1) {
    os << "/[";
    for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
    os << "]";
  }
  return os.str();
}

FieldPtr field_new(unsigned q) {
  static std::mutex mutex;
  static std::map<unsigned, FieldPtr> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(q); it != cache.end()) return it->second;
  auto field = std::make_shared<const Field>(q);
  cache.emplace(q, field);
  return field;
}

}  // namespace toric
