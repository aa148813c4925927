#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace pbdim {

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Writes q = p^m with p prime, m >= 1, or nothing if q is not a prime power.
inline std::optional<std::pair<long long, int>> prime_power_decompose(
    long long q) {
  if (q < 2) return std::nullopt;
  for (long long p = 2; p * p <= q; ++p) {
    if (q % p != 0) continue;
    int m = 0;
    long long rest = q;
    while (rest % p == 0) {
      rest /= p;
      ++m;
    }
    if (rest != 1) return std::nullopt;
    return std::make_pair(p, m);
  }
  return std::make_pair(q, 1);  // q itself is prime
}

// Polynomials over Z_p are coefficient vectors, ascending degree, no
// trailing zeros except the zero polynomial (empty vector).

/// GF(p^m) with elements encoded as integers in [0, p^m).  The base-p digits
/// of an element are the coefficients of its polynomial representative, the
/// constant term being the least significant digit.
class FiniteField {
 public:
  static constexpr long long kMaxOrder = 1 << 16;

  FiniteField(long long p, int m) : p_(p), m_(m) {
    if (!is_prime(p)) throw NotPrimeError(p);
    if (m < 1) throw Error("field degree must be positive");
    q_ = 1;
    for (int i = 0; i < m; ++i) {
      q_ *= p;
      if (q_ > kMaxOrder)
        throw TooLargeError("field order exceeds " +
                            std::to_string(kMaxOrder));
    }
    if (m_ > 1) modulus_ = find_modulus();
  }

  long long characteristic() const { return p_; }
  int degree() const { return m_; }
  long long order() const { return q_; }

  /// Monic modulus polynomial, ascending degree, size m+1.  Empty for m = 1.
  const std::vector<long long>& modulus() const { return modulus_; }

  long long add(long long a, long long b) const {
    check(a);
    check(b);
    if (m_ == 1) return (a + b) % p_;
    long long r = 0, place = 1;
    for (int i = 0; i < m_; ++i) {
      r += ((a + b) % p_) * place;
      a /= p_;
      b /= p_;
      place *= p_;
    }
    return r;
  }

  long long neg(long long a) const {
    check(a);
    if (m_ == 1) return (p_ - a) % p_;
    long long r = 0, place = 1;
    for (int i = 0; i < m_; ++i) {
      r += ((p_ - a % p_) % p_) * place;
      a /= p_;
      place *= p_;
    }
    return r;
  }

  long long sub(long long a, long long b) const { return add(a, neg(b)); }

  long long mul(long long a, long long b) const {
    check(a);
    check(b);
    if (m_ == 1) return (a * b) % p_;
    std::vector<long long> prod(2 * m_ - 1, 0);
    std::vector<long long> da = digits(a), db = digits(b);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    reduce(prod);
    return from_digits(prod);
  }

  /// Multiplicative inverse; throws DivisionByZeroError for 0.
  long long inv(long long a) const {
    check(a);
    if (a == 0) throw DivisionByZeroError();
    // a^(q-2) = a^(-1) in the unit group of order q-1.
    long long result = 1, base = a, e = q_ - 2;
    while (e > 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

  long long div(long long a, long long b) const { return mul(a, inv(b)); }

 private:
  void check(long long a) const { assert(a >= 0 && a < q_); (void)a; }

  std::vector<long long> digits(long long a) const {
    std::vector<long long> d(m_);
    for (int i = 0; i < m_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  }

  long long from_digits(const std::vector<long long>& d) const {
    long long r = 0;
    for (int i = m_ - 1; i >= 0; --i) r = r * p_ + (i < (int)d.size() ? d[i] : 0);
    return r;
  }

  // In-place remainder of poly by the monic modulus, coefficients mod p.
  void reduce(std::vector<long long>& poly) const {
    for (int deg = (int)poly.size() - 1; deg >= m_; --deg) {
      long long lead = poly[deg] % p_;
      if (lead == 0) continue;
      // poly -= lead * x^(deg-m) * modulus
      for (int i = 0; i <= m_; ++i) {
        long long& c = poly[deg - m_ + i];
        c = ((c - lead * modulus_[i]) % p_ + p_) % p_;
      }
    }
    poly.resize(m_);
    for (auto& c : poly) c %= p_;
  }

  // Remainder of f by monic divisor g, both over Z_p.
  static std::vector<long long> poly_mod(std::vector<long long> f,
                                         const std::vector<long long>& g,
                                         long long p) {
    int dg = (int)g.size() - 1;
    for (int deg = (int)f.size() - 1; deg >= dg; --deg) {
      long long lead = f[deg] % p;
      if (lead == 0) continue;
      for (int i = 0; i <= dg; ++i) {
        long long& c = f[deg - dg + i];
        c = ((c - lead * g[i]) % p + p) % p;
      }
    }
    f.resize(dg);
    return f;
  }

  static bool is_zero(const std::vector<long long>& f) {
    for (long long c : f)
      if (c != 0) return false;
    return true;
  }

  // Trial division by every monic polynomial of degree 1..m/2 suffices:
  // a reducible degree-m polynomial has a monic factor in that range.
  bool irreducible(const std::vector<long long>& f) const {
    if (f[0] == 0) return false;  // divisible by x
    for (int dg = 1; 2 * dg <= m_; ++dg) {
      long long count = 1;
      for (int i = 0; i < dg; ++i) count *= p_;
      for (long long low = 0; low < count; ++low) {
        std::vector<long long> g(dg + 1, 0);
        long long t = low;
        for (int i = 0; i < dg; ++i) {
          g[i] = t % p_;
          t /= p_;
        }
        g[dg] = 1;
        if (is_zero(poly_mod(f, g, p_))) return false;
      }
    }
    return true;
  }

  // Smallest monic irreducible of degree m under the ordering induced by the
  // integer whose base-p digits are the lower coefficients.
  std::vector<long long> find_modulus() const {
    long long count = 1;
    for (int i = 0; i < m_; ++i) count *= p_;
    for (long long low = 0; low < count; ++low) {
      std::vector<long long> f(m_ + 1, 0);
      long long t = low;
      for (int i = 0; i < m_; ++i) {
        f[i] = t % p_;
        t /= p_;
      }
      f[m_] = 1;
      if (irreducible(f)) return f;
    }
    throw Error("no irreducible polynomial found");  // cannot happen
  }

  long long p_;
  int m_;
  long long q_;
  std::vector<long long> modulus_;
};

inline FiniteField field_make(long long p, int m) { return FiniteField(p, m); }

/// Field of the given prime-power order.
inline FiniteField field_for_order(long long q) {
  auto pm = prime_power_decompose(q);
  if (!pm) throw NotPrimePowerError(q);
  return FiniteField(pm->first, pm->second);
}

}  // namespace pbdim
