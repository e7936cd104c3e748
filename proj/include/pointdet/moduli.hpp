#pragma once

// Exact polynomial and power-series arithmetic for the Poincare-polynomial
// and point-count identities of moduli spaces of rank-2 bundles.
//
// Everything here is exact: arbitrary-precision integers and rationals only.

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pointdet/errors.hpp"

namespace pointdet::moduli {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Polynomial with integer coefficients; coefficient k multiplies t^k.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  IntPolynomial(std::initializer_list<long long> coeffs) : c_(coeffs.begin(), coeffs.end()) { trim(); }
  explicit IntPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// c t^k
  static IntPolynomial monomial(std::size_t k, BigInt c = 1) {
    std::vector<BigInt> v(k + 1);
    v[k] = std::move(c);
    return IntPolynomial(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  BigInt coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigInt(0); }
  const std::vector<BigInt>& coefficients() const { return c_; }
  BigInt leading() const { return c_.empty() ? BigInt(0) : c_.back(); }

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(k) + b.coeff(k);
    return IntPolynomial(std::move(r));
  }

  friend IntPolynomial operator-(const IntPolynomial& a) {
    std::vector<BigInt> r(a.c_);
    for (auto& x : r) x = -x;
    return IntPolynomial(std::move(r));
  }

  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + (-b); }

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPolynomial(std::move(r));
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  IntPolynomial pow(unsigned e) const {
    IntPolynomial result{1}, base = *this;
    while (e) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e) base = base * base;
    }
    return result;
  }

  /// p(t^k).
  IntPolynomial substitute_power(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<BigInt> r((c_.size() - 1) * k + 1);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
    return IntPolynomial(std::move(r));
  }

  BigInt evaluate(const BigInt& x) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  bool is_palindromic() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (c_[k] != c_[c_.size() - 1 - k]) return false;
    return true;
  }

  bool is_nonnegative() const {
    return std::all_of(c_.begin(), c_.end(), [](const BigInt& x) { return x >= 0; });
  }

  /// Human-readable form, lowest degree first: "1 + t^2 + 4t^3".
  std::string to_string(const std::string& var = "t") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const BigInt& x = c_[k];
      if (x == 0) continue;
      const BigInt mag = x < 0 ? BigInt(-x) : x;
      if (first)
        os << (x < 0 ? "-" : "");
      else
        os << (x < 0 ? " - " : " + ");
      first = false;
      if (k == 0 || mag != 1) os << mag;
      if (k >= 1) os << var;
      if (k >= 2) os << '^' << k;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<BigInt> c_;
};

/// Raised when a claimed exact quotient leaves a remainder.
class InexactDivision : public Error {
 public:
  InexactDivision(IntPolynomial quotient, IntPolynomial remainder)
      : Error("inexact polynomial division, remainder " + remainder.to_string()),
        quotient_(std::move(quotient)),
        remainder_(std::move(remainder)) {}

  const IntPolynomial& quotient() const { return quotient_; }
  const IntPolynomial& remainder() const { return remainder_; }

 private:
  IntPolynomial quotient_;
  IntPolynomial remainder_;
};

/// a / b over Z[t]; throws InexactDivision unless b divides a exactly.
inline IntPolynomial exact_divide(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw Error("division by the zero polynomial");
  if (a.degree() < b.degree()) {
    if (a.is_zero()) return {};
    throw InexactDivision({}, a);
  }
  std::vector<BigInt> rem = a.coefficients();
  const auto db = static_cast<std::size_t>(b.degree());
  std::vector<BigInt> quot(rem.size() - db);
  const BigInt lead = b.leading();
  for (std::size_t k = quot.size(); k-- > 0;) {
    const BigInt& top = rem[k + db];
    if (top == 0) continue;
    if (top % lead != 0) throw InexactDivision(IntPolynomial(quot), IntPolynomial(rem));
    const BigInt q = top / lead;
    quot[k] = q;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q * b.coeff(j);
  }
  IntPolynomial r(std::move(rem));
  if (!r.is_zero()) throw InexactDivision(IntPolynomial(quot), r);
  return IntPolynomial(std::move(quot));
}

/// Power series over Q truncated after t^N.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order) : c_(order + 1) {}

  TruncatedSeries(const IntPolynomial& p, std::size_t order) : c_(order + 1) {
    for (std::size_t k = 0; k <= order; ++k) c_[k] = Rational(p.coeff(k));
  }

  static TruncatedSeries one(std::size_t order) {
    TruncatedSeries s(order);
    s.c_[0] = 1;
    return s;
  }

  std::size_t order() const { return c_.size() - 1; }
  const Rational& operator[](std::size_t k) const { return c_[k]; }
  Rational& operator[](std::size_t k) { return c_[k]; }
  const std::vector<Rational>& coefficients() const { return c_; }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k <= r.order(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
  }

  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(std::min(a.order(), b.order()));
    for (std::size_t k = 0; k <= r.order(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(std::min(a.order(), b.order()));
    for (std::size_t i = 0; i <= r.order(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; i + j <= r.order(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

  /// Multiplicative inverse; the constant term must be nonzero.
  TruncatedSeries inverse() const {
    if (c_[0] == 0) throw Error("series with zero constant term is not invertible");
    TruncatedSeries r(order());
    r.c_[0] = Rational(1) / c_[0];
    for (std::size_t k = 1; k <= order(); ++k) {
      Rational acc = 0;
      for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
      r.c_[k] = -acc * r.c_[0];
    }
    return r;
  }

  friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b.inverse(); }

  /// exp of a series with zero constant term, via k f_k = sum_j j h_j f_{k-j}.
  TruncatedSeries exp() const {
    if (c_[0] != 0) throw Error("exp requires a zero constant term");
    TruncatedSeries f(order());
    f.c_[0] = 1;
    for (std::size_t k = 1; k <= order(); ++k) {
      Rational acc = 0;
      for (std::size_t j = 1; j <= k; ++j) acc += Rational(static_cast<long long>(j)) * c_[j] * f.c_[k - j];
      f.c_[k] = acc / static_cast<long long>(k);
    }
    return f;
  }

  /// Index of the first differing coefficient, or -1 if equal up to the common order.
  friend long first_mismatch(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    for (std::size_t k = 0; k <= n; ++k)
      if (a.c_[k] != b.c_[k]) return static_cast<long>(k);
    return -1;
  }

  bool is_integral() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return denominator(x) == 1; });
  }

 private:
  std::vector<Rational> c_;
};

// ---------------------------------------------------------------------------
// Moduli of rank-2 bundles with fixed odd determinant

inline IntPolynomial one_plus_t_pow(std::size_t k, unsigned e) {
  return (IntPolynomial{1} + IntPolynomial::monomial(k)).pow(e);
}

/// (1 - t^2)(1 - t^4)
inline IntPolynomial rank2_denominator() { return IntPolynomial{1, 0, -1} * IntPolynomial{1, 0, 0, 0, -1}; }

/// Poincare polynomial of the fixed-determinant moduli space for genus g >= 2:
/// ((1+t^3)^{2g} - t^{2g}(1+t)^{2g}) / ((1-t^2)(1-t^4)), divided exactly.
inline IntPolynomial moduli_poincare(unsigned g) {
  if (g < 2) throw Error("moduli_poincare requires genus >= 2");
  const IntPolynomial numerator =
      one_plus_t_pow(3, 2 * g) - IntPolynomial::monomial(2 * g) * one_plus_t_pow(1, 2 * g);
  return exact_divide(numerator, rank2_denominator());
}

/// t^{2g}(1+t)^{2g} / ((1-t^2)(1-t^4)): the higher critical points.
inline TruncatedSeries higher_critical_series(unsigned g, std::size_t order) {
  const IntPolynomial num = IntPolynomial::monomial(2 * g) * one_plus_t_pow(1, 2 * g);
  return TruncatedSeries(num, order) / TruncatedSeries(rank2_denominator(), order);
}

/// (1+t^3)^{2g} / ((1-t^2)(1-t^4)): the total space with the determinant fixed.
inline TruncatedSeries total_space_series(unsigned g, std::size_t order) {
  return TruncatedSeries(one_plus_t_pow(3, 2 * g), order) / TruncatedSeries(rank2_denominator(), order);
}

/// Two printed forms of the classifying-space series for U(n) gauge groups.
enum class BgDenominator {
  /// (1 - t^{2n}) prod_{k<n} (1 - t^{2k})^2
  Squared,
  /// (1 - t^{2n}) prod_{k<n} (1 - t^{2k})
  Single,
};

/// prod_{i=1}^n (1 + t^{2i-1})^{2g} / denominator, truncated after t^N.
inline TruncatedSeries bg_poincare_series(unsigned n, unsigned g, std::size_t order,
                                          BgDenominator form = BgDenominator::Squared) {
  if (n < 1) throw Error("rank must be >= 1");
  IntPolynomial num{1}, den = IntPolynomial{1} - IntPolynomial::monomial(2 * n);
  for (unsigned i = 1; i <= n; ++i) num = num * one_plus_t_pow(2 * i - 1, 2 * g);
  for (unsigned k = 1; k < n; ++k) {
    const IntPolynomial f = IntPolynomial{1} - IntPolynomial::monomial(2 * k);
    den = den * (form == BgDenominator::Squared ? f * f : f);
  }
  return TruncatedSeries(num, order) / TruncatedSeries(den, order);
}

struct IdentityCheck {
  bool holds = false;
  /// First order at which the two sides differ; -1 when they agree.
  long first_mismatch = -1;
};

/// minimum + higher critical points = total space, to order N.
inline IdentityCheck morse_decomposition_check(const IntPolynomial& minimum, unsigned g, std::size_t order) {
  const TruncatedSeries lhs = TruncatedSeries(minimum, order) + higher_critical_series(g, order);
  const long k = first_mismatch(lhs, total_space_series(g, order));
  return {k < 0, k};
}

inline IdentityCheck morse_decomposition_check(unsigned g, std::size_t order) {
  return morse_decomposition_check(moduli_poincare(g), g, order);
}

/// Rank-2 gauge series factors as the rank-1 series times the fixed-determinant total space.
///
/// Holds for the squared denominator; the single-factor form fails at order 2.
inline IdentityCheck bg_rank2_factorization_check(unsigned g, std::size_t order, BgDenominator form) {
  const TruncatedSeries lhs = bg_poincare_series(2, g, order, form);
  const TruncatedSeries rhs = bg_poincare_series(1, g, order, form) * total_space_series(g, order);
  const long k = first_mismatch(lhs, rhs);
  return {k < 0, k};
}

// ---------------------------------------------------------------------------
// Point counts over finite fields

namespace detail {
inline void require_field(const BigInt& q) {
  if (q < 2) throw InvalidField("field size must be >= 2");
}
}  // namespace detail

/// Number of points of P^{n-1} over F_q: 1 + q + ... + q^{n-1}.
inline BigInt projective_count(unsigned n, const BigInt& q) {
  detail::require_field(q);
  if (n < 1) throw Error("projective_count requires n >= 1");
  BigInt sum = 0, power = 1;
  for (unsigned k = 0; k < n; ++k) {
    sum += power;
    power *= q;
  }
  return sum;
}

/// Number of full flags in F_q^n: prod_{k=1}^n (q^k - 1)/(q - 1).
inline BigInt flag_count(unsigned n, const BigInt& q) {
  detail::require_field(q);
  if (n < 1) throw Error("flag_count requires n >= 1");
  BigInt prod = 1;
  for (unsigned k = 1; k <= n; ++k) prod *= projective_count(k, q);
  return prod;
}

/// 1 + q + ... + q^{n-1} as a polynomial in q.
inline IntPolynomial projective_count_polynomial(unsigned n) {
  return IntPolynomial(std::vector<BigInt>(n, BigInt(1)));
}

inline IntPolynomial flag_count_polynomial(unsigned n) {
  IntPolynomial p{1};
  for (unsigned k = 1; k <= n; ++k) p = p * projective_count_polynomial(k);
  return p;
}

/// Poincare polynomial of the full flag manifold U(n)/T^n: prod_k (1 - t^{2k}) / (1 - t^2).
inline IntPolynomial flag_manifold_poincare(unsigned n) {
  IntPolynomial p{1};
  const IntPolynomial base = IntPolynomial{1} - IntPolynomial::monomial(2);
  for (unsigned k = 1; k <= n; ++k) p = p * exact_divide(IntPolynomial{1} - IntPolynomial::monomial(2 * k), base);
  return p;
}

/// Z(t) = exp(sum_{m>=1} N_m t^m / m), with counts[m-1] = N_{q^m}.
inline TruncatedSeries zeta_from_counts(std::span<const BigInt> counts, std::size_t order) {
  if (counts.size() < order) throw Error("zeta_from_counts needs a count for every m <= order");
  TruncatedSeries h(order);
  for (std::size_t m = 1; m <= order; ++m) h[m] = Rational(counts[m - 1], BigInt(static_cast<long long>(m)));
  return h.exp();
}

/// 1 / ((1 - t)(1 - q t))
inline TruncatedSeries p1_zeta_closed_form(const BigInt& q, std::size_t order) {
  return TruncatedSeries(IntPolynomial{1}, order) /
         TruncatedSeries(IntPolynomial{1, -1} * IntPolynomial(std::vector<BigInt>{1, -q}), order);
}

/// Exponentiates the counts 1 + q^m of P^1 and compares with 1/((1-t)(1-qt)).
inline bool verify_p1_zeta(const BigInt& q, std::size_t order) {
  detail::require_field(q);
  std::vector<BigInt> counts;
  BigInt qm = 1;
  for (std::size_t m = 1; m <= order; ++m) {
    qm *= q;
    counts.push_back(1 + qm);
  }
  return zeta_from_counts(counts, order) == p1_zeta_closed_form(q, order);
}

/// Curve counts from Frobenius eigenvalue pairs (w, q/w), each given by its
/// integer trace a = w + q/w: N_{q^m} = 1 + q^m - sum_j (w_j^m + (q/w_j)^m).
inline std::vector<BigInt> curve_counts(const BigInt& q, std::span<const BigInt> traces, std::size_t max_m) {
  detail::require_field(q);
  std::vector<BigInt> counts(max_m);
  BigInt qm = 1;
  for (std::size_t m = 1; m <= max_m; ++m) {
    qm *= q;
    counts[m - 1] = 1 + qm;
  }
  for (const BigInt& a : traces) {
    // power sums s_m = w^m + (q/w)^m satisfy s_m = a s_{m-1} - q s_{m-2}
    BigInt prev = 2, cur = a;
    for (std::size_t m = 1; m <= max_m; ++m) {
      counts[m - 1] -= cur;
      const BigInt next = a * cur - q * prev;
      prev = cur;
      cur = next;
    }
  }
  return counts;
}

/// prod_j (1 - a_j t + q t^2) / ((1 - t)(1 - q t)).
inline TruncatedSeries curve_zeta(const BigInt& q, std::span<const BigInt> traces, std::size_t order) {
  IntPolynomial num{1};
  for (const BigInt& a : traces) num = num * IntPolynomial(std::vector<BigInt>{1, -a, q});
  return TruncatedSeries(num, order) * p1_zeta_closed_form(q, order);
}

/// q^{(n^2-1)(g-1)} zeta_X(2) ... zeta_X(n) for a genus-g curve with the given
/// Frobenius traces, where zeta_X(s) = prod_j (1 - a_j q^{-s} + q^{1-2s}) / ((1 - q^{-s})(1 - q^{1-s})).
inline Rational tamagawa_inverse_measure(const BigInt& q, unsigned n, std::span<const BigInt> traces) {
  detail::require_field(q);
  const unsigned g = static_cast<unsigned>(traces.size());
  auto qpow = [&](long e) {
    Rational r = 1;
    const Rational base = e >= 0 ? Rational(q) : Rational(BigInt(1), q);
    for (long k = 0; k < std::abs(e); ++k) r *= base;
    return r;
  };
  Rational result = qpow(static_cast<long>(n * n - 1) * (static_cast<long>(g) - 1));
  for (unsigned s = 2; s <= n; ++s) {
    Rational z = 1;
    for (const BigInt& a : traces) z *= 1 - Rational(a) * qpow(-static_cast<long>(s)) + qpow(1 - 2 * static_cast<long>(s));
    z /= (1 - qpow(-static_cast<long>(s))) * (1 - qpow(1 - static_cast<long>(s)));
    result *= z;
  }
  return result;
}

}  // namespace pointdet::moduli
