#pragma once

// The normalized determinant
//
//   D = det P / prod_{i<j} (v_ij ^ v_ji),
//
// where row i of P holds the coefficients of
// p_i(Z0, Z1) = prod_{j != i} (V_ij Z0 - U_ij Z1) in the basis
// Z0^{n-1-k} Z1^k, k = 0..n-1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pointdet/configuration.hpp"
#include "pointdet/errors.hpp"
#include "pointdet/scalar.hpp"
#include "pointdet/spinor_geom.hpp"

namespace pointdet {

/// |v_ij ^ v_ji| below this (for unit lifts) means u_ij = u_ji.
inline constexpr double kDegenerateWedge = 1e-14;

/// Dense row-major square matrix of complex coefficients.
template <class Real = double>
struct CoefficientMatrix {
  std::size_t n = 0;
  std::vector<complex_t<Real>> entries;

  complex_t<Real>& operator()(std::size_t i, std::size_t k) { return entries[i * n + k]; }
  const complex_t<Real>& operator()(std::size_t i, std::size_t k) const { return entries[i * n + k]; }
};

struct DetResult {
  std::complex<double> D{1.0, 0.0};
  double absD = 1.0;
  double independence_margin = 1.0;
  Geometry geometry = Geometry::Euclidean;
  std::size_t n = 0;
  Precision precision = Precision::Double;
};

/// Coefficients of prod_j (V_j Z0 - U_j Z1) by repeated convolution with linear forms.
template <class Real>
std::vector<complex_t<Real>> polynomial_from_lifts(std::span<const Spinor<Real>> lifts) {
  using complex = complex_t<Real>;
  std::vector<complex> coeffs(lifts.size() + 1, complex(0));
  coeffs[0] = complex(1);
  std::size_t degree = 0;
  for (const Spinor<Real>& s : lifts) {
    ++degree;
    for (std::size_t k = degree; k > 0; --k) coeffs[k] = s.c1 * coeffs[k] - s.c0 * coeffs[k - 1];
    coeffs[0] = s.c1 * coeffs[0];
  }
  return coeffs;
}

template <class Real>
CoefficientMatrix<Real> coefficient_matrix(const DirectionTable<Real>& table) {
  const std::size_t n = table.size();
  CoefficientMatrix<Real> P{n, std::vector<complex_t<Real>>(n * n)};
  std::vector<Spinor<Real>> row_lifts;
  row_lifts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    row_lifts.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row_lifts.push_back(table.v(i, j));
    const auto coeffs = polynomial_from_lifts<Real>(row_lifts);
    std::copy(coeffs.begin(), coeffs.end(), P.entries.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  return P;
}

/// Determinant by LU factorization with partial pivoting.
template <class Real>
complex_t<Real> determinant(CoefficientMatrix<Real> A) {
  using std::abs;
  using complex = complex_t<Real>;
  const std::size_t n = A.n;
  complex det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    Real best = abs(A(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real mag = abs(A(r, col));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best == Real(0)) return complex(0);
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(A(pivot, k), A(col, k));
      det = -det;
    }
    const complex diag = A(col, col);
    det *= diag;
    for (std::size_t r = col + 1; r < n; ++r) {
      const complex f = A(r, col) / diag;
      if (f == complex(0)) continue;
      for (std::size_t k = col + 1; k < n; ++k) A(r, k) -= f * A(col, k);
    }
  }
  return det;
}

/// Smallest singular value of P after scaling each row to unit Euclidean norm.
///
/// Zero exactly when the rows (the polynomials) are linearly dependent.
template <class Real>
double independence_margin(const CoefficientMatrix<Real>& P) {
  const auto n = static_cast<Eigen::Index>(P.n);
  if (n == 0) return 1.0;
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      M(i, k) = to_double(P(static_cast<std::size_t>(i), static_cast<std::size_t>(k)));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = M.row(i).norm();
    if (r > 0.0) M.row(i) /= r;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(n - 1);
}

/// Product of v_ij ^ v_ji over i < j. Throws DegenerateDirection on a vanishing factor.
template <class Real>
complex_t<Real> wedge_denominator(const DirectionTable<Real>& table) {
  using std::abs;
  complex_t<Real> den(1);
  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const complex_t<Real> w = wedge(table.v(i, j), table.v(j, i));
      // Relative to the lift norms, so rescaled lifts see the same threshold as unit ones.
      const Real scale = spinor_norm(table.v(i, j)) * spinor_norm(table.v(j, i));
      if (!(abs(w) >= Real(kDegenerateWedge) * scale))
        throw DegenerateDirection("u_" + std::to_string(i) + "," + std::to_string(j) + " and u_" +
                                  std::to_string(j) + "," + std::to_string(i) + " coincide");
      den *= w;
    }
  }
  return den;
}

/// D as a complex number in the working precision of the table.
template <class Real>
complex_t<Real> normalized_determinant_value(const DirectionTable<Real>& table) {
  if (table.size() <= 1) return complex_t<Real>(1);
  const complex_t<Real> den = wedge_denominator(table);
  return determinant(coefficient_matrix(table)) / den;
}

template <class Real>
DetResult normalized_determinant(const DirectionTable<Real>& table, Geometry geometry = Geometry::Euclidean) {
  DetResult r;
  r.n = table.size();
  r.geometry = geometry;
  r.precision = std::is_same_v<Real, double> ? Precision::Double : Precision::Extended;
  if (r.n <= 1) return r;
  const complex_t<Real> den = wedge_denominator(table);
  const CoefficientMatrix<Real> P = coefficient_matrix(table);
  r.D = to_double(complex_t<Real>(determinant(P) / den));
  r.absD = std::abs(r.D);
  r.independence_margin = independence_margin(P);
  return r;
}

/// Full pipeline: configuration -> directions -> D.
inline DetResult evaluate(const Configuration& cfg, Precision precision = Precision::Double) {
  const Geometry g = geometry_of(cfg);
  if (precision == Precision::Extended) return normalized_determinant(directions<quad>(cfg), g);
  return normalized_determinant(directions<double>(cfg), g);
}

/// |D| only, skipping the SVD. Used on hot paths (search, sweeps).
inline double abs_determinant(const Configuration& cfg, Precision precision = Precision::Double) {
  if (precision == Precision::Extended)
    return to_double(quad(abs(normalized_determinant_value(directions<quad>(cfg)))));
  return std::abs(normalized_determinant_value(directions<double>(cfg)));
}

inline std::complex<double> determinant_of(const Configuration& cfg, Precision precision = Precision::Double) {
  if (precision == Precision::Extended) return to_double(normalized_determinant_value(directions<quad>(cfg)));
  return normalized_determinant_value(directions<double>(cfg));
}

/// Checks that collinear reference configurations give D = +1 for n = 2..max_n.
///
/// Guards the sign conventions of the monomial basis and the wedge ordering.
inline bool orientation_self_check(std::size_t max_n = 6, double tol = 1e-12) {
  for (std::size_t n = 2; n <= max_n; ++n) {
    EuclideanConfig cfg;
    for (std::size_t i = 0; i < n; ++i) cfg.points.push_back({0.0, 0.0, static_cast<double>(i * i + i)});
    const std::complex<double> D = determinant_of(Configuration{cfg});
    if (std::abs(D - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace pointdet
