#pragma once

#include <cmath>
#include <complex>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace pointdet {

/// Software IEEE binary128, used for the extended-precision rung.
using quad = boost::multiprecision::cpp_bin_float_quad;

enum class Precision { Double, Extended };

template <class Real>
struct scalar_traits {
  using complex = std::complex<Real>;
};

template <>
struct scalar_traits<quad> {
  using complex = boost::multiprecision::cpp_complex_quad;
};

template <class Real>
using complex_t = typename scalar_traits<Real>::complex;

template <class Real>
Real squared_modulus(const complex_t<Real>& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

inline std::complex<double> to_double(const std::complex<double>& z) { return z; }

inline std::complex<double> to_double(const boost::multiprecision::cpp_complex_quad& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline double to_double(double x) { return x; }
inline double to_double(const quad& x) { return static_cast<double>(x); }

}  // namespace pointdet
