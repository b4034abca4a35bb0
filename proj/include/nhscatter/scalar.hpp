#pragma once

#include <complex>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace nhs {

// 50 significant decimal digits, expression templates off so that `auto`
// deduces values rather than proxies.
using Extended = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;
using ExtendedComplex = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<
        boost::multiprecision::cpp_bin_float<50>>,
    boost::multiprecision::et_off>;

template <typename Real>
struct complex_of {
  using type = std::complex<Real>;
};

template <>
struct complex_of<Extended> {
  using type = ExtendedComplex;
};

template <typename Real>
using Complex = typename complex_of<Real>::type;

template <typename Real>
using Matrix2c = Eigen::Matrix<Complex<Real>, 2, 2>;

template <typename Real>
inline Real machine_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

template <typename Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

enum class PrecisionMode { standard, extended };

}  // namespace nhs
