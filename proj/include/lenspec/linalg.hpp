#pragma once

// Dense matrix helpers shared by the Möbius, linear-representation and JSR
// code. Everything is templated on the Eigen expression type so fixed-size
// 2x2 real and complex matrices take closed-form paths.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <type_traits>

#include "lenspec/errors.hpp"

namespace lenspec::linalg {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
using Matrix2d = Matrix2<double>;
using Matrix2cd = Matrix2<std::complex<double>>;
using MatrixXd = Eigen::MatrixXd;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename Derived>
double frobenius_sq(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseAbs2().sum();
}

// Largest singular value.
template <typename Derived>
double top_singular_value(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if constexpr (Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2) {
    const double f = frobenius_sq(a);
    const double det = std::abs(Scalar(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)));
    const double disc = std::max(0.0, f * f - 4.0 * det * det);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  } else {
    Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(a);
    return svd.singularValues()(0);
  }
}

// Largest and second largest singular values.
template <typename Derived>
std::pair<double, double> top_two_singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if constexpr (Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2) {
    const double s1 = top_singular_value(a);
    const double det = std::abs(Scalar(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)));
    return {s1, s1 > 0.0 ? det / s1 : 0.0};
  } else {
    Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() < 2) return {s(0), 0.0};
    return {s(0), s(1)};
  }
}

// Spectral radius (largest eigenvalue modulus).
template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if constexpr (Derived::RowsAtCompileTime == 2 && Derived::ColsAtCompileTime == 2) {
    using C = std::complex<double>;
    const C t = C(a(0, 0) + a(1, 1));
    const C d = C(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    const C s = std::sqrt(t * t - 4.0 * d);
    // Pick the root without cancellation; the other is d / that.
    const C big = (std::abs(t + s) >= std::abs(t - s)) ? (t + s) / 2.0 : (t - s) / 2.0;
    return std::abs(big);
  } else {
    if (a.rows() == 1) return std::abs(a(0, 0));
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = a;
    if constexpr (is_complex_v<Scalar>) {
      Eigen::ComplexEigenSolver<decltype(m)> es(m, false);
      if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
      return es.eigenvalues().cwiseAbs().maxCoeff();
    } else {
      Eigen::EigenSolver<decltype(m)> es(m, false);
      if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
  }
}

// Divides by |det|^{1/m} (for complex 2x2: by a square root of det, so the
// result lies in SL_2(C)).
template <typename Derived>
auto unit_determinant(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Plain = typename Derived::PlainObject;
  if (a.rows() != a.cols()) throw InputError("matrix must be square");
  const Scalar det = a.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det)))
    throw InputError("matrix is singular or non-finite; cannot normalise determinant");
  const double m = static_cast<double>(a.rows());
  if constexpr (is_complex_v<Scalar>) {
    if (a.rows() == 2) return Plain(a / std::sqrt(det));
    return Plain(a / std::pow(std::abs(det), 1.0 / m));
  } else {
    return Plain(a / std::pow(std::abs(det), 1.0 / m));
  }
}

// A matrix product kept as exp(log_scale) * unit, with unit renormalised so
// that long words never overflow.
template <typename MatrixT>
struct ScaledMatrix {
  MatrixT unit;
  double log_scale = 0.0;

  static ScaledMatrix identity(Eigen::Index n) {
    MatrixT id = MatrixT::Identity(n, n);
    return {id, 0.0};
  }

  void renormalize() {
    const double f = std::sqrt(frobenius_sq(unit));
    if (!std::isfinite(f) || f == 0.0) throw NumericError("matrix product overflow or underflow");
    if (f > 1e64 || f < 1e-64) {
      unit /= f;
      log_scale += std::log(f);
    }
  }

  ScaledMatrix& operator*=(const MatrixT& rhs) {
    unit = (unit * rhs).eval();
    renormalize();
    return *this;
  }

  friend ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b) {
    ScaledMatrix out{a.unit * b.unit, a.log_scale + b.log_scale};
    out.renormalize();
    return out;
  }

  double log_frobenius_sq() const { return std::log(frobenius_sq(unit)) + 2.0 * log_scale; }
  double log_top_singular_value() const { return std::log(top_singular_value(unit)) + log_scale; }
  double log_spectral_radius() const {
    const double r = spectral_radius(unit);
    return r > 0.0 ? std::log(r) + log_scale : -std::numeric_limits<double>::infinity();
  }
};

// acosh(exp(lx)) without forming exp(lx) when it would overflow.
inline double acosh_exp(double lx) {
  if (lx < 0.0) return 0.0;  // argument below 1 only through rounding
  if (lx < 300.0) return std::acosh(std::exp(lx));
  return lx + std::log(2.0);
}

}  // namespace lenspec::linalg
