#include "mrgp/reference.hpp"

#include <cmath>
#include <string>

namespace mrgp::reference {

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const Hyperparameters& hp) {
  if (a.cols() != b.cols()) throw ValidationError("reference::kernel_matrix: column counts differ");
  const double s2 = hp.s2();
  const double l2 = hp.l() * hp.l();
  Matrix k(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) {
        const double d = a(i, c) - b(j, c);
        d2 += d * d;
      }
      k(i, j) = s2 * std::exp(-d2 / (2.0 * l2));
    }
  }
  return k;
}

Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0)) throw NumericError("reference::cholesky: leading minor " + std::to_string(i + 1));
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

Matrix chol_solve(const Matrix& lower, const Matrix& b) {
  const std::size_t n = lower.rows();
  Matrix x = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * x(k, c);
      x(i, c) = s / lower(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= lower(k, i) * x(k, c);
      x(i, c) = s / lower(i, i);
    }
  }
  return x;
}

}  // namespace mrgp::reference
