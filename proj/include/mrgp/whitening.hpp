#pragma once

#include <cstddef>

#include "mrgp/matrix.hpp"

namespace mrgp {

/// PCA whitening fit on training features: y = (x - mean) basis^T.
struct WhiteningTransform {
  Vector mean;    // D
  Matrix basis;   // K x D, rows are principal directions over sqrt(eigenvalue)
  double eps = 1e-8;
  /// Directions whose eigenvalue was at most eps * largest eigenvalue.
  std::size_t dropped = 0;

  std::size_t input_dim() const { return mean.size(); }
  std::size_t output_dim() const { return basis.rows(); }
};

WhiteningTransform fit_whitening(const Matrix& x, double eps = 1e-8);
Matrix apply_whitening(const WhiteningTransform& t, const Matrix& x);

/// Population covariance (divides by N).
Matrix covariance(const Matrix& x);

}  // namespace mrgp
