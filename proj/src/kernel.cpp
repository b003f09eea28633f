#include "mrgp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace mrgp {

double kernel_eval(std::span<const double> xi, std::span<const double> xj, const Hyperparameters& hp) {
  if (xi.size() != xj.size()) throw ValidationError("kernel_eval: dimension mismatch");
  double d2 = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double d = xi[k] - xj[k];
    d2 += d * d;
  }
  return hp.s2() * std::exp(-0.5 * d2 / (hp.l() * hp.l()));
}

Matrix squared_distances(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ValidationError("squared_distances: column counts differ");
  Vector na(a.rows());
  Vector nb(b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) na[i] = dot(a.row(i), a.row(i));
  for (std::size_t j = 0; j < b.rows(); ++j) nb[j] = dot(b.row(j), b.row(j));

  Matrix d2(a.rows(), b.rows());
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto ai = a.row(i);
    auto out = d2.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      out[j] = std::max(0.0, na[i] + nb[j] - 2.0 * dot(ai, b.row(j)));
    }
  }
  return d2;
}

Matrix kernel_from_distances(const Matrix& sq_dist, const Hyperparameters& hp) {
  Matrix k(sq_dist.rows(), sq_dist.cols());
  const double s2 = hp.s2();
  const double scale = -0.5 / (hp.l() * hp.l());
  const double* src = sq_dist.data();
  double* dst = k.data();
  const auto total = static_cast<std::ptrdiff_t>(sq_dist.rows() * sq_dist.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < total; ++t) dst[t] = s2 * std::exp(scale * src[t]);
  return k;
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const Hyperparameters& hp) {
  return kernel_from_distances(squared_distances(a, b), hp);
}

}  // namespace mrgp
