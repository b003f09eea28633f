#include "mrgp/whitening.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace mrgp {

Matrix covariance(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  Vector mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) mean[c] += x(i, c);
  for (double& m : mean) m /= static_cast<double>(n);
  Matrix cov(d, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b <= a; ++b) cov(a, b) += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      cov(a, b) /= static_cast<double>(n);
      cov(b, a) = cov(a, b);
    }
  return cov;
}

WhiteningTransform fit_whitening(const Matrix& x, double eps) {
  if (x.rows() < 2) throw ValidationError("fit_whitening: need at least 2 rows, got " + std::to_string(x.rows()));
  const std::size_t n = x.rows(), d = x.cols();
  WhiteningTransform t;
  t.eps = eps;
  t.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) t.mean[c] += x(i, c);
  for (double& m : t.mean) m /= static_cast<double>(n);

  const Matrix cov = covariance(x);
  Eigen::MatrixXd c(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cov(a, b);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success) throw NumericError("fit_whitening: eigendecomposition failed");
  const Eigen::VectorXd& evals = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = es.eigenvectors();
  const double largest = evals(static_cast<Eigen::Index>(d) - 1);
  if (!(largest > 0.0)) throw ValidationError("fit_whitening: features have zero variance");

  std::vector<Vector> rows;
  for (auto k = static_cast<Eigen::Index>(d) - 1; k >= 0; --k) {
    const double lambda = evals(k);
    if (lambda <= eps * largest) {
      ++t.dropped;
      continue;
    }
    // Sign fixed so the largest-magnitude component is positive.
    Eigen::Index arg = 0;
    evecs.col(k).cwiseAbs().maxCoeff(&arg);
    const double sign = evecs(arg, k) < 0.0 ? -1.0 : 1.0;
    Vector row(d);
    const double scale = sign / std::sqrt(lambda);
    for (std::size_t c2 = 0; c2 < d; ++c2) row[c2] = evecs(static_cast<Eigen::Index>(c2), k) * scale;
    rows.push_back(std::move(row));
  }
  t.basis = Matrix::from_rows(rows);
  return t;
}

Matrix apply_whitening(const WhiteningTransform& t, const Matrix& x) {
  if (x.cols() != t.input_dim())
    throw ValidationError("apply_whitening: expected " + std::to_string(t.input_dim()) + " columns, got " +
                          std::to_string(x.cols()));
  Matrix out(x.rows(), t.output_dim());
  Vector centered(t.input_dim());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < t.input_dim(); ++c) centered[c] = x(i, c) - t.mean[c];
    for (std::size_t k = 0; k < t.output_dim(); ++k) out(i, k) = dot(t.basis.row(k), centered);
  }
  return out;
}

}  // namespace mrgp
