#include "mrgp/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrgp/normal.hpp"

namespace mrgp {

namespace {

void check_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("cholesky: matrix is not square");
  if (a.rows() == 0) throw ValidationError("cholesky: empty matrix");
  const double tol = 1e-10 * std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol)
        throw ValidationError("cholesky: matrix is not symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
}

}  // namespace

// Row-oriented Crout: column j of L needs rows i and j of the already
// computed part, both contiguous. Rows below the pivot are independent.
std::size_t cholesky_in_place(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    auto lj = a.row(j).first(j);
    const double d = a(j, j) - dot(lj, lj);
    if (!(d > 0.0) || !std::isfinite(d)) return j + 1;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    const auto first = static_cast<std::ptrdiff_t>(j + 1);
    const auto last = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (last - first > 64)
    for (std::ptrdiff_t ii = first; ii < last; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      a(i, j) = (a(i, j) - dot(a.row(i).first(j), lj)) / ljj;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return 0;
}

CholeskyFactor cholesky(const Matrix& a, double jitter) {
  check_symmetric(a);
  const std::size_t n = a.rows();
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
  const double base = 1e-10 * trace / static_cast<double>(n);
  const double cap = 1e-2 * trace / static_cast<double>(n);

  CholeskyFactor f;
  double current = std::max(jitter, 0.0);
  for (;;) {
    f.lower = a;
    if (current > 0.0)
      for (std::size_t i = 0; i < n; ++i) f.lower(i, i) += current;
    const std::size_t minor = cholesky_in_place(f.lower);
    if (minor == 0) {
      f.jitter = current;
      return f;
    }
    const double next = std::max(current * 10.0, base);
    if (!(next > current) || next > cap) {
      throw NumericError("cholesky: not positive definite; leading minor of order " + std::to_string(minor) +
                         " failed with jitter " + std::to_string(current));
    }
    current = next;
    ++f.retries;
  }
}

void forward_substitute(const Matrix& lower, std::span<double> b) {
  const std::size_t n = lower.rows();
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = (b[i] - dot(lower.row(i).first(i), b.first(i))) / lower(i, i);
  }
}

void back_substitute(const Matrix& lower, std::span<double> y) {
  const std::size_t n = lower.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * y[k];
    y[ii] = s / lower(ii, ii);
  }
}

Vector chol_solve(const CholeskyFactor& f, std::span<const double> b) {
  if (b.size() != f.dim()) throw ValidationError("chol_solve: right-hand side has wrong length");
  Vector x(b.begin(), b.end());
  forward_substitute(f.lower, x);
  back_substitute(f.lower, x);
  return x;
}

Matrix chol_solve(const CholeskyFactor& f, const Matrix& b) {
  if (b.rows() != f.dim()) throw ValidationError("chol_solve: right-hand side has wrong row count");
  Matrix xt = transpose(b);
  const auto m = static_cast<std::ptrdiff_t>(xt.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < m; ++c) {
    auto col = xt.row(static_cast<std::size_t>(c));
    forward_substitute(f.lower, col);
    back_substitute(f.lower, col);
  }
  return transpose(xt);
}

Matrix forward_substitute_rows(const Matrix& lower, const Matrix& b) {
  if (b.cols() != lower.rows()) throw ValidationError("forward_substitute_rows: dimension mismatch");
  Matrix v = b;
  const auto m = static_cast<std::ptrdiff_t>(v.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < m; ++r) forward_substitute(lower, v.row(static_cast<std::size_t>(r)));
  return v;
}

Matrix chol_inverse(const CholeskyFactor& f) {
  // Row j of u is L^{-1} e_j, so u = L^{-T} and A^{-1} = u u^T.
  const Matrix u = forward_substitute_rows(f.lower, Matrix::identity(f.dim()));
  const std::size_t n = f.dim();
  Matrix inv(n, n);
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j <= i; ++j) inv(i, j) = dot(u.row(i), u.row(j));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) inv(i, j) = inv(j, i);
  return inv;
}

double chol_logdet(const CholeskyFactor& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) s += std::log(f.lower(i, i));
  return 2.0 * s;
}

double gaussian_logpdf(std::span<const double> y, std::span<const double> mean, const CholeskyFactor& cov) {
  const std::size_t n = cov.dim();
  if (y.size() != n || mean.size() != n) throw ValidationError("gaussian_logpdf: shape mismatch");
  Vector r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - mean[i];
  forward_substitute(cov.lower, r);
  return -0.5 * dot(r, r) - 0.5 * chol_logdet(cov) - 0.5 * static_cast<double>(n) * kLog2Pi;
}

}  // namespace mrgp
