#pragma once

#include <cstddef>
#include <span>

#include "mrgp/matrix.hpp"

namespace mrgp {

/// Lower-triangular L with L L^T = A + jitter I.
struct CholeskyFactor {
  Matrix lower;
  /// Diagonal jitter that was actually added; 0 when A factored as given.
  double jitter = 0.0;
  /// Number of failed attempts before success.
  int retries = 0;

  std::size_t dim() const { return lower.rows(); }
};

/// Factors A + jitter I. On failure the jitter is escalated x10, starting no
/// lower than 1e-10 trace(A)/n, until 1e-2 trace(A)/n is exceeded.
/// Throws NumericError naming the leading minor that failed on the last try.
CholeskyFactor cholesky(const Matrix& a, double jitter = 0.0);

/// Single factorization attempt without escalation. Returns the 1-based order
/// of the first non-positive leading minor, or 0 on success.
std::size_t cholesky_in_place(Matrix& a);

/// Solves L y = b in place (b is one right-hand side).
void forward_substitute(const Matrix& lower, std::span<double> b);
/// Solves L^T x = y in place.
void back_substitute(const Matrix& lower, std::span<double> y);

/// A^{-1} b.
Vector chol_solve(const CholeskyFactor& f, std::span<const double> b);

/// A^{-1} B, column by column. OpenMP-parallel over columns.
Matrix chol_solve(const CholeskyFactor& f, const Matrix& b);

/// Solves L V^T = B^T for every row of B: row i of the result is L^{-1} b_i.
/// OpenMP-parallel over rows.
Matrix forward_substitute_rows(const Matrix& lower, const Matrix& b);

/// A^{-1} from its factor.
Matrix chol_inverse(const CholeskyFactor& f);

/// log det A = 2 sum log L_ii.
double chol_logdet(const CholeskyFactor& f);

/// log N(y; mean, A) with A given by its factor.
double gaussian_logpdf(std::span<const double> y, std::span<const double> mean, const CholeskyFactor& cov);

}  // namespace mrgp
