#pragma once

// Serial textbook versions of the parallel kernels. Kept for testing the
// OpenMP paths and as the baseline in bench_kernels.

#include "mrgp/hyperparameters.hpp"
#include "mrgp/matrix.hpp"

namespace mrgp::reference {

/// Direct difference form, no expansion, no threading.
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const Hyperparameters& hp);

/// Column-oriented Cholesky-Banachiewicz. Throws NumericError if A is not
/// positive definite; no jitter.
Matrix cholesky(const Matrix& a);

/// A^{-1} B by one forward and one backward substitution per column.
Matrix chol_solve(const Matrix& lower, const Matrix& b);

}  // namespace mrgp::reference
