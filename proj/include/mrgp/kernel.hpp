#pragma once

#include <span>

#include "mrgp/hyperparameters.hpp"
#include "mrgp/matrix.hpp"

namespace mrgp {

/// s^2 exp(-|xi - xj|^2 / (2 l^2)).
double kernel_eval(std::span<const double> xi, std::span<const double> xj, const Hyperparameters& hp);

/// Pairwise squared Euclidean distances between the rows of a and b, via
/// |a|^2 + |b|^2 - 2 a.b clamped at zero. OpenMP-parallel over rows of a.
Matrix squared_distances(const Matrix& a, const Matrix& b);

/// K(a, b) for the squared-exponential kernel.
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const Hyperparameters& hp);

/// Kernel values from precomputed squared distances.
Matrix kernel_from_distances(const Matrix& sq_dist, const Hyperparameters& hp);

}  // namespace mrgp
