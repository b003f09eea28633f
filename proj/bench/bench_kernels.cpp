// Serial reference kernels against the OpenMP implementations.
//
//   bench_kernels [n ...]
//
// Prints one row per (operation, n) with the best-of-5 wall time of each
// path, the speedup, and the largest elementwise disagreement.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "mrgp/cholesky.hpp"
#include "mrgp/kernel.hpp"
#include "mrgp/random.hpp"
#include "mrgp/reference.hpp"

using namespace mrgp;

namespace {

constexpr int kRepeats = 5;

double best_seconds(const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < kRepeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

double max_gap(const Matrix& a, const Matrix& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) g = std::max(g, std::abs(a.values()[i] - b.values()[i]));
  return g;
}

Matrix random_inputs(Rng& rng, std::size_t n, std::size_t d) {
  Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.uniform(-2.0, 2.0);
  return m;
}

void row(const char* op, std::size_t n, double serial, double parallel, double gap) {
  std::printf("%-14s %6zu %12.6f %12.6f %8.2f %10.2e\n", op, n, serial, parallel, serial / parallel, gap);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> sizes;
  for (int i = 1; i < argc; ++i) sizes.push_back(static_cast<std::size_t>(std::strtoul(argv[i], nullptr, 10)));
  if (sizes.empty()) sizes = {200, 500, 1000};

  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%-14s %6s %12s %12s %8s %10s\n", "op", "n", "serial_s", "openmp_s", "speedup", "max_gap");

  Rng rng(7);
  const Hyperparameters hp = Hyperparameters::from_natural(1.3, 0.9, 0.4);
  for (std::size_t n : sizes) {
    const Matrix x = random_inputs(rng, n, 4);
    Matrix ks, kp;
    const double ts = best_seconds([&] { ks = reference::kernel_matrix(x, x, hp); });
    const double tp = best_seconds([&] { kp = kernel_matrix(x, x, hp); });
    row("kernel_matrix", n, ts, tp, max_gap(ks, kp));

    Matrix a = kp;
    for (std::size_t i = 0; i < n; ++i) a(i, i) += hp.sigma2();
    Matrix ls;
    CholeskyFactor lp;
    const double cs = best_seconds([&] { ls = reference::cholesky(a); });
    const double cp = best_seconds([&] { lp = cholesky(a); });
    row("cholesky", n, cs, cp, max_gap(ls, lp.lower));

    const Matrix b = random_inputs(rng, n, 64);
    Matrix ss, sp;
    const double ss_t = best_seconds([&] { ss = reference::chol_solve(ls, b); });
    const double sp_t = best_seconds([&] { sp = chol_solve(lp, b); });
    row("chol_solve", n, ss_t, sp_t, max_gap(ss, sp));
  }
  return 0;
}
