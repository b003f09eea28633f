#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrgp/error.hpp"
#include "mrgp/metrics.hpp"
#include "mrgp/normal.hpp"
#include "mrgp/random.hpp"

using namespace mrgp;
using doctest::Approx;

namespace {

constexpr ScoreRange kRange{0, 10};

double total(const DiscreteDistribution& d) { return std::accumulate(d.probs.begin(), d.probs.end(), 0.0); }

}  // namespace

TEST_CASE("round_and_clamp") {
  CHECK(round_and_clamp(7.5, kRange) == 8);
  CHECK(round_and_clamp(-0.3, kRange) == 0);
  CHECK(round_and_clamp(10.49, kRange) == 10);
  CHECK(round_and_clamp(2.5, kRange) == 3);
  CHECK(round_and_clamp(-2.5, ScoreRange{-5, 5}) == -3);
  CHECK(round_and_clamp(42.0, kRange) == 10);
  CHECK_THROWS_AS(round_and_clamp(std::nan(""), kRange), ValidationError);
}

TEST_CASE("pcc") {
  const Vector a{1, 2, 3, 7, 4};
  Vector neg(a.size());
  std::transform(a.begin(), a.end(), neg.begin(), [](double v) { return -v; });
  CHECK(pcc(a, a) == Approx(1.0).epsilon(1e-15));
  CHECK(pcc(a, neg) == Approx(-1.0).epsilon(1e-15));
  CHECK(pcc(Vector{1, 2, 3}, Vector{1, 2, 4}) == Approx(0.9819805060619657).epsilon(1e-12));
  CHECK_THROWS_AS(pcc(Vector{1, 1, 1}, Vector{1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(pcc(Vector{1}, Vector{2}), ValidationError);
  CHECK_THROWS_AS(pcc(Vector{1, 2}, Vector{1, 2, 3}), ValidationError);
}

TEST_CASE("mse") {
  CHECK(mse(Vector{1, 2}, Vector{1, 2}) == 0.0);
  CHECK(mse(Vector{0, 0}, Vector{1, 3}) == 5.0);
  CHECK(mse(Vector{7, 7}, Vector{8, 10}) == 5.0);
  CHECK_THROWS_AS(mse(Vector{}, Vector{}), ValidationError);
}

TEST_CASE("reference_distribution") {
  const DiscreteDistribution d = reference_distribution(Vector{8, 8, 9, 9, 10}, kRange);
  CHECK(d[8] == Approx(0.4));
  CHECK(d[9] == Approx(0.4));
  CHECK(d[10] == Approx(0.2));
  CHECK(d[0] == 0.0);
  CHECK(total(d) == Approx(1.0).epsilon(1e-15));
  CHECK(reference_distribution(Vector{5}, kRange)[5] == 1.0);
  CHECK(reference_distribution(Vector{10, 9, 8, 9, 8}, kRange).probs == d.probs);
  CHECK_THROWS_AS(reference_distribution(Vector{}, kRange), ValidationError);
  CHECK_THROWS_AS(reference_distribution(Vector{11}, kRange), ValidationError);
  CHECK_THROWS_AS(reference_distribution(Vector{2.5}, kRange), ValidationError);
}

TEST_CASE("discretize_predictive") {
  CHECK(discretize_predictive(5, 1e-12, kRange)[5] == Approx(1.0).epsilon(1e-9));
  CHECK(discretize_predictive(5, 1, kRange)[5] == Approx(0.38292493709118025).epsilon(1e-9));
  for (double var : {0.01, 0.3, 1.0, 4.0, 30.0}) {
    const DiscreteDistribution d = discretize_predictive(5, var, kRange);
    for (int k = 1; k <= 5; ++k) CHECK(d[5 - k] == Approx(d[5 + k]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(discretize_predictive(5, 0, kRange), ValidationError);
  CHECK_THROWS_AS(discretize_predictive(5, -1, kRange), ValidationError);

  SUBCASE("normalized and nonnegative") {
    Rng rng(31);
    for (int t = 0; t < 500; ++t) {
      const DiscreteDistribution d = discretize_predictive(rng.uniform(-30, 40), std::exp(rng.uniform(-25, 6)), kRange);
      CHECK(std::abs(total(d) - 1.0) <= 1e-10);
      CHECK(*std::min_element(d.probs.begin(), d.probs.end()) >= 0.0);
    }
  }
  SUBCASE("shifting the mean shifts interior bins") {
    // Compare the ratios between interior bins, which renormalization keeps.
    const DiscreteDistribution a = discretize_predictive(4.3, 0.8, kRange);
    const DiscreteDistribution b = discretize_predictive(5.3, 0.8, kRange);
    for (int c = 2; c <= 6; ++c) CHECK(b[c + 1] / b[c + 2] == Approx(a[c] / a[c + 1]).epsilon(1e-10));
  }
}

TEST_CASE("kl_divergence") {
  const ScoreRange two{0, 1};
  CHECK(kl_divergence({two, {0.5, 0.5}}, {two, {0.25, 0.75}}) == Approx(0.14384103622589045).epsilon(1e-12));
  const DiscreteDistribution hyp = discretize_predictive(4.2, 2.0, kRange);
  CHECK(kl_divergence(hyp, hyp) == 0.0);
  CHECK(kl_divergence(reference_distribution(Vector{3}, kRange), hyp) == Approx(-std::log(hyp[3])).epsilon(1e-14));
  CHECK_THROWS_AS(kl_divergence({two, {1.0, 0.0}}, hyp), ValidationError);

  Rng rng(32);
  for (int t = 0; t < 500; ++t) {
    Vector ratings(1 + t % 7);
    for (double& r : ratings) r = std::floor(rng.uniform(0, 11));
    const DiscreteDistribution h = discretize_predictive(rng.uniform(-2, 12), std::exp(rng.uniform(-6, 3)), kRange);
    CHECK(kl_divergence(reference_distribution(ratings, kRange), h) >= 0.0);
  }
}

TEST_CASE("evaluate") {
  SUBCASE("hand-checked two items") {
    const EvalReport r = evaluate(Vector{5.4, 2.0}, Vector{1.0, 0.25}, {{5, 6, 6}, {1, 2, 2, 3}}, kRange);
    CHECK(r.predicted_scores == std::vector<int>{5, 2});
    CHECK(r.reference_scores == std::vector<int>{6, 2});
    REQUIRE(r.pcc.has_value());
    CHECK(*r.pcc == Approx(1.0));
    CHECK(r.mse == 0.5);
    CHECK(r.per_item_kl[0] == Approx(0.4582787048786203).epsilon(1e-9));
    CHECK(r.per_item_kl[1] == Approx(0.07591972593733609).epsilon(1e-9));
    CHECK(r.kl == Approx(0.2670992154079782).epsilon(1e-9));
  }
  SUBCASE("perfect predictor") {
    const EvalReport r = evaluate(Vector{3, 7, 9}, Vector{1e-12, 1e-12, 1e-12}, {{3, 3}, {7, 7, 7}, {9}}, kRange);
    CHECK(*r.pcc == Approx(1.0));
    CHECK(r.mse == 0.0);
    CHECK(r.kl <= 1e-9);
  }
  SUBCASE("prior predictor aggregates consistently") {
    const double var = 1.3 * 1.3 + 0.5 * 0.5;
    const std::vector<Vector> ratings{{8, 9, 9}, {10, 9}, {7, 8, 8, 9}};
    const EvalReport r = evaluate(Vector(3, 0.0), Vector(3, var), ratings, kRange);
    CHECK_FALSE(r.pcc.has_value());
    CHECK(r.mse == Approx((81.0 + 100.0 + 64.0) / 3.0));
    CHECK(r.mse == Approx(std::accumulate(r.per_item_sq_err.begin(), r.per_item_sq_err.end(), 0.0) / 3.0));
    CHECK(r.kl == Approx(std::accumulate(r.per_item_kl.begin(), r.per_item_kl.end(), 0.0) / 3.0));
    CHECK(r.kl > 10.0);
  }
  SUBCASE("predictive density overload and size checks") {
    PredictiveDensity pd;
    pd.mean = {5.4, 2.0};
    pd.var = {1.0, 0.25};
    CHECK(evaluate(pd, {{5, 6, 6}, {1, 2, 2, 3}}, kRange).kl == Approx(0.2670992154079782).epsilon(1e-9));
    CHECK_THROWS_AS(evaluate(pd, {{5}}, kRange), ValidationError);
  }
}
