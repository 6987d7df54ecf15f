#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "msqrt/metrics.hpp"
#include "msqrt/problems.hpp"
#include "msqrt/solvers.hpp"
#include "msqrt/verify.hpp"

using namespace msqrt;
using namespace msqrt::testing;

namespace {

// Oracle route: ||log(X^{-1/2} Y X^{-1/2})||_2 via two eigendecompositions.
double thompson_via_log(const SymMatrix& x, const SymMatrix& y) {
  const EigDecomp dx = eig_sym(x);
  const std::size_t n = x.order();
  Matrix inv_root_t = dx.eigenvectors.transposed();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      inv_root_t(i, j) /= std::sqrt(dx.eigenvalues[i]);
  const Matrix inv_root = multiply(dx.eigenvectors, inv_root_t);
  const SymMatrix w = SymMatrix::from(multiply(multiply(inv_root, y.matrix()), inv_root));
  const EigDecomp dw = eig_sym(w);
  double worst = 0.0;
  for (double ev : dw.eigenvalues) worst = std::max(worst, std::fabs(std::log(ev)));
  return worst;
}

}  // namespace

TEST_CASE("thompson basics") {
  const SymMatrix i3 = SymMatrix::identity(3);
  CHECK(thompson(i3, i3) == doctest::Approx(0).epsilon(1e-14));
  CHECK(thompson(i3 * 2.0, i3) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  std::mt19937_64 rng(71);
  for (int t = 0; t < 25; ++t) {
    const SymMatrix x = random_spd(6, 2.0, rng());
    const SymMatrix y = random_spd(6, 2.0, rng());
    const double d = thompson(x, y);
    CHECK(d == doctest::Approx(thompson_via_log(x, y)).epsilon(1e-10));
    CHECK(d == doctest::Approx(thompson(y, x)).epsilon(1e-12));
  }
}

TEST_CASE("thompson is a metric on sampled triples") {
  std::mt19937_64 rng(72);
  for (int t = 0; t < 25; ++t) {
    const SymMatrix x = random_spd(5, 1.5, rng());
    const SymMatrix y = random_spd(5, 1.5, rng());
    const SymMatrix z = random_spd(5, 1.5, rng());
    CHECK(thompson(x, x) <= 1e-10);
    CHECK(thompson(x, y) <= thompson(x, z) + thompson(z, y) + 1e-10);
  }
}

TEST_CASE("s_divergence conventions") {
  const SymMatrix i1 = SymMatrix::identity(1);
  CHECK(s_divergence(i1, i1, SDivConvention::PaperLiteral) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));

  const SymMatrix x = random_spd(4, 1.0, 5);
  CHECK(s_divergence(x, x) == doctest::Approx(0).epsilon(1e-12));

  const SymMatrix xs = SymMatrix::diagonal({4});
  const SymMatrix ys = SymMatrix::diagonal({1});
  CHECK(s_divergence(xs, ys) ==
        doctest::Approx(std::log(2.5) - 0.5 * std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("objective_F") {
  CHECK(objective_F(SymMatrix::identity(3), SymMatrix::identity(3)) ==
        doctest::Approx(0).epsilon(1e-12));

  // grid search over diagonal candidates: minimum sits at the root diag(2,3)
  const SymMatrix a = SymMatrix::diagonal({4, 9});
  double best = std::numeric_limits<double>::infinity();
  double best_p = 0, best_q = 0;
  for (double p = 0.5; p <= 4.05; p += 0.25)
    for (double q = 0.5; q <= 6.05; q += 0.25) {
      const double v = objective_F(SymMatrix::diagonal({p, q}), a);
      if (v < best) {
        best = v;
        best_p = p;
        best_q = q;
      }
    }
  CHECK(best_p == doctest::Approx(2).epsilon(1e-12));
  CHECK(best_q == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("objective_F along sra iterates" * doctest::may_fail()) {
  // advisory: observed nonincreasing in practice, not a hard guarantee
  for (int t = 0; t < 5; ++t) {
    const SymMatrix a = random_spd(6, 1.5, 300 + t);
    SymMatrix x = initial_iterate(a, std::nullopt);
    double prev = objective_F(x, a);
    for (int k = 0; k < 30; ++k) {
      x = sra_step(a, x);
      const double v = objective_F(x, a);
      CHECK(v <= prev + 1e-10);
      prev = v;
    }
  }
}

TEST_CASE("contraction_bound") {
  const ContractionBound b1 = contraction_bound(SymMatrix::identity(2), 1.0);
  CHECK(b1.gamma == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(b1.alpha1 == doctest::Approx(2).epsilon(1e-12));
  CHECK(b1.alpha2 == doctest::Approx(2).epsilon(1e-12));

  // optimal mu balances the two arguments of the max
  const SymMatrix i2 = SymMatrix::identity(2);
  const double mu_opt = compute_mu(i2, MuPolicy::optimal_theorem());
  const ContractionBound b2 = contraction_bound(i2, mu_opt);
  CHECK(b2.alpha1 / (b2.alpha1 + 1.0 / mu_opt) ==
        doctest::Approx(b2.alpha2 / (b2.alpha2 + mu_opt * b2.kappa)).epsilon(1e-12));

  const ContractionBound b3 = contraction_bound(SymMatrix::diagonal({1, 4}), 1.0);
  CHECK(b3.gamma == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(b3.gamma < 1.0);
}

TEST_CASE("interval_bounds") {
  const IntervalBounds iv_i = interval_bounds(SymMatrix::identity(3));
  CHECK(fro_norm(iv_i.lower - SymMatrix::identity(3)) < 1e-14);
  CHECK(fro_norm(iv_i.upper - SymMatrix::identity(3)) < 1e-14);

  const IntervalBounds iv = interval_bounds(SymMatrix::diagonal({4, 9}));
  CHECK(iv.lower(0, 0) == doctest::Approx(8.0 / 5.0).epsilon(1e-13));
  CHECK(iv.lower(1, 1) == doctest::Approx(9.0 / 5.0).epsilon(1e-13));
  CHECK(iv.upper(0, 0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(iv.upper(1, 1) == doctest::Approx(5.0).epsilon(1e-14));

  std::mt19937_64 rng(81);
  for (int t = 0; t < 10; ++t) {
    const SymMatrix a = random_spd(8, 2.0, rng());
    const IntervalBounds b = interval_bounds(a);
    CHECK(eig_sym(b.upper - b.lower).min() >= -1e-12);
  }
}

TEST_CASE("sample_interval membership") {
  std::mt19937_64 rng(82);
  for (int t = 0; t < 100; ++t) {
    const SymMatrix a = random_spd(6, 2.5, rng());
    const IntervalBounds b = interval_bounds(a);
    const SymMatrix x = sample_interval(a, rng());
    const double tol = 1e-12 * std::max(1.0, two_norm(b.upper));
    CHECK(eig_sym(x - b.lower).min() >= -tol);
    CHECK(eig_sym(b.upper - x).min() >= -tol);
  }
}

TEST_CASE("perf_profile") {
  const std::vector<double> grid{1.0, 2.0, 4.0};

  const auto single = perf_profile({{3.0}, {5.0}}, {"only"}, grid);
  for (double rho : single[0].rho) CHECK(rho == doctest::Approx(1).epsilon(1e-14));

  const auto two = perf_profile({{1.0, 2.0}, {2.0, 1.0}}, {"a", "b"}, grid);
  for (const auto& c : two) {
    CHECK(c.rho[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.rho[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  const double inf = std::numeric_limits<double>::infinity();
  const auto fail = perf_profile({{1.0, inf}, {2.0, inf}}, {"ok", "bad"}, grid);
  for (double rho : fail[1].rho) CHECK(rho == 0.0);

  CHECK_THROWS_AS(perf_profile({}, {}, grid), std::invalid_argument);

  // curves nondecreasing in tau
  for (const auto& c : two)
    for (std::size_t i = 1; i < c.rho.size(); ++i) CHECK(c.rho[i] >= c.rho[i - 1]);
}

TEST_CASE("check_lemma_properties") {
  const SymMatrix i2 = SymMatrix::identity(2);
  const LemmaReport degenerate = check_lemma_properties(i2, i2, i2, i2);
  CHECK(degenerate.all_pass());
  for (const RelationCheck& r : degenerate.relations) {
    if (r.name == "spectral_radius_identity") {
      CHECK(r.lhs == doctest::Approx(1).epsilon(1e-12));  // lambda_max(I) routes
    } else {
      CHECK(std::fabs(r.lhs) < 1e-12);  // all distances vanish
    }
  }

  // X = 2I, Y = I, A = I: lhs = log(3/2), bound = (2/3) log 2
  const SymMatrix x2 = i2 * 2.0;
  const LemmaReport scalar = check_lemma_properties(x2, i2, i2, i2);
  CHECK(scalar.all_pass());
  for (const RelationCheck& r : scalar.relations)
    if (r.name == "translation_contraction") {
      CHECK(r.lhs == doctest::Approx(std::log(1.5)).epsilon(1e-12));
      CHECK(r.rhs == doctest::Approx((2.0 / 3.0) * std::log(2.0)).epsilon(1e-12));
    }

  const PropertyResult suite = verify_lemma_suite(200, 10, 1234);
  CHECK(suite.failures == 0);
}
