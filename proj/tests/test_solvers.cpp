#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "msqrt/metrics.hpp"
#include "msqrt/problems.hpp"
#include "msqrt/solvers.hpp"

using namespace msqrt;
using namespace msqrt::testing;

namespace {

SolverConfig config(Method m, MuPolicy policy = MuPolicy::auto_fpm1()) {
  SolverConfig cfg;
  cfg.method = m;
  cfg.mu_policy = policy;
  return cfg;
}

}  // namespace

TEST_CASE("initial_iterate") {
  const SymMatrix x_i = initial_iterate(SymMatrix::identity(3), std::nullopt);
  CHECK(fro_norm(x_i.matrix() - Matrix::identity(3)) == 0.0);

  const SymMatrix x_d = initial_iterate(SymMatrix::diagonal({4, 9}), std::nullopt);
  CHECK(x_d(0, 0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(x_d(1, 1) == doctest::Approx(5.0).epsilon(1e-15));

  const SymMatrix x_3 = initial_iterate(SymMatrix::identity(4) * 3.0, std::nullopt);
  CHECK(x_3(0, 0) == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(
      initial_iterate(SymMatrix::identity(3), SymMatrix::diagonal({1, -1, 1})),
      NotPositiveDefinite);
}

TEST_CASE("fpm1_step") {
  const SymMatrix i2 = SymMatrix::identity(2);
  CHECK(fro_norm(fpm1_step(i2, i2, 0.7).matrix() - i2.matrix()) < 1e-15);

  const SymMatrix a = SymMatrix::diagonal({4, 9});
  const SymMatrix x = fpm1_step(a, SymMatrix::diagonal({2.5, 5}), 1.0);
  CHECK(x(0, 0) == doctest::Approx(6.5 / 3.5).epsilon(1e-14));
  CHECK(x(1, 1) == doctest::Approx(14.0 / 6.0).epsilon(1e-14));

  SymMatrix xk = SymMatrix::diagonal({2.5, 5});
  for (int k = 0; k < 200 && spd_residual(a, xk) >= 1e-5; ++k) xk = fpm1_step(a, xk, 1.0);
  CHECK(spd_residual(a, xk) < 1e-5);
  CHECK(xk(0, 0) == doctest::Approx(2).epsilon(1e-4));
  CHECK(xk(1, 1) == doctest::Approx(3).epsilon(1e-4));
}

TEST_CASE("fpm2_step") {
  const SymMatrix i2 = SymMatrix::identity(2);
  CHECK(fro_norm(fpm2_step(i2, i2, 2.3).matrix() - i2.matrix()) < 1e-15);

  const SymMatrix a = SymMatrix::diagonal({4, 9});
  const SymMatrix fixed = fpm2_step(a, SymMatrix::diagonal({2, 3}), 0.37);
  CHECK(fixed(0, 0) == doctest::Approx(2).epsilon(1e-13));
  CHECK(fixed(1, 1) == doctest::Approx(3).epsilon(1e-13));

  const SymMatrix x = fpm2_step(a, SymMatrix::diagonal({2.5, 5}), 1.0);
  CHECK(x(0, 0) == doctest::Approx(12.5 / 7.25).epsilon(1e-13));
  CHECK(x(1, 1) == doctest::Approx(50.0 / 26.0).epsilon(1e-13));
}

TEST_CASE("sra_step") {
  const SymMatrix i2 = SymMatrix::identity(2);
  CHECK(fro_norm(sra_step(i2, i2).matrix() - i2.matrix()) < 1e-14);

  const SymMatrix a = SymMatrix::diagonal({4, 9});
  const SymMatrix fixed = sra_step(a, SymMatrix::diagonal({2, 3}));
  CHECK(fixed(0, 0) == doctest::Approx(2).epsilon(1e-13));
  CHECK(fixed(1, 1) == doctest::Approx(3).epsilon(1e-13));

  const SymMatrix a6 = random_spd(6, 2.0, 9);
  SymMatrix x = initial_iterate(a6, std::nullopt);
  double prev = spd_residual(a6, x);
  for (int k = 0; k < 400 && prev >= 1e-5; ++k) {
    x = sra_step(a6, x);
    const double e = spd_residual(a6, x);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-5);
  CHECK(rel_diff(x.matrix(), oracle_sqrt(a6).matrix()) < 1e-4);
}

TEST_CASE("unscaled_newton_step") {
  const SymMatrix i2 = SymMatrix::identity(2);
  CHECK(fro_norm(unscaled_newton_step(i2, i2).matrix() - i2.matrix()) < 1e-15);

  const SymMatrix a = SymMatrix::diagonal({4, 9});
  const SymMatrix x = unscaled_newton_step(a, a);
  CHECK(x(0, 0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(x(1, 1) == doctest::Approx(5.0).epsilon(1e-14));

  // Babylonian sequence for sqrt(2) as 1x1 matrices
  SymMatrix a1 = SymMatrix::diagonal({2});
  SymMatrix s = SymMatrix::diagonal({2});
  s = unscaled_newton_step(a1, s);
  CHECK(s(0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  s = unscaled_newton_step(a1, s);
  CHECK(s(0, 0) == doctest::Approx(17.0 / 12.0).epsilon(1e-15));
  s = unscaled_newton_step(a1, s);
  CHECK(s(0, 0) == doctest::Approx(577.0 / 408.0).epsilon(1e-15));
}

TEST_CASE("newton_scaled") {
  SolverConfig cfg = config(Method::NewtonScaled);

  const SolveReport rep_i = newton_scaled(SymMatrix::identity(4), cfg);
  CHECK(rep_i.converged());
  CHECK(rep_i.iters_used <= 2);

  const SolveReport rep_d = newton_scaled(SymMatrix::diagonal({4, 9}), cfg);
  CHECK(rep_d.converged());
  CHECK(rep_d.final_iterate(0, 0) == doctest::Approx(2).epsilon(1e-10));
  CHECK(rep_d.final_iterate(1, 1) == doctest::Approx(3).epsilon(1e-10));

  cfg.stopping.residual_tol = 1e-8;
  const SymMatrix a = random_spd(20, 4.0, 21);  // kappa = e^4 < 1e4
  const SolveReport rep = newton_scaled(a, cfg);
  CHECK(rep.converged());
  CHECK(rep.iters_used <= 10);
  CHECK(spd_residual(a, rep.final_iterate) < 1e-8);
}

TEST_CASE("grad_bb") {
  SolverConfig cfg = config(Method::GradBB);

  const SolveReport rep_i = grad_bb(SymMatrix::identity(3), cfg);
  CHECK(rep_i.status == SolveStatus::ResidualConverged);
  CHECK(rep_i.iters_used == 0);

  const SymMatrix a = SymMatrix::diagonal({4, 9});
  const SolveReport rep = grad_bb(a, cfg);
  CHECK(rep.converged());
  CHECK(spd_residual(a, rep.final_iterate) < 1e-4);
  CHECK(rep.final_iterate(0, 0) == doctest::Approx(2).epsilon(1e-3));
  CHECK(rep.final_iterate(1, 1) == doctest::Approx(3).epsilon(1e-3));
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix a = random_sym(5, rng);
    const SymMatrix x = random_sym(5, rng);
    const SymMatrix g = grad_objective(a, x);

    SymMatrix dir(5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i; j < 5; ++j) dir.set(i, j, unit(rng));

    const double h = 1e-6;
    const double fp = std::pow(spd_residual(a, x + h * dir), 2);
    const double fm = std::pow(spd_residual(a, x - h * dir), 2);
    const double fd = (fp - fm) / (2 * h);

    double dot = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) dot += g(i, j) * dir(i, j);
    CHECK(std::fabs(fd - dot) <= 1e-5 * std::max(std::fabs(dot), 1.0));
  }
}

TEST_CASE("run_solver driver") {
  SolverConfig cfg = config(Method::Fpm1, MuPolicy::auto_fpm1(0.5));
  const SolveReport rep_i = run_solver(SymMatrix::identity(5), cfg);
  CHECK(rep_i.status == SolveStatus::ResidualConverged);
  CHECK(rep_i.iters_used == 0);

  const SymMatrix a = SymMatrix::diagonal({4, 9});
  const SolveReport rep = run_solver(a, cfg);
  CHECK(rep.converged());
  CHECK(rel_diff(rep.final_iterate.matrix(), oracle_sqrt(a).matrix()) < 1e-4);

  // statuses consistent with the recorded trace
  CHECK(rep.trace.front().k == 0);
  if (rep.status == SolveStatus::ResidualConverged)
    CHECK(rep.trace.back().residual < cfg.stopping.residual_tol);

  SolverConfig bad = cfg;
  bad.stopping.max_iters = 0;
  CHECK_THROWS_AS(run_solver(a, bad), std::invalid_argument);
}

TEST_CASE("compute_mu") {
  CHECK(compute_mu(SymMatrix::identity(3), MuPolicy::optimal_theorem()) ==
        doctest::Approx(1).epsilon(1e-12));
  CHECK(compute_mu(SymMatrix::identity(4), MuPolicy::auto_fpm1(0.5)) ==
        doctest::Approx(0.5 * std::sqrt(5.0)).epsilon(1e-12));
  CHECK(compute_mu(SymMatrix::diagonal({4, 9}), MuPolicy::auto_fpm2(0.5)) ==
        doctest::Approx(0.5 * (13.0 / 2.0 + std::sqrt(97.0) / 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(compute_mu(SymMatrix::identity(2), MuPolicy::auto_fpm1(1.5)),
                  std::invalid_argument);
}

TEST_CASE("fixed point invariance at the oracle root") {
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + t;
    const SpdInstance inst = gen_spd_loguniform(n, 1.5, 50 + t);
    const SymMatrix& root = inst.oracle_root;
    const double scale = fro_norm(root);
    CHECK(fro_norm(fpm1_step(inst.a, root, 0.8) - root) < 1e-10 * scale);
    CHECK(fro_norm(fpm2_step(inst.a, root, 0.8) - root) < 1e-10 * scale);
    CHECK(fro_norm(sra_step(inst.a, root) - root) < 1e-10 * scale);
  }
}

TEST_CASE("fpm1 maps the interval into the SPD cone") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 25; ++t) {
    const SymMatrix a = random_spd(6, 2.5, rng());
    const SymMatrix x = sample_interval(a, rng());
    const double mu = compute_mu(a, MuPolicy::auto_fpm1(0.4));
    CHECK(eig_sym(fpm1_step(a, x, mu)).min() > 0.0);
  }
}

TEST_CASE("iterates are exactly symmetric") {
  const SymMatrix a = random_spd(7, 3.0, 8);
  SymMatrix x = initial_iterate(a, std::nullopt);
  for (int k = 0; k < 5; ++k) {
    x = fpm1_step(a, x, 1.3);
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK(x(i, j) == x(j, i));
  }
}

TEST_CASE("cost contract per step") {
  const SymMatrix a = random_spd(10, 2.0, 99);
  const SymMatrix x = initial_iterate(a, std::nullopt);

  reset_kernel_counters();
  fpm1_step(a, x, 1.0);
  CHECK(kernel_counters().cholesky_factorizations == 1);

  reset_kernel_counters();
  sra_step(a, x);
  CHECK(kernel_counters().cholesky_factorizations == 3);

  reset_kernel_counters();
  fpm2_step(a, x, 1.0);
  CHECK(kernel_counters().cholesky_factorizations == 1);
  CHECK(kernel_counters().matrix_products == 2);
  reset_kernel_counters();
}
