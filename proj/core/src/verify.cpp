#include "msqrt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "msqrt/linalg.hpp"
#include "msqrt/metrics.hpp"
#include "msqrt/problems.hpp"
#include "msqrt/solvers.hpp"

namespace msqrt {

namespace {

SymMatrix random_spd(std::size_t n, double ncond, std::uint64_t seed) {
  return gen_spd_loguniform(n, ncond, seed).a;
}

}  // namespace

PropertyResult verify_lemma_suite(int trials, std::size_t max_n, std::uint64_t seed,
                                  bool degenerate) {
  PropertyResult res{degenerate ? "lemma_degenerate" : "lemma", trials, 0, -1e300};
  std::mt19937_64 rng = rng_for(seed);
  std::uniform_int_distribution<std::size_t> pick_n(2, max_n);
  std::uniform_real_distribution<double> pick_cond(0.2, 4.0);
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = pick_n(rng);
    const SymMatrix x = random_spd(n, pick_cond(rng), rng());
    const SymMatrix y = degenerate ? x : random_spd(n, pick_cond(rng), rng());
    const SymMatrix a = random_spd(n, pick_cond(rng), rng());
    const SymMatrix b = random_spd(n, pick_cond(rng), rng());
    const LemmaReport rep = check_lemma_properties(x, y, a, b);
    bool ok = true;
    for (const RelationCheck& r : rep.relations) {
      res.worst_slack = std::max(res.worst_slack, r.lhs - r.rhs);
      ok = ok && r.pass;
    }
    if (!ok) ++res.failures;
  }
  return res;
}

PropertyResult verify_contraction(int trials, std::size_t max_n, std::uint64_t seed) {
  PropertyResult res{"contraction", trials, 0, -1e300};
  std::mt19937_64 rng = rng_for(seed);
  std::uniform_int_distribution<std::size_t> pick_n(2, max_n);
  std::uniform_real_distribution<double> pick_cond(0.2, 6.5);
  std::uniform_real_distribution<double> pick_logmu(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> pick_nu(0.05, 0.95);
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = pick_n(rng);
    const SymMatrix a = random_spd(n, pick_cond(rng), rng());
    double mu;
    switch (t % 4) {
      case 0: mu = std::exp(pick_logmu(rng)); break;
      case 1: mu = compute_mu(a, MuPolicy::auto_fpm1(pick_nu(rng))); break;
      case 2: mu = compute_mu(a, MuPolicy::auto_fpm2(pick_nu(rng))); break;
      default: mu = compute_mu(a, MuPolicy::optimal_theorem()); break;
    }
    const SymMatrix x = sample_interval(a, rng());
    const SymMatrix y = sample_interval(a, rng());
    const double before = thompson(x, y);
    const double after = thompson(fpm1_step(a, x, mu), fpm1_step(a, y, mu));
    const double gamma = contraction_bound(a, mu).gamma;
    const double slack = after - (gamma * before + 1e-10);
    res.worst_slack = std::max(res.worst_slack, slack);
    if (slack > 0) ++res.failures;
  }
  return res;
}

PropertyResult verify_envelope(int runs, std::size_t max_n, std::uint64_t seed) {
  PropertyResult res{"envelope", runs, 0, -1e300};
  std::mt19937_64 rng = rng_for(seed);
  std::uniform_int_distribution<std::size_t> pick_n(2, max_n);
  std::uniform_real_distribution<double> pick_cond(0.2, 6.5);  // kappa <= e^6.5 < 1e3
  std::uniform_real_distribution<double> pick_nu(0.1, 0.9);
  for (int t = 0; t < runs; ++t) {
    const std::size_t n = pick_n(rng);
    const SpdInstance inst = gen_spd_loguniform(n, pick_cond(rng), rng());
    const double mu = compute_mu(inst.a, MuPolicy::auto_fpm1(pick_nu(rng)));
    const double gamma = contraction_bound(inst.a, mu).gamma;

    SymMatrix x = initial_iterate(inst.a, std::nullopt);
    const double d0 = thompson(x, inst.oracle_root);
    double bound = d0;
    bool ok = true;
    for (int k = 1; k <= 200; ++k) {
      x = fpm1_step(inst.a, x, mu);
      bound *= gamma;
      const double dist = thompson(x, inst.oracle_root);
      const double slack = dist - bound * (1.0 + 1e-8);
      res.worst_slack = std::max(res.worst_slack, slack);
      if (slack > 0) ok = false;
      Matrix r = multiply(x.matrix(), x.matrix());
      r -= inst.a.matrix();
      if (fro_norm(r) < 1e-5) break;
    }
    if (!ok) ++res.failures;
  }
  return res;
}

PropertyResult verify_interval(int trials, std::size_t n, std::uint64_t seed) {
  PropertyResult res{"interval", trials, 0, -1e300};
  std::mt19937_64 rng = rng_for(seed);
  std::uniform_real_distribution<double> pick_cond(0.2, 6.5);
  for (int t = 0; t < trials; ++t) {
    const SymMatrix a = random_spd(n, pick_cond(rng), rng());
    const IntervalBounds iv = interval_bounds(a);
    const SymMatrix x = sample_interval(a, rng());
    const double lo = eig_sym(x - iv.lower).min();
    const double hi = eig_sym(iv.upper - x).min();
    const double tol = 1e-12 * std::max({1.0, two_norm(iv.upper)});
    const double slack = std::max(-lo, -hi) - tol;
    res.worst_slack = std::max(res.worst_slack, slack);
    if (slack > 0) ++res.failures;
  }
  return res;
}

std::vector<PropertyResult> verify_all(std::uint64_t seed) {
  return {
      verify_lemma_suite(200, 10, seed),
      verify_contraction(200, 10, seed + 1),
      verify_envelope(20, 10, seed + 2),
      verify_interval(100, 6, seed + 3),
  };
}

}  // namespace msqrt
