#include "msqrt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace msqrt {

namespace {

// L^{-1} Y L^{-T} for the Cholesky factor L of X.
Matrix whiten(const CholFactor& lx, const SymMatrix& y) {
  const std::size_t n = y.order();
  Matrix w = y.matrix();
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = w(i, j);
    solve_lower_inplace(lx.lower, col);
    for (std::size_t i = 0; i < n; ++i) w(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) col[j] = w(i, j);
    solve_lower_inplace(lx.lower, col);
    for (std::size_t j = 0; j < n; ++j) w(i, j) = col[j];
  }
  return w;
}

double log_det_spd(const SymMatrix& a) {
  const CholFactor f = cholesky(a);
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) s += std::log(f.lower(i, i));
  return 2.0 * s;
}

// Dominant eigenvalue by power iteration; assumes a positive real
// dominant eigenvalue (all uses here are similar to SPD pencils).
double dominant_eigenvalue(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i);
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
      w[i] = s;
      norm += s * s;
    }
    norm = std::sqrt(norm);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += w[i] * v[i];
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    if (it > 2 && std::fabs(dot - lambda) <= 1e-14 * std::fabs(dot)) return dot;
    lambda = dot;
  }
  return lambda;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double thompson(const SymMatrix& x, const SymMatrix& y) {
  if (x.order() != y.order()) throw DimensionMismatch("Thompson metric orders differ");
  const CholFactor lx = cholesky(x);
  const EigDecomp d = eig_sym(SymMatrix::from(whiten(lx, y)));
  if (!(d.min() > 0.0)) throw NotPositiveDefinite("Thompson metric requires SPD arguments");
  return std::max(std::log(d.max()), -std::log(d.min()));
}

double s_divergence(const SymMatrix& x, const SymMatrix& y, SDivConvention convention) {
  const std::size_t n = x.order();
  SymMatrix mid = x + y;
  mid *= 0.5;
  double v = log_det_spd(mid) - 0.5 * (log_det_spd(x) + log_det_spd(y));
  if (convention == SDivConvention::PaperLiteral) v += 0.5 * n * std::log(2.0);
  return v;
}

double objective_F(const SymMatrix& x, const SymMatrix& a, SDivConvention convention) {
  return s_divergence(x, a, convention) +
         s_divergence(x, SymMatrix::identity(x.order()), convention);
}

ContractionBound contraction_bound(const SymMatrix& a, double mu) {
  if (!(mu > 0)) throw std::invalid_argument("mu must be positive");
  const EigDecomp d = eig_sym(a);
  if (!(d.min() > 0)) throw NotPositiveDefinite("contraction bound requires SPD A");
  ContractionBound b;
  b.mu = mu;
  b.kappa = d.max() / d.min();
  b.alpha1 = 1.0 + 1.0 / d.min();  // 1 + ||A^{-1}||_2
  b.alpha2 = 1.0 + d.max();        // 1 + ||A||_2
  b.gamma = std::max(b.alpha1 / (b.alpha1 + 1.0 / mu),
                     b.alpha2 / (b.alpha2 + mu * b.kappa));
  return b;
}

IntervalBounds interval_bounds(const SymMatrix& a) {
  SymMatrix a_plus_i = a;
  a_plus_i.shift_diagonal(1.0);
  Matrix lower = solve_spd(a_plus_i, a.matrix());
  lower *= 2.0;
  SymMatrix upper = a_plus_i;
  upper *= 0.5;
  return {SymMatrix::from(lower), upper};
}

namespace {

bool in_interval(const SymMatrix& x, const IntervalBounds& iv) {
  const double slack_lo = -1e-12 * std::max(1.0, two_norm(iv.lower));
  const double slack_hi = -1e-12 * std::max(1.0, two_norm(iv.upper));
  return eig_sym(x - iv.lower).min() >= slack_lo &&
         eig_sym(iv.upper - x).min() >= slack_hi;
}

}  // namespace

SymMatrix sample_interval(const SymMatrix& a, std::uint64_t seed) {
  const std::size_t n = a.order();
  const IntervalBounds iv = interval_bounds(a);
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const double t = unif(rng);
  const SymMatrix base = iv.lower + t * (iv.upper - iv.lower);
  double scale = 0.05 * std::min(t, 1.0 - t) * fro_norm(iv.upper - iv.lower) /
                 static_cast<double>(n);
  for (int attempt = 0; attempt < 32; ++attempt) {
    SymMatrix pert(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) pert.set(i, j, scale * normal(rng));
    // congruence keeps definiteness of the offset from the lower bound
    Matrix c = Matrix::identity(n) + pert.matrix();
    Matrix shifted = multiply(multiply(c, (base - iv.lower).matrix()), c.transposed());
    SymMatrix candidate = iv.lower + SymMatrix::from(shifted);
    if (in_interval(candidate, iv)) return candidate;
    scale *= 0.5;
  }
  return base;  // endpoints of the segment are always inside
}

std::vector<ProfileCurve> perf_profile(const std::vector<std::vector<double>>& costs,
                                       const std::vector<std::string>& solvers,
                                       const std::vector<double>& tau_grid) {
  if (costs.empty() || solvers.empty()) throw std::invalid_argument("empty profile input");
  const std::size_t num_problems = costs.size();
  const std::size_t num_solvers = solvers.size();
  std::vector<std::vector<double>> ratios(num_problems, std::vector<double>(num_solvers));
  for (std::size_t p = 0; p < num_problems; ++p) {
    if (costs[p].size() != num_solvers)
      throw DimensionMismatch("cost row width differs from solver count");
    double best = std::numeric_limits<double>::infinity();
    for (double c : costs[p]) best = std::min(best, c);
    for (std::size_t s = 0; s < num_solvers; ++s)
      ratios[p][s] = std::isfinite(costs[p][s]) && std::isfinite(best) && best > 0
                         ? costs[p][s] / best
                         : std::numeric_limits<double>::infinity();
  }
  std::vector<ProfileCurve> curves(num_solvers);
  for (std::size_t s = 0; s < num_solvers; ++s) {
    curves[s].solver = solvers[s];
    curves[s].tau = tau_grid;
    curves[s].rho.reserve(tau_grid.size());
    for (double tau : tau_grid) {
      std::size_t count = 0;
      for (std::size_t p = 0; p < num_problems; ++p)
        if (ratios[p][s] <= tau) ++count;
      curves[s].rho.push_back(static_cast<double>(count) / num_problems);
    }
  }
  return curves;
}

LemmaReport check_lemma_properties(const SymMatrix& x, const SymMatrix& y,
                                   const SymMatrix& a, const SymMatrix& b) {
  const std::size_t n = x.order();
  const Matrix eye = Matrix::identity(n);
  LemmaReport rep;

  auto equality = [](const std::string& name, double lhs, double rhs) {
    const double tol = 1e-9 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    return RelationCheck{name, lhs, rhs, std::fabs(lhs - rhs) <= tol};
  };
  auto inequality = [](const std::string& name, double lhs, double rhs) {
    return RelationCheck{name, lhs, rhs, lhs <= rhs + 1e-12};
  };

  const SymMatrix xinv = SymMatrix::from(solve_spd(x, eye));
  const SymMatrix yinv = SymMatrix::from(solve_spd(y, eye));
  rep.relations.push_back(
      equality("inversion_invariance", thompson(xinv, yinv), thompson(x, y)));

  rep.relations.push_back(inequality("additive_max_bound", thompson(x + a, y + b),
                                     std::max(thompson(x, y), thompson(a, b))));

  const double alpha = std::max(two_norm(x), two_norm(y));
  const double lam_min_a = eig_sym(a).min();
  rep.relations.push_back(inequality(
      "translation_contraction", thompson(x + a, y + a),
      (alpha / (alpha + lam_min_a)) * thompson(x, y)));

  // Right translation by A^{-1}: evaluated through the max-log-spectral-radius
  // form on the explicitly formed nonsymmetric products.
  {
    const Matrix ainv = solve_spd(a, eye);
    const Matrix xinv_m = xinv.matrix();
    const Matrix yinv_m = yinv.matrix();
    const Matrix m1 = multiply(multiply(multiply(a.matrix(), xinv_m), y.matrix()), ainv);
    const Matrix m2 = multiply(multiply(multiply(a.matrix(), yinv_m), x.matrix()), ainv);
    const double lhs =
        std::max(std::log(dominant_eigenvalue(m1)), std::log(dominant_eigenvalue(m2)));
    rep.relations.push_back(equality("right_translation_invariance", lhs, thompson(x, y)));
  }

  // lambda_max(A B^{-1}) == lambda_max(B^{-1} A) == lambda_max(B^{-1/2} A B^{-1/2})
  {
    const Matrix binv = solve_spd(b, eye);
    const double l1 = dominant_eigenvalue(multiply(a.matrix(), binv));
    const double l2 = dominant_eigenvalue(multiply(binv, a.matrix()));
    const EigDecomp db = eig_sym(b);
    Matrix binv_half(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          s += db.eigenvectors(i, k) * db.eigenvectors(j, k) / std::sqrt(db.eigenvalues[k]);
        binv_half(i, j) = s;
      }
    const double l3 =
        eig_sym(SymMatrix::from(multiply(multiply(binv_half, a.matrix()), binv_half))).max();
    RelationCheck c = {"spectral_radius_identity", std::max({l1, l2, l3}),
                       std::min({l1, l2, l3}), false};
    const double tol = 1e-9 * std::max(1.0, c.lhs);
    c.pass = (c.lhs - c.rhs) <= tol;
    rep.relations.push_back(c);
  }
  return rep;
}

}  // namespace msqrt
