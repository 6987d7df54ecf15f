#include "msqrt/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

namespace msqrt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double residual(const SymMatrix& a, const SymMatrix& x) {
  Matrix r = multiply(x.matrix(), x.matrix());
  r -= a.matrix();
  return fro_norm(r);
}

bool is_finite(const Matrix& m) {
  const double* p = m.data();
  const std::size_t sz = m.rows() * m.cols();
  for (std::size_t i = 0; i < sz; ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Fpm1: return "fpm1";
    case Method::Fpm2: return "fpm2";
    case Method::Sra: return "sra";
    case Method::NewtonScaled: return "newton";
    case Method::GradBB: return "gradm";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "fpm1") return Method::Fpm1;
  if (name == "fpm2") return Method::Fpm2;
  if (name == "sra") return Method::Sra;
  if (name == "newton") return Method::NewtonScaled;
  if (name == "gradm" || name == "grad") return Method::GradBB;
  return std::nullopt;
}

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::ResidualConverged: return "ResidualConverged";
    case SolveStatus::ChangeConverged: return "ChangeConverged";
    case SolveStatus::MaxItersExceeded: return "MaxItersExceeded";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::Failed: return "Failed";
  }
  return "?";
}

SymMatrix initial_iterate(const SymMatrix& a, const std::optional<SymMatrix>& custom) {
  if (custom) {
    if (custom->order() != a.order()) throw DimensionMismatch("custom X0 order differs from A");
    cholesky(*custom);  // throws NotPositiveDefinite for an invalid start
    return *custom;
  }
  SymMatrix x0 = a;
  x0 *= 0.5;
  x0.shift_diagonal(0.5);
  return x0;
}

double compute_mu(const SymMatrix& a, const MuPolicy& policy) {
  const std::size_t n = a.order();
  switch (policy.kind) {
    case MuPolicy::Kind::Explicit:
      if (!(policy.mu > 0)) throw std::invalid_argument("explicit mu must be positive");
      return policy.mu;
    case MuPolicy::Kind::AutoFpm1: {
      if (!(policy.nu > 0 && policy.nu < 1)) throw std::invalid_argument("nu must lie in (0,1)");
      return policy.nu * std::sqrt(static_cast<double>(n) + cond_spd(a));
    }
    case MuPolicy::Kind::AutoFpm2: {
      if (!(policy.nu > 0 && policy.nu < 1)) throw std::invalid_argument("nu must lie in (0,1)");
      return policy.nu * (trace(a) / n + fro_norm(a) / n);
    }
    case MuPolicy::Kind::OptimalTheorem: {
      const EigDecomp d = eig_sym(a);
      if (!(d.min() > 0)) throw NotPositiveDefinite("mu policy requires an SPD matrix");
      const double norm_a = std::max(std::fabs(d.min()), std::fabs(d.max()));
      const double norm_ainv = 1.0 / d.min();
      const double kappa = d.max() / d.min();
      return std::sqrt((1.0 + norm_a) / ((1.0 + norm_ainv) * kappa));
    }
  }
  throw std::invalid_argument("unknown mu policy");
}

SymMatrix fpm1_step(const SymMatrix& a, const SymMatrix& x, double mu) {
  // (A + mu X)(X + mu I)^{-1}: solve (X + mu I) Y = (A + mu X), transpose.
  SymMatrix shifted = x;
  shifted.shift_diagonal(mu);
  SymMatrix rhs = a + mu * x;
  Matrix y = solve_spd(shifted, rhs.matrix());
  return SymMatrix::from(y.transposed());
}

SymMatrix fpm2_step(const SymMatrix& a, const SymMatrix& x, double mu) {
  Matrix xtx = multiply(x.matrix(), x.matrix());
  Matrix rhs = multiply(x.matrix(), a.matrix());
  rhs += (mu * x).matrix();
  SymMatrix lhs = SymMatrix::from(xtx);
  lhs.shift_diagonal(mu);
  return SymMatrix::from(solve_spd(lhs, rhs));
}

SymMatrix sra_step(const SymMatrix& a, const SymMatrix& x) {
  const std::size_t n = a.order();
  const Matrix eye = Matrix::identity(n);
  Matrix inv_xa = solve_spd(x + a, eye);
  SymMatrix xi = x;
  xi.shift_diagonal(1.0);
  inv_xa += solve_spd(xi, eye);
  return SymMatrix::from(solve_spd(SymMatrix::from(inv_xa), eye));
}

SymMatrix unscaled_newton_step(const SymMatrix& a, const SymMatrix& x) {
  Matrix y = invert_general(x.matrix());
  y = multiply(y, a.matrix());
  y += x.matrix();
  y *= 0.5;
  return SymMatrix::from(y);
}

namespace {

SolveReport run_fixed_point(const SymMatrix& a, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const StoppingCriteria& stop = cfg.stopping;
  SolveReport rep;

  double mu = 0.0;
  if (cfg.method != Method::Sra) mu = compute_mu(a, cfg.mu_policy);

  SymMatrix x = initial_iterate(a, cfg.initial);
  double e = residual(a, x);
  const double e0 = std::max(e, 1e-300);
  rep.trace.push_back({0, e, 0.0, seconds_since(t0)});

  for (int k = 0; k < stop.max_iters; ++k) {
    if (e < stop.residual_tol) {
      rep.status = SolveStatus::ResidualConverged;
      rep.iters_used = k;
      rep.final_iterate = x;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    SymMatrix xn;
    try {
      switch (cfg.method) {
        case Method::Fpm1: xn = fpm1_step(a, x, mu); break;
        case Method::Fpm2: xn = fpm2_step(a, x, mu); break;
        default: xn = sra_step(a, x); break;
      }
    } catch (const NotPositiveDefinite& err) {
      rep.status = SolveStatus::Failed;
      rep.failure_reason = err.what();
      rep.iters_used = k;
      rep.final_iterate = x;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    const double reschg = fro_norm(xn - x) / fro_norm(x);
    x = xn;
    e = residual(a, x);
    rep.trace.push_back({k + 1, e, reschg, seconds_since(t0)});
    rep.iters_used = k + 1;
    if (!std::isfinite(e) || !is_finite(x.matrix()) || e > 1e8 * e0) {
      rep.status = SolveStatus::Diverged;
      rep.final_iterate = x;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    if (e < stop.residual_tol) {
      rep.status = SolveStatus::ResidualConverged;
      rep.final_iterate = x;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    if (reschg < stop.change_tol) {
      rep.status = SolveStatus::ChangeConverged;
      rep.final_iterate = x;
      rep.total_time = seconds_since(t0);
      return rep;
    }
  }
  rep.status = SolveStatus::MaxItersExceeded;
  rep.iters_used = stop.max_iters;
  rep.final_iterate = x;
  rep.total_time = seconds_since(t0);
  return rep;
}

}  // namespace

SolveReport newton_scaled(const SymMatrix& a, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const StoppingCriteria& stop = cfg.stopping;
  const std::size_t n = a.order();
  SolveReport rep;

  Matrix lt;  // L^T with A = L L^T
  try {
    lt = cholesky(a).lower.transposed();
  } catch (const NotPositiveDefinite& err) {
    rep.status = SolveStatus::Failed;
    rep.failure_reason = std::string("Cholesky breakdown: ") + err.what();
    rep.total_time = seconds_since(t0);
    rep.final_iterate = SymMatrix(n);
    return rep;
  }

  Matrix u = lt;
  double mu = cfg.newton_mu0;
  SymMatrix h = SymMatrix::from(multiply(u.transposed(), lt));
  double e = residual(a, h);
  rep.trace.push_back({0, e, 0.0, seconds_since(t0)});
  rep.final_iterate = h;

  for (int k = 0; k < stop.max_iters; ++k) {
    if (e < stop.residual_tol) {
      rep.status = SolveStatus::ResidualConverged;
      rep.iters_used = k;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    Matrix uinv;
    try {
      uinv = invert_general(u);
    } catch (const SingularMatrix&) {
      rep.status = SolveStatus::Failed;
      rep.failure_reason = "IllConditioned: triangular/LU solve broke down";
      rep.iters_used = k;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    if (k > 0) mu = std::sqrt(fro_norm(uinv) / fro_norm(u));
    Matrix un = u;
    un *= 0.5 * mu;
    Matrix corr = uinv.transposed();
    corr *= 0.5 / mu;
    un += corr;
    const double reschg = fro_norm(un - u) / fro_norm(u);
    u = un;

    h = SymMatrix::from(multiply(u.transposed(), lt));
    e = residual(a, h);
    rep.trace.push_back({k + 1, e, reschg, seconds_since(t0)});
    rep.iters_used = k + 1;
    rep.final_iterate = h;

    if (!std::isfinite(e) || !is_finite(u)) {
      rep.status = SolveStatus::Diverged;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    if (e < stop.residual_tol) {
      rep.status = SolveStatus::ResidualConverged;
      rep.total_time = seconds_since(t0);
      return rep;
    }
    Matrix orth = multiply(u.transposed(), u);
    orth -= Matrix::identity(n);
    if (reschg < stop.change_tol || fro_norm(orth) < stop.residual_tol) {
      rep.status = e < stop.residual_tol ? SolveStatus::ResidualConverged
                                         : SolveStatus::ChangeConverged;
      rep.total_time = seconds_since(t0);
      return rep;
    }
  }
  rep.status = SolveStatus::MaxItersExceeded;
  rep.iters_used = stop.max_iters;
  rep.total_time = seconds_since(t0);
  return rep;
}

SymMatrix grad_objective(const SymMatrix& a, const SymMatrix& x) {
  Matrix r = multiply(x.matrix(), x.matrix());
  r -= a.matrix();
  Matrix g = multiply(x.matrix(), r);
  g += multiply(r, x.matrix());
  g *= 2.0;
  return SymMatrix::from(g);
}

SolveReport grad_bb(const SymMatrix& a, const SolverConfig& cfg) {
  const auto t0 = Clock::now();
  const StoppingCriteria& stop = cfg.stopping;
  SolveReport rep;

  constexpr int kWindow = 10;
  constexpr double kSufficientDecrease = 1e-4;
  constexpr double kBacktrack = 0.5;
  constexpr double kStepMin = 1e-10, kStepMax = 1e10;

  auto value = [&](const SymMatrix& x) {
    const double e = residual(a, x);
    return e * e;
  };
  auto gradient = [&](const SymMatrix& x) { return grad_objective(a, x); };

  SymMatrix x = initial_iterate(a, cfg.initial);
  double fx = value(x);
  double e = std::sqrt(fx);
  const double e0 = std::max(e, 1e-300);
  SymMatrix g = gradient(x);
  std::deque<double> window{fx};
  double alpha = 1.0 / std::max(kStepMin, fro_norm(g));
  rep.trace.push_back({0, e, 0.0, seconds_since(t0)});

  auto finish = [&](SolveStatus st, int iters) {
    // PSD is not enforced during the run; flag an indefinite end point.
    if (st != SolveStatus::Failed) {
      try {
        cholesky(x);
      } catch (const NotPositiveDefinite&) {
        st = SolveStatus::Diverged;
      }
    }
    rep.status = st;
    rep.iters_used = iters;
    rep.final_iterate = x;
    rep.total_time = seconds_since(t0);
    return rep;
  };

  for (int k = 0; k < stop.max_iters; ++k) {
    if (e < stop.residual_tol) return finish(SolveStatus::ResidualConverged, k);

    const double fmax = *std::max_element(window.begin(), window.end());
    double gg = 0.0;
    {
      const double* p = g.matrix().data();
      const std::size_t sz = x.order() * x.order();
      for (std::size_t i = 0; i < sz; ++i) gg += p[i] * p[i];
    }
    double t = alpha;
    SymMatrix xn = x - t * g;
    double fn = value(xn);
    for (int bt = 0; bt < 60 && !(fn <= fmax - kSufficientDecrease * t * gg); ++bt) {
      t *= kBacktrack;
      xn = x - t * g;
      fn = value(xn);
    }

    const SymMatrix s = xn - x;
    const SymMatrix gn = gradient(xn);
    const SymMatrix y = gn - g;
    double sy = 0.0, ss = 0.0, yy = 0.0;
    {
      const double* ps = s.matrix().data();
      const double* py = y.matrix().data();
      const std::size_t sz = x.order() * x.order();
      for (std::size_t i = 0; i < sz; ++i) {
        sy += ps[i] * py[i];
        ss += ps[i] * ps[i];
        yy += py[i] * py[i];
      }
    }
    // alternate BB1 / BB2, safeguarded
    double bb = (sy > 0) ? ((k % 2 == 0) ? ss / sy : sy / yy) : 1e4 * t;
    alpha = std::clamp(bb, kStepMin, kStepMax);

    const double reschg = fro_norm(s) / fro_norm(x);
    x = xn;
    g = gn;
    fx = fn;
    window.push_back(fx);
    if (static_cast<int>(window.size()) > kWindow) window.pop_front();
    e = std::sqrt(fx);
    rep.trace.push_back({k + 1, e, reschg, seconds_since(t0)});

    if (!std::isfinite(e) || e > 1e8 * e0) return finish(SolveStatus::Diverged, k + 1);
    if (e < stop.residual_tol) return finish(SolveStatus::ResidualConverged, k + 1);
    if (reschg < stop.change_tol) return finish(SolveStatus::ChangeConverged, k + 1);
  }
  return finish(SolveStatus::MaxItersExceeded, stop.max_iters);
}

SolveReport run_solver(const SymMatrix& a, const SolverConfig& cfg) {
  if (!cfg.stopping.valid()) throw std::invalid_argument("invalid stopping criteria");
  switch (cfg.method) {
    case Method::NewtonScaled: return newton_scaled(a, cfg);
    case Method::GradBB: return grad_bb(a, cfg);
    default: return run_fixed_point(a, cfg);
  }
}

}  // namespace msqrt
