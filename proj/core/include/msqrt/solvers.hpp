#ifndef MSQRT_SOLVERS_HPP
#define MSQRT_SOLVERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "msqrt/linalg.hpp"
#include "msqrt/matrix.hpp"

namespace msqrt {

enum class Method { Fpm1, Fpm2, Sra, NewtonScaled, GradBB };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct StoppingCriteria {
  int max_iters = 1000;
  double residual_tol = 1e-5;  // on E_k = ||A - X_k^2||_F
  double change_tol = 1e-6;    // on ||X_{k+1} - X_k||_F / ||X_k||_F

  bool valid() const {
    return max_iters >= 1 && residual_tol > 0 && residual_tol < 1 &&
           change_tol > 0 && change_tol < 1;
  }
};

struct MuPolicy {
  enum class Kind { Explicit, AutoFpm1, AutoFpm2, OptimalTheorem };
  Kind kind = Kind::AutoFpm1;
  double mu = 1.0;   // Explicit only
  double nu = 0.5;   // Auto policies, in (0,1)

  static MuPolicy explicit_value(double mu) { return {Kind::Explicit, mu, 0.5}; }
  static MuPolicy auto_fpm1(double nu = 0.5) { return {Kind::AutoFpm1, 1.0, nu}; }
  static MuPolicy auto_fpm2(double nu = 0.5) { return {Kind::AutoFpm2, 1.0, nu}; }
  static MuPolicy optimal_theorem() { return {Kind::OptimalTheorem, 1.0, 0.5}; }
};

struct SolverConfig {
  Method method = Method::Fpm1;
  MuPolicy mu_policy;
  StoppingCriteria stopping;
  double newton_mu0 = 0.5;
  std::optional<SymMatrix> initial;  // defaults to (A + I)/2
};

enum class SolveStatus {
  ResidualConverged,
  ChangeConverged,
  MaxItersExceeded,
  Diverged,
  Failed,
};

std::string status_name(SolveStatus s);

struct IterationRecord {
  int k = 0;
  double residual = 0.0;  // recomputed ||A - X_k^2||_F
  double reschg = 0.0;
  double elapsed = 0.0;   // seconds since solve start
};

struct SolveReport {
  SymMatrix final_iterate;
  SolveStatus status = SolveStatus::Failed;
  std::string failure_reason;
  std::vector<IterationRecord> trace;
  double total_time = 0.0;
  int iters_used = 0;

  bool converged() const {
    return status == SolveStatus::ResidualConverged ||
           status == SolveStatus::ChangeConverged;
  }
};

/// (A + I)/2, or a validated custom SPD start.
SymMatrix initial_iterate(const SymMatrix& a, const std::optional<SymMatrix>& custom);

double compute_mu(const SymMatrix& a, const MuPolicy& policy);

SymMatrix fpm1_step(const SymMatrix& a, const SymMatrix& x, double mu);
SymMatrix fpm2_step(const SymMatrix& a, const SymMatrix& x, double mu);
SymMatrix sra_step(const SymMatrix& a, const SymMatrix& x);
SymMatrix unscaled_newton_step(const SymMatrix& a, const SymMatrix& x);

SolveReport newton_scaled(const SymMatrix& a, const SolverConfig& cfg);

/// Gradient of f(X) = ||X^2 - A||_F^2 over symmetric X:
/// 2 [X(X^2 - A) + (X^2 - A)X].
SymMatrix grad_objective(const SymMatrix& a, const SymMatrix& x);

SolveReport grad_bb(const SymMatrix& a, const SolverConfig& cfg);

/// Uniform driver: dispatches on cfg.method, records the residual trace,
/// and maps step failures onto SolveStatus.
SolveReport run_solver(const SymMatrix& a, const SolverConfig& cfg);

}  // namespace msqrt

#endif
