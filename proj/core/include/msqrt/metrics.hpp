#ifndef MSQRT_METRICS_HPP
#define MSQRT_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "msqrt/linalg.hpp"
#include "msqrt/matrix.hpp"

namespace msqrt {

/// Thompson part metric between SPD matrices, computed from the extreme
/// generalized eigenvalues of the pencil (Y, X).
double thompson(const SymMatrix& x, const SymMatrix& y);

enum class SDivConvention {
  Standard,      // log det((X+Y)/2) - (1/2) log det(XY); zero at X == Y
  PaperLiteral,  // log det((X+Y)/2) - (1/2) log det(XY/2)
};

double s_divergence(const SymMatrix& x, const SymMatrix& y,
                    SDivConvention convention = SDivConvention::Standard);

/// delta_S^2(X, A) + delta_S^2(X, I); diagnostic objective minimized at A^{1/2}.
double objective_F(const SymMatrix& x, const SymMatrix& a,
                   SDivConvention convention = SDivConvention::Standard);

struct ContractionBound {
  double gamma = 0.0;
  double alpha1 = 0.0;  // 1 + ||A^{-1}||_2
  double alpha2 = 0.0;  // 1 + ||A||_2
  double mu = 0.0;
  double kappa = 1.0;
};

ContractionBound contraction_bound(const SymMatrix& a, double mu);

struct IntervalBounds {
  SymMatrix lower;  // 2 A (A + I)^{-1}
  SymMatrix upper;  // (A + I)/2
};

IntervalBounds interval_bounds(const SymMatrix& a);

/// A point of the interval [lower, upper]: the segment position t in [0,1]
/// plus a small congruence perturbation, resampled until membership holds.
SymMatrix sample_interval(const SymMatrix& a, std::uint64_t seed);

struct ProfileCurve {
  std::string solver;
  std::vector<double> tau;
  std::vector<double> rho;
};

/// Dolan-More performance profiles. costs[p][s] > 0, +infinity for failures.
std::vector<ProfileCurve> perf_profile(const std::vector<std::vector<double>>& costs,
                                       const std::vector<std::string>& solvers,
                                       const std::vector<double>& tau_grid);

struct RelationCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct LemmaReport {
  std::vector<RelationCheck> relations;
  bool all_pass() const {
    for (const auto& r : relations)
      if (!r.pass) return false;
    return true;
  }
};

/// Evaluates inversion invariance, additive monotonicity, translation
/// contraction, right-translation invariance, and the spectral-radius
/// identity on one SPD quadruple.
LemmaReport check_lemma_properties(const SymMatrix& x, const SymMatrix& y,
                                   const SymMatrix& a, const SymMatrix& b);

}  // namespace msqrt

#endif
