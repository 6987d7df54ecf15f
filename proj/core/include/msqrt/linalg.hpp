#ifndef MSQRT_LINALG_HPP
#define MSQRT_LINALG_HPP

#include <cstdint>
#include <vector>

#include "msqrt/matrix.hpp"

namespace msqrt {

/// Counts of the expensive kernels executed on this thread. Used by the
/// cost-contract tests to check how many factorizations and products a
/// solver step performs.
struct KernelCounters {
  std::uint64_t cholesky_factorizations = 0;
  std::uint64_t matrix_products = 0;
};

KernelCounters& kernel_counters();
void reset_kernel_counters();

/// Full spectral decomposition of a symmetric matrix.
struct EigDecomp {
  std::vector<double> eigenvalues;  // nondecreasing
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

struct CholFactor {
  Matrix lower;  // L with A = L L^T, strictly positive diagonal
};

Matrix multiply(const Matrix& a, const Matrix& b);

CholFactor cholesky(const SymMatrix& a);

/// Solves A x = b for one right-hand side given A = L L^T.
void chol_solve_inplace(const CholFactor& f, std::vector<double>& b);

/// Solves A X = B column by column via a single Cholesky factorization.
Matrix solve_spd(const SymMatrix& a, const Matrix& b);
Matrix solve_spd(const CholFactor& f, const Matrix& b);

/// L y = b (forward) and L^T x = y (backward) for a lower-triangular L.
void solve_lower_inplace(const Matrix& l, std::vector<double>& b);
void solve_lower_transposed_inplace(const Matrix& l, std::vector<double>& b);

/// Inverse of a general square matrix via LU with partial pivoting.
/// Throws SingularMatrix on a zero pivot.
Matrix invert_general(const Matrix& a);

/// Cyclic Jacobi eigensolver. Throws NoConvergence past the sweep budget.
EigDecomp eig_sym(const SymMatrix& a);

double fro_norm(const Matrix& m);
double fro_norm(const SymMatrix& m);
double two_norm(const SymMatrix& a);  // max |eigenvalue|
double trace(const SymMatrix& a);

/// lambda_max / lambda_min; throws NotPositiveDefinite if lambda_min <= 0.
double cond_spd(const SymMatrix& a);

}  // namespace msqrt

#endif
