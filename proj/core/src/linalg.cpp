#include "msqrt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace msqrt {

KernelCounters& kernel_counters() {
  thread_local KernelCounters counters;
  return counters;
}

void reset_kernel_counters() { kernel_counters() = KernelCounters{}; }

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("inner dimensions disagree");
  ++kernel_counters().matrix_products;
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
  // ikj loop order, fixed summation order for determinism
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      const double* bp = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

CholFactor cholesky(const SymMatrix& a) {
  ++kernel_counters().cholesky_factorizations;
  const std::size_t n = a.order();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
    if (!(d > 0.0) || !std::isfinite(d))
      throw NotPositiveDefinite("nonpositive pivot in Cholesky at column " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      l(i, j) = s / ljj;
    }
  }
  return CholFactor{std::move(l)};
}

void solve_lower_inplace(const Matrix& l, std::vector<double>& b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * b[p];
    b[i] = s / l(i, i);
  }
}

void solve_lower_transposed_inplace(const Matrix& l, std::vector<double>& b) {
  const std::size_t n = l.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t p = ii + 1; p < n; ++p) s -= l(p, ii) * b[p];
    b[ii] = s / l(ii, ii);
  }
}

void chol_solve_inplace(const CholFactor& f, std::vector<double>& b) {
  solve_lower_inplace(f.lower, b);
  solve_lower_transposed_inplace(f.lower, b);
}

Matrix solve_spd(const CholFactor& f, const Matrix& b) {
  const std::size_t n = f.lower.rows();
  if (b.rows() != n) throw DimensionMismatch("right-hand side rows disagree");
  Matrix x = b;
  std::vector<double> col(n);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    chol_solve_inplace(f, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
  }
  return x;
}

Matrix solve_spd(const SymMatrix& a, const Matrix& b) {
  return solve_spd(cholesky(a), b);
}

Matrix invert_general(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverting a non-square matrix");
  const std::size_t n = a.rows();
  Matrix lu = a;
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::fabs(lu(i, k));
      if (v > best) { best = v; p = i; }
    }
    if (best == 0.0 || !std::isfinite(best)) throw SingularMatrix("zero pivot in LU");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      std::swap(piv[k], piv[p]);
    }
    const double pivval = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu(i, k) / pivval;
      lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
    }
  }
  Matrix inv(n, n);
  std::vector<double> b(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) b[i] = (piv[i] == col) ? 1.0 : 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      double s = b[i];
      for (std::size_t p = 0; p < i; ++p) s -= lu(i, p) * b[p];
      b[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = b[ii];
      for (std::size_t p = ii + 1; p < n; ++p) s -= lu(ii, p) * b[p];
      b[ii] = s / lu(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, col) = b[i];
  }
  return inv;
}

EigDecomp eig_sym(const SymMatrix& sym) {
  const std::size_t n = sym.order();
  Matrix a = sym.matrix();
  Matrix v = Matrix::identity(n);
  constexpr int kMaxSweeps = 64;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  double base = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) base += a(i, j) * a(i, j);
  base = std::sqrt(base);
  const double tol = 1e-15 * std::max(base, 1.0);

  int sweep = 0;
  while (off_norm() > tol) {
    if (++sweep > kMaxSweeps) throw NoConvergence("Jacobi sweep budget exceeded");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigDecomp d;
  d.eigenvalues.resize(n);
  d.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    d.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) d.eigenvectors(i, k) = v(i, order[k]);
  }
  return d;
}

double fro_norm(const Matrix& m) {
  double s = 0.0;
  const double* p = m.data();
  const std::size_t sz = m.rows() * m.cols();
  for (std::size_t i = 0; i < sz; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

double fro_norm(const SymMatrix& m) { return fro_norm(m.matrix()); }

double two_norm(const SymMatrix& a) {
  const EigDecomp d = eig_sym(a);
  return std::max(std::fabs(d.min()), std::fabs(d.max()));
}

double trace(const SymMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) s += a(i, i);
  return s;
}

double cond_spd(const SymMatrix& a) {
  const EigDecomp d = eig_sym(a);
  if (!(d.min() > 0.0))
    throw NotPositiveDefinite("condition number requested for a non-SPD matrix");
  return d.max() / d.min();
}

}  // namespace msqrt
