#ifndef MSQRT_TEST_HELPERS_HPP
#define MSQRT_TEST_HELPERS_HPP

#include <cmath>
#include <random>

#include "msqrt/linalg.hpp"
#include "msqrt/matrix.hpp"
#include "msqrt/problems.hpp"

namespace msqrt::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

inline SymMatrix random_sym(std::size_t n, std::mt19937_64& rng) {
  return SymMatrix::from(random_matrix(n, n, rng));
}

inline SymMatrix random_spd(std::size_t n, double ncond, std::uint64_t seed) {
  return gen_spd_loguniform(n, ncond, seed).a;
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return fro_norm(a - b) / std::max(fro_norm(b), 1e-300);
}

inline double spd_residual(const SymMatrix& a, const SymMatrix& x) {
  Matrix r = multiply(x.matrix(), x.matrix());
  r -= a.matrix();
  return fro_norm(r);
}

}  // namespace msqrt::testing

#endif
