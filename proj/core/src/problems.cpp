#include "msqrt/problems.hpp"

#include <cmath>

#include "msqrt/linalg.hpp"

namespace msqrt {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> unit_sphere_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : w) {
      v = normal(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
  } while (norm < 1e-12);
  for (double& v : w) v /= norm;
  return w;
}

// M <- M (I - 2 w w^T), applied in place.
void apply_reflector_right(Matrix& m, const std::vector<double>& w) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += m(i, j) * w[j];
    for (std::size_t j = 0; j < n; ++j) m(i, j) -= 2.0 * dot * w[j];
  }
}

SymMatrix similar_from_spectrum(const Matrix& q, const std::vector<double>& lambda) {
  const std::size_t n = lambda.size();
  Matrix scaled = q;  // Q * diag(lambda)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= lambda[j];
  return SymMatrix::from(multiply(scaled, q.transposed()));
}

}  // namespace

std::string kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::SpdLogUniform: return "spd";
    case ProblemKind::RandCorr: return "randcorr";
    case ProblemKind::LowRankShift: return "lowrank";
    case ProblemKind::Hilbert: return "hilbert";
  }
  return "?";
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t instance) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ (0x5851f42d4c957f2dULL * (instance + 1))));
}

SpdInstance gen_spd_loguniform(std::size_t n, double ncond, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("order must be at least 2");
  if (ncond < 0) throw std::invalid_argument("ncond must be nonnegative");
  std::mt19937_64 rng = rng_for(seed);
  Matrix q = Matrix::identity(n);
  for (int r = 0; r < 3; ++r) apply_reflector_right(q, unit_sphere_vector(n, rng));

  std::vector<double> lambda(n), root(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double loglam =
        (static_cast<double>(i + 1) - static_cast<double>(n)) / (static_cast<double>(n) - 1.0) * ncond;
    lambda[i] = std::exp(loglam);
    root[i] = std::exp(0.5 * loglam);
  }
  return {similar_from_spectrum(q, lambda), similar_from_spectrum(q, root)};
}

SymMatrix gen_randcorr(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("order must be at least 2");
  std::mt19937_64 rng = rng_for(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> lambda(n);
  double sum = 0.0;
  for (double& v : lambda) {
    v = unif(rng);
    sum += v;
  }
  for (double& v : lambda) {
    v *= static_cast<double>(n) / sum;
    if (v < 1e-10) throw DegenerateSpectrum("scaled eigenvalue below 1e-10");
  }

  Matrix q = Matrix::identity(n);
  for (std::size_t r = 0; r < n; ++r) apply_reflector_right(q, unit_sphere_vector(n, rng));
  SymMatrix a = similar_from_spectrum(q, lambda);

  // Bendel-Mickey: rotate pairs (i, j) with a_ii < 1 < a_jj until the
  // diagonal is all ones. Trace n is preserved by the rotations.
  constexpr double kTol = 1e-12;
  for (std::size_t pass = 0; pass < 4 * n; ++pass) {
    std::size_t lo = n, hi = n;
    for (std::size_t i = 0; i < n && (lo == n || hi == n); ++i) {
      if (lo == n && a(i, i) < 1.0 - kTol) lo = i;
      if (hi == n && a(i, i) > 1.0 + kTol) hi = i;
    }
    if (lo == n || hi == n) break;
    const double aii = a(lo, lo), ajj = a(hi, hi), aij = a(lo, hi);
    const double disc = std::sqrt(aij * aij - (aii - 1.0) * (ajj - 1.0));
    const double t = (aij + (aij >= 0.0 ? disc : -disc)) / (ajj - 1.0);
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = c * t;
    // symmetric two-sided rotation in the (lo, hi) plane
    Matrix m = a.matrix();
    for (std::size_t k = 0; k < n; ++k) {
      const double mk_lo = m(k, lo), mk_hi = m(k, hi);
      m(k, lo) = c * mk_lo - s * mk_hi;
      m(k, hi) = s * mk_lo + c * mk_hi;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double mlo_k = m(lo, k), mhi_k = m(hi, k);
      m(lo, k) = c * mlo_k - s * mhi_k;
      m(hi, k) = s * mlo_k + c * mhi_k;
    }
    m(lo, lo) = 1.0;  // exact by construction of t
    a = SymMatrix::from(m);
  }
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, 1.0);
  return a;
}

SymMatrix gen_lowrank_shift(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > n) throw std::invalid_argument("rank must lie in [1, n]");
  std::mt19937_64 rng = rng_for(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double beta = unif(rng);
  Matrix u(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) u(i, j) = normal(rng);
  Matrix a = multiply(u, u.transposed());
  a *= beta;
  SymMatrix sym = SymMatrix::from(a);
  sym.shift_diagonal(1.0);
  return sym;
}

SymMatrix gen_hilbert(std::size_t n) {
  if (n < 1) throw std::invalid_argument("order must be at least 1");
  SymMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      h.set(i, j, 1.0 / static_cast<double>(i + j + 1));
  return h;
}

SymMatrix generate(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::SpdLogUniform:
      return gen_spd_loguniform(spec.n, spec.ncond, spec.seed).a;
    case ProblemKind::RandCorr: return gen_randcorr(spec.n, spec.seed);
    case ProblemKind::LowRankShift: return gen_lowrank_shift(spec.n, spec.rank, spec.seed);
    case ProblemKind::Hilbert: return gen_hilbert(spec.n);
  }
  throw std::invalid_argument("unknown problem kind");
}

SymMatrix oracle_sqrt(const SymMatrix& a) {
  const EigDecomp d = eig_sym(a);
  if (!(d.min() > 0.0)) throw NotPositiveDefinite("square root of a non-SPD matrix");
  const std::size_t n = a.order();
  Matrix scaled = d.eigenvectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= std::sqrt(d.eigenvalues[j]);
  return SymMatrix::from(multiply(scaled, d.eigenvectors.transposed()));
}

}  // namespace msqrt
