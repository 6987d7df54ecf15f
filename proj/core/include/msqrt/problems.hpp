#ifndef MSQRT_PROBLEMS_HPP
#define MSQRT_PROBLEMS_HPP

#include <cstdint>
#include <random>
#include <string>

#include "msqrt/matrix.hpp"

namespace msqrt {

enum class ProblemKind { SpdLogUniform, RandCorr, LowRankShift, Hilbert };

std::string kind_name(ProblemKind k);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::SpdLogUniform;
  std::size_t n = 2;
  double ncond = 1.0;   // SpdLogUniform
  std::size_t rank = 10;  // LowRankShift
  std::uint64_t seed = 0;
};

/// Repo-wide seeded stream: a 64-bit generator keyed by (seed, instance).
std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t instance = 0);

struct SpdInstance {
  SymMatrix a;
  SymMatrix oracle_root;  // Q D^{1/2} Q^T from the construction
};

/// A = Q D Q^T with Q a product of three random Householder reflectors and
/// log(lambda_i) = ((i - n)/(n - 1)) * ncond, i = 1..n.
SpdInstance gen_spd_loguniform(std::size_t n, double ncond, std::uint64_t seed);

/// Random correlation matrix: unit diagonal, eigenvalues scaled to sum n,
/// diagonal forced to one by Givens rotations (Bendel-Mickey).
SymMatrix gen_randcorr(std::size_t n, std::uint64_t seed);

/// A = I + beta U U^T with U n-by-k standard normal and beta uniform(0,1).
SymMatrix gen_lowrank_shift(std::size_t n, std::size_t k, std::uint64_t seed);

SymMatrix gen_hilbert(std::size_t n);

SymMatrix generate(const ProblemSpec& spec);

/// Ground-truth principal square root via spectral decomposition.
SymMatrix oracle_sqrt(const SymMatrix& a);

}  // namespace msqrt

#endif
