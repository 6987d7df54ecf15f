#ifndef MSQRT_VERIFY_HPP
#define MSQRT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "msqrt/matrix.hpp"

namespace msqrt {

struct PropertyResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_slack = 0.0;  // most adverse lhs - rhs seen (negative is margin)
  bool pass() const { return trials > 0 && failures == 0; }
};

/// Inversion/translation/spectral-radius relations on random SPD quadruples.
/// With degenerate set, uses X == Y so all distances vanish.
PropertyResult verify_lemma_suite(int trials, std::size_t max_n, std::uint64_t seed,
                                  bool degenerate = false);

/// delta_T(G(X), G(Y)) <= gamma * delta_T(X, Y) + 1e-10 for X, Y sampled from
/// the invariant interval and random positive mu.
PropertyResult verify_contraction(int trials, std::size_t max_n, std::uint64_t seed);

/// delta_T(X_k, X*) <= gamma^k * delta_T(X_0, X*) * (1 + 1e-8) along full
/// FPM1 runs on well-conditioned instances.
PropertyResult verify_envelope(int runs, std::size_t max_n, std::uint64_t seed);

/// Sampled interval points satisfy lower <= X <= upper.
PropertyResult verify_interval(int trials, std::size_t n, std::uint64_t seed);

std::vector<PropertyResult> verify_all(std::uint64_t seed);

}  // namespace msqrt

#endif
