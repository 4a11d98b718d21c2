#pragma once

#include <cstdint>
#include <random>

#include "toruskit/linalg.hpp"

namespace toruskit {

/// Seeded generator shared by every sampler. Results are bit-reproducible
/// for a given seed and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::uint64_t next() { return engine_(); }

  Mat normal_matrix(int rows, int cols);
  CMat complex_normal_matrix(int rows, int cols);
  Vec normal_vector(int n) { return normal_matrix(n, 1); }
  CVec complex_normal_vector(int n) { return complex_normal_matrix(n, 1); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Derives an independent stream seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Haar-distributed orthogonal matrix: QR of a standard normal matrix with
/// the diagonal of R made positive.
Mat haar_orthogonal(int n, Rng& rng);

/// Symmetric positive definite matrix Q diag(d) Q^T with log-uniform
/// spectrum in [1, max_condition].
Mat random_spd(int n, double max_condition, Rng& rng);

}  // namespace toruskit
