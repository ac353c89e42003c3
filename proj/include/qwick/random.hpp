#pragma once

// Seeded random inputs for the verification suites. Each trial draws from its
// own generator seeded by (suite seed, trial index), so results do not depend
// on how trials are scheduled across workers.

#include <cstdint>
#include <random>

#include "qwick/wick_algebra.hpp"

namespace qwick {

/// splitmix64 finalizer applied to the combined pair.
std::uint64_t trial_seed(std::uint64_t suite_seed, std::uint64_t trial);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_trial(std::uint64_t suite_seed, std::uint64_t trial) {
    return Rng(trial_seed(suite_seed, trial));
  }

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  /// Uniform on lo..hi inclusive.
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

OneParticleVector random_vector(Rng& rng, int dim);
Tensor random_tensor(Rng& rng, std::size_t size);

/// Standard-normal entries in degrees 0..top (top < 0 means max_degree).
GradedVector random_graded(Rng& rng, const QContext& ctx, int top = -1);

/// Linear combination of `terms` operator products <omega,f_1>...<omega,f_k>
/// with k <= max_order, brought to normal order; an element of the algebra
/// generated by the fields.
WickPolynomial random_field_polynomial(Rng& rng, int dim, double q, int max_order, int terms);

/// Linear combination of arbitrary normal words with up to `max_letters`
/// creators and annihilators each.
WickPolynomial random_word_polynomial(Rng& rng, int dim, int max_letters, int terms);

}  // namespace qwick
