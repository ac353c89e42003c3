#include "qwick/random.hpp"

namespace qwick {

std::uint64_t trial_seed(std::uint64_t suite_seed, std::uint64_t trial) {
  std::uint64_t z = suite_seed * 0x9E3779B97F4A7C15ULL + trial + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

OneParticleVector random_vector(Rng& rng, int dim) {
  return OneParticleVector(random_tensor(rng, static_cast<std::size_t>(dim)));
}

Tensor random_tensor(Rng& rng, std::size_t size) {
  Tensor t(size);
  for (double& x : t) x = rng.normal();
  return t;
}

GradedVector random_graded(Rng& rng, const QContext& ctx, int top) {
  if (top < 0 || top > ctx.max_degree()) top = ctx.max_degree();
  GradedVector f(ctx);
  for (int n = 0; n <= top; ++n) f.component(n) = random_tensor(rng, ctx.degree_size(n));
  return f;
}

WickPolynomial random_field_polynomial(Rng& rng, int dim, double q, int max_order, int terms) {
  WickPolynomial sum;
  for (int t = 0; t < terms; ++t) {
    WickPolynomial product = WickPolynomial::identity(rng.normal());
    const int order = rng.integer(0, max_order);
    for (int k = 0; k < order; ++k) {
      product = compose(product, WickPolynomial::field(random_vector(rng, dim)), q);
    }
    sum += product;
  }
  return sum;
}

WickPolynomial random_word_polynomial(Rng& rng, int dim, int max_letters, int terms) {
  WickPolynomial sum;
  for (int t = 0; t < terms; ++t) {
    NormalWord w;
    const int creators = rng.integer(0, max_letters);
    const int annihilators = rng.integer(0, max_letters);
    for (int k = 0; k < creators; ++k) w.creators.push_back(random_vector(rng, dim));
    for (int k = 0; k < annihilators; ++k) w.annihilators.push_back(random_vector(rng, dim));
    sum.add(w, rng.normal());
  }
  return sum;
}

}  // namespace qwick
