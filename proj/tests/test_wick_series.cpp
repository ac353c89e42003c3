#include <cmath>

#include "doctest.h"
#include "qwick/error.hpp"
#include "qwick/random.hpp"
#include "qwick/wick_series.hpp"

using namespace qwick;

namespace {

const double kQGrid[] = {-0.9, -0.5, 0.0, 0.3, 0.5, 0.9};

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// c * e^{(x) k} at every degree k <= N, with c = coeff(k).
template <class F>
GradedVector single_mode(const QContext& ctx, F coeff) {
  GradedVector out(ctx);
  for (int k = 0; k <= ctx.max_degree(); ++k) out.component(k)[0] = coeff(k);
  return out;
}

double dual_norm(const GradedVector& f, double scale, const std::vector<double>& weights = {}) {
  return f_dual_norm(f, WeightedSpace(f.context(), NormScale{scale, 2.0, WeightBase::abs_q, ScaleSide::dual}, weights));
}

GradedVector rescaled_to(const GradedVector& f, double target) {
  return (target / dual_norm(f, 1.0)) * f;
}

}  // namespace

TEST_CASE("wick_power") {
  const QContext ctx(0.4, 1, 6);
  Rng rng(1);
  const GradedVector f = random_graded(rng, ctx);
  CHECK(wick_power(f, 0) == GradedVector::vacuum(ctx));
  CHECK(wick_power(f, 1) == f);
  const double t = 0.7;
  GradedVector base = GradedVector::vacuum(ctx);
  base.component(1)[0] = t;
  for (int n = 0; n <= 8; ++n) {
    const GradedVector expected = single_mode(ctx, [&](int k) { return k <= n ? binomial(n, k) * std::pow(t, k) : 0.0; });
    CHECK((wick_power(base, n) - expected).max_abs() <= 1e-12 * std::max(1.0, expected.max_abs()));
  }
  CHECK_THROWS(wick_power(f, -1));
}

TEST_CASE("iterated Vage bound on tensor powers") {
  const double r = 2.0;
  const double s = 1.0;
  const double amplification = std::sqrt(r / (r - s));
  for (double q : kQGrid) {
    const QContext ctx(q, 2, 5);
    const auto weights = default_hplus_weights(2);
    for (int trial = 0; trial < 10; ++trial) {
      Rng rng = Rng::for_trial(61, static_cast<std::uint64_t>(trial));
      const GradedVector f = random_graded(rng, ctx);
      const double fs = dual_norm(f, s, weights);
      for (int n = 1; n <= 6; ++n) {
        const double lhs = dual_norm(wick_power(f, n), r, weights);
        CHECK(lhs <= std::pow(amplification, n - 1) * std::pow(fs, n) * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("SeriesSpec validation") {
  CHECK_NOTHROW(SeriesSpec::geometric(50).validate());
  CHECK_NOTHROW(SeriesSpec::exponential(50, 3.0).validate());
  CHECK_THROWS_AS((SeriesSpec{{1.0}, 0.0}).validate(), PreconditionError);
  CHECK_THROWS((SeriesSpec{{1.0, NAN}, 1.0}).validate());
  CHECK_THROWS((SeriesSpec{{}, 1.0}).validate());
  // 3^n claimed with radius 1.
  SeriesSpec fast;
  fast.radius = 1.0;
  for (int n = 0; n < 20; ++n) fast.coefficients.push_back(std::pow(3.0, n));
  CHECK_THROWS_AS(fast.validate(), PreconditionError);
  CHECK_NOTHROW((SeriesSpec{{0.0, 0.0, 0.0, 1.0}, 1.0}).validate());
}

TEST_CASE("certificate for R = 1 and s-norm 0.5") {
  const QContext ctx(0.5, 2, 4);
  Rng rng(3);
  GradedVector f = random_graded(rng, ctx);
  f.component(0)[0] = 0.1;
  f = rescaled_to(f, 0.5);
  const ConvergenceCertificate cert = certify_radius(f, SeriesSpec::geometric(100), 1.0);
  CHECK(cert.s == 1.0);
  CHECK(cert.norm_s == doctest::Approx(0.5));
  CHECK(cert.epsilon == doctest::Approx(0.5));
  CHECK(cert.r > 4.0 / 3.0);
  CHECK(cert.r == doctest::Approx(1.5));
  CHECK(cert.contraction == doctest::Approx(std::sqrt(3.0) * 0.5));
  CHECK(cert.contraction < 1.0);
  // r = 2 is also valid, with contraction sqrt(2)/2.
  CHECK(std::sqrt(2.0 / (2.0 - 1.0)) * (1.0 - cert.epsilon) == doctest::Approx(0.70710678118654752));
}

TEST_CASE("certificate edge cases") {
  const QContext ctx(0.3, 2, 4);
  const GradedVector c_omega = 0.4 * GradedVector::vacuum(ctx);
  const ConvergenceCertificate cert = certify_radius(c_omega, SeriesSpec::geometric(30), 1.0);
  CHECK(cert.norm_s == doctest::Approx(0.4));
  CHECK(cert.contraction == doctest::Approx(std::sqrt(cert.r / (cert.r - cert.s)) * 0.4));

  CHECK_THROWS_AS(certify_radius(1.5 * GradedVector::vacuum(ctx), SeriesSpec::geometric(30), 1.0), PreconditionError);

  Rng rng(4);
  GradedVector big = random_graded(rng, ctx);
  big.component(0)[0] = 0.0;
  big = rescaled_to(big, 3.0);
  SeriesOptions strict;
  strict.grow_scale = false;
  CHECK_THROWS_AS(certify_radius(big, SeriesSpec::geometric(30), 1.0, strict), PreconditionError);
  const ConvergenceCertificate grown = certify_radius(big, SeriesSpec::geometric(30), 1.0);
  CHECK(grown.s > 1.0);
  CHECK(grown.norm_s < 0.99);
  CHECK(grown.contraction < 1.0);
  CHECK(grown.r > grown.s);
}

TEST_CASE("identity series returns its argument") {
  const QContext ctx(0.5, 2, 4);
  Rng rng(6);
  const GradedVector f = rescaled_to(random_graded(rng, ctx), 0.5);
  const SeriesSpec linear{{0.0, 1.0}, 1.0};
  const SeriesResult out = wick_series(f, linear, certify_radius(f, linear, 1.0));
  CHECK((out.value - f).max_abs() == 0.0);
}

TEST_CASE("geometric series of a single mode") {
  for (double q : kQGrid) {
    const QContext ctx(q, 1, 6);
    const GradedVector f = GradedVector::one_particle(ctx, OneParticleVector{0.5});
    const SeriesSpec spec = SeriesSpec::geometric(200);
    const ConvergenceCertificate cert = certify_radius(f, spec, 1.0);
    const SeriesResult out = wick_series(f, spec, cert);
    const GradedVector expected = single_mode(ctx, [](int k) { return std::pow(0.5, k); });
    CHECK((out.value - expected).max_abs() <= 1e-14);
    CHECK(out.tail_bound < 1e-14);
  }
}

TEST_CASE("partial sums decay at the certified rate") {
  for (double q : kQGrid) {
    const QContext ctx(q, 2, 5);
    const SeriesOptions options{default_hplus_weights(2)};
    for (int trial = 0; trial < 5; ++trial) {
      Rng rng = Rng::for_trial(71, static_cast<std::uint64_t>(trial));
      GradedVector f = random_graded(rng, ctx);
      f.component(0)[0] *= 0.2;
      f = (0.5 / dual_norm(f, 1.0, options.hplus_weights)) * f;
      const SeriesSpec spec = SeriesSpec::geometric(400);
      const ConvergenceCertificate cert = certify_radius(f, spec, 1.0, options);
      CHECK(cert.contraction < 1.0);
      const SeriesResult out = wick_series(f, spec, cert, options);
      const double amplification = std::sqrt(cert.r / (cert.r - cert.s));
      for (std::size_t n = 1; n < out.increment_norms.size(); ++n) {
        const double bound = std::pow(cert.contraction, static_cast<double>(n)) / amplification;
        CHECK(out.increment_norms[n] <= bound * (1.0 + 1e-9));
      }
      const GradedVector closed = wick_inverse(GradedVector::vacuum(ctx) - f);
      CHECK((out.value - closed).max_abs() <= 1e-10 * std::max(1.0, closed.max_abs()));
    }
  }
}

TEST_CASE("tail that cannot reach tolerance within the term cap") {
  const QContext ctx(0.5, 1, 3);
  const GradedVector f = GradedVector::one_particle(ctx, OneParticleVector{0.5});
  const SeriesSpec spec = SeriesSpec::geometric(400);
  const ConvergenceCertificate cert = certify_radius(f, spec, 1.0);
  SeriesOptions few;
  few.max_terms = 5;
  CHECK_THROWS_AS(wick_series(f, spec, cert, few), std::runtime_error);
}

TEST_CASE("Wick exponential") {
  for (double q : kQGrid) {
    const QContext ctx(q, 1, 6);
    CHECK(wick_exp(GradedVector(ctx)) == GradedVector::vacuum(ctx));
    const double t = 0.8;
    const GradedVector f = GradedVector::one_particle(ctx, OneParticleVector{t});
    const GradedVector expected = single_mode(ctx, [&](int k) { return std::pow(t, k) / factorial(k); });
    CHECK((wick_exp(f) - expected).max_abs() <= 1e-13);

    const double a = 0.3;
    const double b = -1.1;
    const GradedVector lhs = wick_exp(GradedVector::one_particle(ctx, OneParticleVector{a + b}));
    const GradedVector rhs = graded_tensor(wick_exp(GradedVector::one_particle(ctx, OneParticleVector{a})),
                                           wick_exp(GradedVector::one_particle(ctx, OneParticleVector{b})));
    CHECK((lhs - rhs).max_abs() <= 1e-10);
  }
  const QContext ctx(0.4, 2, 5);
  Rng rng(8);
  GradedVector f = random_graded(rng, ctx);
  f.component(0)[0] = 0.0;
  const GradedVector product = graded_tensor(wick_exp(f), wick_exp(-1.0 * f));
  CHECK((product - GradedVector::vacuum(ctx)).max_abs() <= 1e-10);
}

TEST_CASE("Wick inverse") {
  const QContext ctx(0.5, 1, 6);
  CHECK(wick_inverse(GradedVector::vacuum(ctx)) == GradedVector::vacuum(ctx));
  const double t = 0.6;
  GradedVector f = GradedVector::vacuum(ctx);
  f.component(1)[0] = t;
  const GradedVector expected = single_mode(ctx, [&](int k) { return std::pow(-t, k); });
  CHECK((wick_inverse(f) - expected).max_abs() <= 1e-15);
  CHECK_THROWS_AS(wick_inverse(GradedVector::one_particle(ctx, OneParticleVector{1.0})), PreconditionError);

  for (double q : kQGrid) {
    const QContext c(q, 2, 5);
    for (int trial = 0; trial < 10; ++trial) {
      Rng rng = Rng::for_trial(81, static_cast<std::uint64_t>(trial));
      GradedVector g = random_graded(rng, c);
      g.component(0)[0] = rng.uniform(0.5, 2.0);
      const GradedVector inv = wick_inverse(g);
      CHECK((graded_tensor(g, inv) - GradedVector::vacuum(c)).max_abs() <= 1e-12 * g.max_abs() * inv.max_abs() * 6);
      CHECK((graded_tensor(inv, g) - GradedVector::vacuum(c)).max_abs() <= 1e-12 * g.max_abs() * inv.max_abs() * 6);
    }
  }
}
