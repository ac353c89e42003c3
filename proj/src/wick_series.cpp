#include "qwick/wick_series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qwick/error.hpp"

namespace qwick {

void SeriesSpec::validate() const {
  if (coefficients.empty()) throw std::invalid_argument("SeriesSpec: no coefficients");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw PreconditionError("SeriesSpec: radius R > 0 required");
  }
  for (double a : coefficients) {
    if (!std::isfinite(a)) throw std::invalid_argument("SeriesSpec: non-finite coefficient");
  }
  // Short prefixes say nothing about growth.
  const std::size_t count = coefficients.size();
  if (count < 12) return;
  const double rho = 0.5 * radius;
  const std::size_t split = 2 * count / 3;
  double early = 0.0;
  double late = 0.0;
  double power = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double term = std::abs(coefficients[n]) * power;
    (n < split ? early : late) = std::max(n < split ? early : late, term);
    power *= rho;
  }
  if (late > 0.0 && late >= early) {
    throw PreconditionError("SeriesSpec: coefficients do not converge absolutely inside radius R");
  }
}

SeriesSpec SeriesSpec::geometric(int terms) {
  return SeriesSpec{std::vector<double>(static_cast<std::size_t>(terms + 1), 1.0), 1.0};
}

SeriesSpec SeriesSpec::exponential(int terms, double radius) {
  SeriesSpec spec;
  spec.radius = radius;
  double a = 1.0;
  for (int n = 0; n <= terms; ++n) {
    spec.coefficients.push_back(a);
    a /= static_cast<double>(n + 1);
  }
  return spec;
}

GradedVector wick_power(const GradedVector& f, int n) {
  if (n < 0) throw std::invalid_argument("wick_power: n must be nonnegative");
  GradedVector result = GradedVector::vacuum(f.context());
  for (int k = 0; k < n; ++k) result = graded_tensor(result, f);
  return result;
}

namespace {

double dual_norm_at(const GradedVector& f, double scale, const std::vector<double>& weights) {
  const WeightedSpace space(f.context(), NormScale{scale, 2.0, WeightBase::abs_q, ScaleSide::dual},
                            weights);
  return f_dual_norm(f, space);
}

constexpr double kMargin = 0.99;

}  // namespace

ConvergenceCertificate certify_radius(const GradedVector& f, const SeriesSpec& spec, double s0,
                                      const SeriesOptions& options) {
  spec.validate();
  if (!(s0 >= 1.0)) throw PreconditionError("certify_radius: s >= 1 required");
  const double radius = spec.radius;
  const double f0 = f.component(0)[0];
  if (!(std::abs(f0) < radius)) {
    throw PreconditionError("certify_radius: |f^(0)| < R violated (|f^(0)| = " +
                            std::to_string(std::abs(f0)) + ", R = " + std::to_string(radius) + ")");
  }

  ConvergenceCertificate cert;
  cert.radius = radius;
  cert.s = s0;
  cert.norm_s = dual_norm_at(f, cert.s, options.hplus_weights);
  for (int k = 0; cert.norm_s >= kMargin * radius; ++k) {
    if (!options.grow_scale) {
      throw PreconditionError("certify_radius: ||F||_s < R violated at s = " + std::to_string(s0));
    }
    if (k >= options.max_scale_doublings) {
      throw PreconditionError("certify_radius: no s with ||F||_s < R found; not certifiable at desk scale");
    }
    cert.s *= 2.0;
    cert.norm_s = dual_norm_at(f, cert.s, options.hplus_weights);
  }
  cert.epsilon = radius - cert.norm_s;

  const auto amplification = [&](double r) { return std::sqrt(r / (r - cert.s)); };
  const double target = kMargin * radius;
  constexpr std::array<double, 6> grid{1.1, 1.25, 1.5, 2.0, 4.0, 8.0};
  cert.r = 0.0;
  for (double factor : grid) {
    const double r = cert.s * factor;
    if (amplification(r) * cert.norm_s <= target) {
      cert.r = r;
      break;
    }
  }
  if (cert.r == 0.0) {
    // sqrt(r/(r-s)) <= K  <=>  r >= s K^2 / (K^2 - 1).
    const double k2 = (target / cert.norm_s) * (target / cert.norm_s);
    cert.r = cert.s * k2 / (k2 - 1.0) * (1.0 + 1e-9);
  }
  cert.contraction = amplification(cert.r) * cert.norm_s / radius;
  if (!(cert.contraction < 1.0)) {
    throw std::logic_error("certify_radius: constructed contraction is not below 1");
  }
  return cert;
}

SeriesResult wick_series(const GradedVector& f, const SeriesSpec& spec,
                         const ConvergenceCertificate& cert, const SeriesOptions& options) {
  spec.validate();
  if (!(cert.contraction < 1.0) || !(cert.r > cert.s) || cert.radius != spec.radius) {
    throw PreconditionError("wick_series: certificate is not valid for this series");
  }
  const double b = cert.contraction * cert.radius;
  const auto& a = spec.coefficients;
  const std::size_t count = a.size();

  // tail[n] = sum_{k >= n} |a_k| b^k
  std::vector<double> tail(count + 1, 0.0);
  for (std::size_t n = count; n-- > 0;) {
    tail[n] = tail[n + 1] + std::abs(a[n]) * std::pow(b, static_cast<double>(n));
  }

  SeriesResult result{GradedVector(f.context()), 0, {}, tail[0]};
  GradedVector power = GradedVector::vacuum(f.context());
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) power = graded_tensor(power, f);
    const GradedVector increment = a[n] * power;
    result.value += increment;
    result.increment_norms.push_back(dual_norm_at(increment, cert.r, options.hplus_weights));
    result.terms_used = static_cast<int>(n + 1);
    result.tail_bound = tail[n + 1];
    if (result.tail_bound < options.tol) return result;
    if (result.terms_used >= options.max_terms) break;
  }
  if (result.tail_bound >= options.tol) {
    throw std::runtime_error("wick_series: tail bound " + std::to_string(result.tail_bound) +
                             " did not fall below tolerance within " +
                             std::to_string(result.terms_used) + " terms");
  }
  return result;
}

GradedVector wick_exp(const GradedVector& f, const SeriesOptions& options) {
  const double radius = dual_norm_at(f, 1.0, options.hplus_weights) + 1.0;
  const SeriesSpec spec = SeriesSpec::exponential(options.max_terms, radius);
  const ConvergenceCertificate cert = certify_radius(f, spec, 1.0, options);
  return wick_series(f, spec, cert, options).value;
}

GradedVector wick_inverse(const GradedVector& f) {
  const double f0 = f.component(0)[0];
  if (f0 == 0.0) throw PreconditionError("wick_inverse: f^(0) != 0 required for invertibility");
  GradedVector defect = GradedVector::vacuum(f.context()) - (1.0 / f0) * f;
  defect.component(0)[0] = 0.0;

  // The defect has no vacuum part, so its tensor powers vanish beyond degree N.
  GradedVector sum = GradedVector::vacuum(f.context());
  GradedVector power = sum;
  for (int n = 1; n <= f.max_degree(); ++n) {
    power = graded_tensor(power, defect);
    sum += power;
  }
  return (1.0 / f0) * sum;
}

}  // namespace qwick
