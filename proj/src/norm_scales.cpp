#include "qwick/norm_scales.hpp"

#include <cmath>
#include <string>

#include "qwick/error.hpp"

namespace qwick {

WeightedSpace::WeightedSpace(QContext c, NormScale s, std::vector<double> weights)
    : ctx(c), scale(s), hplus_weights(std::move(weights)) {
  if (!(scale.r >= 1.0)) throw PreconditionError("NormScale: r >= 1 required");
  if (!hplus_weights.empty()) {
    if (static_cast<int>(hplus_weights.size()) != ctx.dim()) {
      throw std::invalid_argument("WeightedSpace: weight vector length must equal dim");
    }
    for (double w : hplus_weights) {
      if (!(w >= 1.0)) throw PreconditionError("WeightedSpace: H_+ weights must satisfy w_i >= 1");
    }
  }
}

std::vector<double> default_hplus_weights(int dim) {
  std::vector<double> w(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) w[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);
  return w;
}

double weighted_norm_sq(int n, std::span<const double> t, std::span<const double> weights,
                        double power) {
  double sum = 0.0;
  if (weights.empty()) {
    for (double x : t) sum += x * x;
    return sum;
  }
  Tensor index_weight{1.0};
  std::vector<double> factor(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) factor[i] = std::pow(weights[i], power);
  for (int k = 0; k < n; ++k) index_weight = tensor_product(index_weight, factor);
  if (index_weight.size() != t.size()) throw std::invalid_argument("weighted_norm_sq: size mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) sum += index_weight[i] * t[i] * t[i];
  return sum;
}

double test_degree_weight(int n, const NormScale& scale, double q) {
  const double base = scale.weight_base == WeightBase::abs_q ? std::abs(q) : q;
  return std::pow(scale.r, n) * std::pow(q_factorial(n, base), scale.alpha);
}

double g_norm(const GradedVector& f, const WeightedSpace& space) {
  if (space.scale.side != ScaleSide::test) throw std::invalid_argument("g_norm: dual-side scale given");
  if (!f.context().same_space(space.ctx)) throw std::invalid_argument("g_norm: context mismatch");
  double sum = 0.0;
  for (int n = 0; n <= f.max_degree(); ++n) {
    sum += weighted_norm_sq(n, f.component(n), space.hplus_weights, 1.0) *
           test_degree_weight(n, space.scale, f.context().q());
  }
  return std::sqrt(sum);
}

double f_dual_norm(const GradedVector& f, const WeightedSpace& space) {
  if (space.scale.side != ScaleSide::dual) throw std::invalid_argument("f_dual_norm: test-side scale given");
  if (!f.context().same_space(space.ctx)) throw std::invalid_argument("f_dual_norm: context mismatch");
  const double aq = std::abs(f.context().q());
  double sum = 0.0;
  for (int n = 0; n <= f.max_degree(); ++n) {
    const Tensor pf = apply_pq(n, f.component(n), f.context());
    sum += weighted_norm_sq(n, pf, space.hplus_weights, -1.0) * std::pow(space.scale.r, -n) *
           std::pow(q_factorial(n, aq), -space.scale.alpha);
  }
  return std::sqrt(sum);
}

GradedVector graded_tensor(const GradedVector& f, const GradedVector& g) {
  if (!f.context().same_space(g.context())) throw std::invalid_argument("graded_tensor: context mismatch");
  GradedVector out(f.context());
  for (int n = 0; n <= f.max_degree(); ++n) {
    Tensor& target = out.component(n);
    for (int i = 0; i <= n; ++i) {
      const Tensor piece = tensor_product(f.component(i), g.component(n - i));
      for (std::size_t k = 0; k < piece.size(); ++k) target[k] += piece[k];
    }
  }
  return out;
}

double embedding_residual(const GradedVector& f, const WeightedSpace& space) {
  if (space.scale.side != ScaleSide::test) {
    throw std::invalid_argument("embedding_residual: test-side scale required");
  }
  const double q = f.context().q();
  const double w = space.scale.weight_base == WeightBase::abs_q ? std::abs(q) : q;
  if (space.scale.alpha < 1.0) throw PreconditionError("embedding: alpha >= 1 required");
  const double r_min = std::max(1.0, std::pow(1.0 + w, 1.0 - space.scale.alpha));
  if (space.scale.r < r_min) {
    throw PreconditionError("embedding: r >= max{1, (1+q)^{1-alpha}} violated (r = " +
                            std::to_string(space.scale.r) + ", need " + std::to_string(r_min) + ")");
  }
  return std::max(0.0, q_norm(f) - g_norm(f, space));
}

double estimate_c1(double r, double s, double alpha, const QContext& ctx) {
  if (!(r >= 1.0 && r < s)) throw PreconditionError("estimate_c1: 1 <= r < s required");
  if (!(alpha >= 1.0)) throw PreconditionError("estimate_c1: alpha >= 1 required");
  const double r1 = 0.5 * (r + s);

  // C_2 = max_n (n+1) (r/r1)^n; the sequence is unimodal in n.
  const double rho = r / r1;
  double c2 = 1.0;
  double term = 1.0;
  for (int n = 1;; ++n) {
    const double next = term * rho * static_cast<double>(n + 1) / static_cast<double>(n);
    if (next <= term) break;
    term = next;
    c2 = term;
  }

  const double z = std::pow(r1 / s, 1.0 / alpha);
  const double aq = std::abs(ctx.q());
  double log_product = 0.0;
  double x = z;  // z |q|^i, with |q|^0 = 1
  while (x >= 1e-16) {
    log_product -= std::log1p(-x);
    x *= aq;
  }
  // Remaining factors: sum_{i >= I} -log(1 - x_i) <= 2 sum x_i for x_i <= 1/2.
  if (aq > 0.0) log_product += 2.0 * x / (1.0 - aq);
  const double b = std::exp(log_product) / (1.0 - z);
  return std::sqrt(c2 * std::pow(b, alpha));
}

InequalityCheck lemma53_check(int m, std::span<const double> f, int n, std::span<const double> g,
                              const QContext& ctx) {
  if (f.size() != ctx.degree_size(m) || g.size() != ctx.degree_size(n)) {
    throw std::invalid_argument("lemma53_check: tensor sizes do not match degrees");
  }
  const auto euclid = [](const Tensor& t) {
    double s = 0.0;
    for (double x : t) s += x * x;
    return std::sqrt(s);
  };
  const Tensor fg = tensor_product(f, g);
  InequalityCheck check;
  check.lhs = euclid(apply_pq(m + n, fg, ctx));
  check.rhs = q_binomial(m + n, m, std::abs(ctx.q())) * euclid(apply_pq(m, Tensor(f.begin(), f.end()), ctx)) *
              euclid(apply_pq(n, Tensor(g.begin(), g.end()), ctx));
  check.residual = std::max(0.0, check.lhs - check.rhs);
  return check;
}

double lemma53_residual(int m, std::span<const double> f, int n, std::span<const double> g,
                        const QContext& ctx) {
  return lemma53_check(m, f, n, g, ctx).residual;
}

RatioBound vage_ratio(const GradedVector& f, const GradedVector& g, double r, double s,
                      std::span<const double> hplus_weights) {
  if (!(r > s && s >= 1.0)) throw PreconditionError("vage_ratio: r > s >= 1 required");
  const QContext& ctx = f.context();
  const std::vector<double> w(hplus_weights.begin(), hplus_weights.end());
  const WeightedSpace at_r(ctx, NormScale{r, 2.0, WeightBase::abs_q, ScaleSide::dual}, w);
  const WeightedSpace at_s(ctx, NormScale{s, 2.0, WeightBase::abs_q, ScaleSide::dual}, w);
  const double denominator = f_dual_norm(f, at_s) * f_dual_norm(g, at_r);
  if (denominator == 0.0) throw std::invalid_argument("vage_ratio: zero denominator");
  return RatioBound{f_dual_norm(graded_tensor(f, g), at_r) / denominator, std::sqrt(r / (r - s))};
}

RatioBound product_ratio(const GradedVector& f, const GradedVector& g, double lo, double hi,
                         double alpha, std::span<const double> hplus_weights) {
  const QContext& ctx = f.context();
  const double c1 = estimate_c1(lo, hi, alpha, ctx);
  const std::vector<double> w(hplus_weights.begin(), hplus_weights.end());
  const WeightedSpace small(ctx, NormScale{lo, alpha, WeightBase::abs_q, ScaleSide::test}, w);
  const WeightedSpace large(ctx, NormScale{hi, alpha, WeightBase::abs_q, ScaleSide::test}, w);
  const double denominator = g_norm(f, large) * g_norm(g, large);
  if (denominator == 0.0) throw std::invalid_argument("product_ratio: zero denominator");
  return RatioBound{g_norm(graded_tensor(f, g), small) / denominator, c1};
}

double duality_residual(const GradedVector& f_test, const GradedVector& g_dual, double r,
                        double alpha, std::span<const double> hplus_weights) {
  if (!(alpha >= 1.0)) throw PreconditionError("duality: alpha >= 1 required");
  const QContext& ctx = f_test.context();
  const std::vector<double> w(hplus_weights.begin(), hplus_weights.end());
  const WeightedSpace test(ctx, NormScale{r, alpha, WeightBase::abs_q, ScaleSide::test}, w);
  const WeightedSpace dual(ctx, NormScale{r, alpha, WeightBase::abs_q, ScaleSide::dual}, w);
  return std::max(0.0, std::abs(q_inner(f_test, g_dual)) - g_norm(f_test, test) * f_dual_norm(g_dual, dual));
}

}  // namespace qwick
