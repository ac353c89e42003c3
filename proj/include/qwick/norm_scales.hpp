#pragma once

// Weighted Hilbert norms on the truncated Fock space.
//
//   test side:  ||F||^2 = sum_n ||f^(n)||^2_{H_+^{(x)n}} r^n ([n]_w!)^alpha,
//               w = q or |q| per the weight base;
//   dual side:  ||F||^2 = sum_n ||P_q^(n) f^(n)||^2_{H_-^{(x)n}} r^{-n} ([n]_{|q|}!)^{-alpha}.
//
// H_+ carries the diagonal weights w_i >= 1, ||phi||^2 = sum_i w_i phi_i^2, and
// H_- the reciprocal weights. An empty weight vector means H_+ = H_- = H.

#include <span>
#include <vector>

#include "qwick/fock.hpp"

namespace qwick {

enum class WeightBase { q, abs_q };
enum class ScaleSide { test, dual };

struct NormScale {
  /// r >= 1; the dual side uses r^{-n}.
  double r = 1.0;
  double alpha = 0.0;
  WeightBase weight_base = WeightBase::abs_q;
  ScaleSide side = ScaleSide::test;
};

struct WeightedSpace {
  QContext ctx;
  NormScale scale;
  std::vector<double> hplus_weights;

  WeightedSpace(QContext c, NormScale s, std::vector<double> weights = {});
};

/// Default H_+ weights (1, 2, ..., d).
std::vector<double> default_hplus_weights(int dim);

/// Sum over the multi-index of prod_k weight(i_k)^power * t(i)^2. Empty
/// weights mean all ones.
double weighted_norm_sq(int n, std::span<const double> t, std::span<const double> weights,
                        double power);

double g_norm(const GradedVector& f, const WeightedSpace& space);
double f_dual_norm(const GradedVector& f, const WeightedSpace& space);

/// Degree weight r^n ([n]_w!)^alpha of the test side.
double test_degree_weight(int n, const NormScale& scale, double q);

/// (F (x) G)^(n) = sum_i f^(i) (x) g^(n-i) for n <= N; higher degrees dropped.
GradedVector graded_tensor(const GradedVector& f, const GradedVector& g);

/// max(0, ||F||_{F_q} - ||F||_G). Requires the test side, alpha >= 1 and
/// r >= max{1, (1+w)^{1-alpha}} with w = q or |q| per the weight base;
/// violations throw PreconditionError.
double embedding_residual(const GradedVector& f, const WeightedSpace& space);

/// A valid constant C_1 with ||F (x) G||_{r} <= C_1 ||F||_{s} ||G||_{s} on the
/// test scales G_{|q|}(H_+, ., alpha), 1 <= r < s.
double estimate_c1(double r, double s, double alpha, const QContext& ctx);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  /// max(0, lhs - rhs)
  double residual = 0.0;
};

/// ||P(f (x) g)|| against [m+n choose m]_{|q|} ||P f|| ||P g||, Euclidean H.
InequalityCheck lemma53_check(int m, std::span<const double> f, int n, std::span<const double> g,
                              const QContext& ctx);
double lemma53_residual(int m, std::span<const double> f, int n, std::span<const double> g,
                        const QContext& ctx);

struct RatioBound {
  double ratio = 0.0;
  double bound = 0.0;
};

/// ||F (x) G||_{r} / (||F||_{s} ||G||_{r}) on the dual scales F_q(H_-, ., -2),
/// bound sqrt(r / (r - s)). `hplus_weights` are the weights of H_+; H_- uses
/// their reciprocals.
RatioBound vage_ratio(const GradedVector& f, const GradedVector& g, double r, double s,
                      std::span<const double> hplus_weights = {});

/// ||F (x) G||_{lo} / (||F||_{hi} ||G||_{hi}) on G_{|q|}(H_+, ., alpha), bound
/// estimate_c1(lo, hi, alpha).
RatioBound product_ratio(const GradedVector& f, const GradedVector& g, double lo, double hi,
                         double alpha, std::span<const double> hplus_weights = {});

/// max(0, |<F, G>| - ||F||_{G_{|q|}(H_+, r, alpha)} ||G||_{F_q(H_-, r^{-1}, -alpha)}),
/// where <F, G> = sum_n (P f^(n), g^(n)) is the Fock pairing.
double duality_residual(const GradedVector& f_test, const GradedVector& g_dual, double r,
                        double alpha, std::span<const double> hplus_weights = {});

}  // namespace qwick
