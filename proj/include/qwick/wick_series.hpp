#pragma once

// Tensor (Wick) power series on the dual scales F_q(H_-, r^{-1}, -2).

#include <span>
#include <vector>

#include "qwick/norm_scales.hpp"

namespace qwick {

/// Coefficients a_0..a_M of phi(z) = sum a_n z^n, treated as the complete
/// series, together with the radius R of absolute convergence.
struct SeriesSpec {
  std::vector<double> coefficients;
  double radius = 1.0;

  /// Rejects non-finite data, R <= 0, and prefixes of at least 12 terms whose
  /// terms |a_n| (R/2)^n do not decay over their final third (evidence of a
  /// smaller radius).
  void validate() const;

  /// a_n = 1 for n <= terms.
  static SeriesSpec geometric(int terms);
  /// a_n = 1/n! for n <= terms, with the given radius.
  static SeriesSpec exponential(int terms, double radius);
};

struct ConvergenceCertificate {
  double s = 1.0;
  /// ||F|| on F_q(H_-, s^{-1}, -2).
  double norm_s = 0.0;
  /// R - norm_s.
  double epsilon = 0.0;
  double r = 1.0;
  /// sqrt(r/(r-s)) (R - epsilon) / R, strictly below 1.
  double contraction = 0.0;
  double radius = 1.0;
};

struct SeriesOptions {
  std::vector<double> hplus_weights;
  double tol = 1e-14;
  int max_terms = 400;
  /// s is doubled at most this many times while searching for ||F||_s < R.
  int max_scale_doublings = 60;
  /// When false, ||F||_s0 >= 0.99 R is an error instead of a reason to grow s.
  bool grow_scale = true;
};

/// F^{(x) n}; F^{(x) 0} = Omega.
GradedVector wick_power(const GradedVector& f, int n);

/// Chooses s (growing from s0) with ||F||_s < 0.99 R, then the first r on the grid
/// s * {1.1, 1.25, 1.5, 2, 4, 8} with sqrt(r/(r-s)) ||F||_s <= 0.99 R, falling back
/// to the closed-form threshold. Throws PreconditionError when |f^(0)| >= R, or
/// when no s within the doubling cap works.
ConvergenceCertificate certify_radius(const GradedVector& f, const SeriesSpec& spec, double s0 = 1.0,
                                      const SeriesOptions& options = {});

struct SeriesResult {
  GradedVector value;
  int terms_used = 0;
  /// ||a_n F^{(x) n}||_r for each accumulated n.
  std::vector<double> increment_norms;
  /// sum_{n > terms_used} |a_n| (contraction R)^n at exit.
  double tail_bound = 0.0;
};

/// Partial sums of sum a_n F^{(x) n}, stopped once the geometric tail bound on
/// the certified r-scale drops below options.tol.
SeriesResult wick_series(const GradedVector& f, const SeriesSpec& spec,
                         const ConvergenceCertificate& cert, const SeriesOptions& options = {});

/// sum F^{(x) n} / n! with R = ||F||_1 + 1.
GradedVector wick_exp(const GradedVector& f, const SeriesOptions& options = {});

/// (f^(0))^{-1} sum_n (Omega - F / f^(0))^{(x) n}; the sum is finite on the
/// truncation. Throws PreconditionError when f^(0) = 0.
GradedVector wick_inverse(const GradedVector& f);

}  // namespace qwick
