#pragma once

// Normal-ordered words a^+(f_1)...a^+(f_n) a^-(g_1)...a^-(g_m), their real
// linear span W, the Wick product, ordinary operator products brought back to
// normal order, and the map P -> P Omega into the Fock space.

#include <map>
#include <span>
#include <vector>

#include "qwick/fock.hpp"

namespace qwick {

struct NormalWord {
  std::vector<OneParticleVector> creators;
  std::vector<OneParticleVector> annihilators;

  [[nodiscard]] bool is_identity() const { return creators.empty() && annihilators.empty(); }
  [[nodiscard]] int length() const { return static_cast<int>(creators.size() + annihilators.size()); }

  auto operator<=>(const NormalWord&) const = default;
  bool operator==(const NormalWord&) const = default;
};

struct WickTerm {
  double coefficient = 1.0;
  NormalWord word;
};

/// u <> v: creators of u then v, annihilators of u then v, with coefficient
/// q^{k m} where m = #annihilators(u) and k = #creators(v).
WickTerm wick_mul(const NormalWord& u, const NormalWord& v, double q);

/// Word-wise adjoint: creators and annihilators swap roles, order reversed.
NormalWord adjoint(const NormalWord& w);

/// Finite real combination of normal words. Terms merge on exact structural
/// equality of their vectors; zero coefficients are never stored.
class WickPolynomial {
 public:
  using TermMap = std::map<NormalWord, double>;

  WickPolynomial() = default;

  static WickPolynomial identity(double coefficient = 1.0);
  static WickPolynomial word(NormalWord w, double coefficient = 1.0);
  static WickPolynomial creator(const OneParticleVector& phi);
  static WickPolynomial annihilator(const OneParticleVector& phi);
  /// <omega, phi> = a^+(phi) + a^-(phi).
  static WickPolynomial field(const OneParticleVector& phi);

  void add(const NormalWord& w, double coefficient);

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] double coefficient(const NormalWord& w) const;

  /// Largest number of creators in any word.
  [[nodiscard]] int max_creators() const;
  [[nodiscard]] int max_length() const;
  [[nodiscard]] double max_abs_coefficient() const;

  WickPolynomial& operator+=(const WickPolynomial& other);
  WickPolynomial& operator-=(const WickPolynomial& other);
  WickPolynomial& operator*=(double c);

  friend WickPolynomial operator+(WickPolynomial a, const WickPolynomial& b) { return a += b; }
  friend WickPolynomial operator-(WickPolynomial a, const WickPolynomial& b) { return a -= b; }
  friend WickPolynomial operator*(double c, WickPolynomial a) { return a *= c; }

  bool operator==(const WickPolynomial&) const = default;

 private:
  TermMap terms_;
};

/// Bilinear extension of the word Wick product.
WickPolynomial wick_mul(const WickPolynomial& a, const WickPolynomial& b, double q);

/// Ordinary operator product a * b, normal ordered with
/// a^-(g) a^+(f) = q a^+(f) a^-(g) + (g, f).
WickPolynomial compose(const WickPolynomial& a, const WickPolynomial& b, double q);

WickPolynomial adjoint(const WickPolynomial& p);

/// max over words of |coefficient difference|, zero where both are absent.
double max_coefficient_difference(const WickPolynomial& a, const WickPolynomial& b);

/// Evaluates each word as the composed operator on the truncated Fock space.
GradedVector apply_to_fock(const NormalWord& w, const GradedVector& f);
GradedVector apply_to_fock(const WickPolynomial& p, const GradedVector& f);

/// <:omega^{(x) n}:, f_1 (x) ... (x) f_n> by the three-term recursion, with the
/// contraction a^-(f_1) f_2 (x) ... (x) f_n expanded into its n-1 terms.
WickPolynomial wick_monomial(std::span<const OneParticleVector> fs, double q);

/// <omega, f_1> <> ... <> <omega, f_n>. Equals wick_monomial by the
/// orthogonalization/Wick-product correspondence; kept as a separate route.
WickPolynomial wick_product_of_fields(std::span<const OneParticleVector> fs, double q);

/// mu(P) = (P Omega, Omega). Throws std::out_of_range if some word creates more
/// than N particles.
double vacuum_expectation(const WickPolynomial& p, const QContext& ctx);

struct MomentReport {
  int order = 0;
  double value = 0.0;
  double oracle_value = 0.0;
  double residual = 0.0;
};

/// mu(<omega, phi>^k) by k field applications to Omega, against
/// ||phi||^k sum_pairings q^{crossings}. The field powers run on a truncation of
/// degree floor(k/2), which is exact for the vacuum component.
MomentReport moment(const OneParticleVector& phi, int k, const QContext& ctx);

struct L2Inner {
  /// (P1 Omega, P2 Omega) in the q-Fock space.
  double value = 0.0;
  /// mu(P2^* P1) computed in the word algebra.
  double algebra_value = 0.0;
  double residual = 0.0;
};

L2Inner l2_inner(const WickPolynomial& p1, const WickPolynomial& p2, const QContext& ctx);

/// Coefficients c_0..c_K with P = sum_k c_k <omega, e>^k (ordinary powers),
/// for P whose words all use the single vector e. Throws if P is not such a
/// polynomial.
std::vector<double> single_mode_coefficients(const WickPolynomial& p, const OneParticleVector& e,
                                             double q, double tol = 1e-9);

/// Coefficients of the q-Hermite polynomial from H_0 = 1, H_1 = x,
/// H_{n+1} = x H_n - [n]_q H_{n-1}.
std::vector<double> q_hermite_coefficients(int n, double q);

}  // namespace qwick
