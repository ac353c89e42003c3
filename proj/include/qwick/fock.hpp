#pragma once

// The truncated q-Fock space over H = R^d.
//
// A degree-n tensor is a dense array of length d^n in row-major multi-index
// order: index = sum_k i_k d^{n-1-k}. Degree 0 is a single scalar.

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "qwick/qcombinatorics.hpp"

namespace qwick {

using Tensor = std::vector<double>;

inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Deformation parameter, one-particle dimension, truncation degree, tolerance.
class QContext {
 public:
  QContext(double q, int dim, int max_degree, double tol = 1e-12);

  [[nodiscard]] double q() const { return q_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int max_degree() const { return max_degree_; }
  [[nodiscard]] double tol() const { return tol_; }

  /// d^n.
  [[nodiscard]] std::size_t degree_size(int n) const;
  /// Offset of the degree-n block in the flattened basis (Omega first).
  [[nodiscard]] std::size_t degree_offset(int n) const;
  /// sum_{n <= N} d^n.
  [[nodiscard]] std::size_t total_size() const { return degree_offset(max_degree_ + 1); }

  [[nodiscard]] QContext with_max_degree(int max_degree) const;
  [[nodiscard]] QContext with_q(double q) const;

  /// Same q, d and N. The tolerance is not part of the identity of the space.
  [[nodiscard]] bool same_space(const QContext& other) const;

  bool operator==(const QContext&) const = default;

 private:
  double q_;
  int dim_;
  int max_degree_;
  double tol_;
};

struct OneParticleVector {
  std::vector<double> entries;

  OneParticleVector() = default;
  explicit OneParticleVector(std::vector<double> e) : entries(std::move(e)) {}
  OneParticleVector(std::initializer_list<double> e) : entries(e) {}

  static OneParticleVector unit(int dim, int i);

  [[nodiscard]] int dim() const { return static_cast<int>(entries.size()); }
  double operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }

  auto operator<=>(const OneParticleVector&) const = default;
  bool operator==(const OneParticleVector&) const = default;
};

double dot(const OneParticleVector& a, const OneParticleVector& b);
double norm(const OneParticleVector& a);

/// Element of the truncated Fock space: components f^(0), ..., f^(N).
class GradedVector {
 public:
  explicit GradedVector(QContext ctx);

  static GradedVector vacuum(QContext ctx);
  /// The degree-1 vector phi.
  static GradedVector one_particle(QContext ctx, const OneParticleVector& phi);
  /// f_1 (x) ... (x) f_n placed at degree n.
  static GradedVector elementary(QContext ctx, std::span<const OneParticleVector> factors);

  [[nodiscard]] const QContext& context() const { return ctx_; }
  [[nodiscard]] int max_degree() const { return ctx_.max_degree(); }

  Tensor& component(int n);
  [[nodiscard]] const Tensor& component(int n) const;

  GradedVector& operator+=(const GradedVector& other);
  GradedVector& operator-=(const GradedVector& other);
  GradedVector& operator*=(double c);

  friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
  friend GradedVector operator-(GradedVector a, const GradedVector& b) { return a -= b; }
  friend GradedVector operator*(double c, GradedVector a) { return a *= c; }

  /// Largest absolute entry over all degrees.
  [[nodiscard]] double max_abs() const;
  /// Plain Euclidean norm of the concatenated components.
  [[nodiscard]] double euclidean_norm() const;

  [[nodiscard]] Eigen::VectorXd flatten() const;
  static GradedVector unflatten(QContext ctx, const Eigen::VectorXd& v);

  bool operator==(const GradedVector&) const = default;

 private:
  QContext ctx_;
  std::vector<Tensor> components_;
};

/// e_{i_1} (x) ... (x) e_{i_n} expressed through its flat index.
std::vector<int> decode_multi_index(std::size_t index, int n, int dim);
std::size_t encode_multi_index(std::span<const int> digits, int dim);

/// Tensor product of plain tensors.
Tensor tensor_product(std::span<const double> a, std::span<const double> b);
Tensor tensor_power(const OneParticleVector& phi, int n);

/// Sparse matrix of P_q^{(n)} on (R^d)^{(x) n}: the sum over S_n of
/// q^{inv(pi)} times the permutation action, with coincident entries merged.
class PqOperator {
 public:
  PqOperator(int n, int dim, double q, int cap = kDefaultPermutationCap);

  /// Shared memoized instance for (n, dim, q). Safe for concurrent use.
  static std::shared_ptr<const PqOperator> cached(int n, int dim, double q);

  [[nodiscard]] int degree() const { return n_; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }

  [[nodiscard]] Tensor apply(std::span<const double> t) const;
  [[nodiscard]] Eigen::MatrixXd dense() const;

 private:
  int n_;
  std::size_t size_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> columns_;
  std::vector<double> values_;
};

/// P_q^{(n)} t, via the memoized operator.
Tensor apply_pq(int n, std::span<const double> t, const QContext& ctx);

/// Sum_n (P_q^{(n)} f^(n), g^(n)).
double q_inner(const GradedVector& f, const GradedVector& g);
double q_norm(const GradedVector& f);

/// phi (x) t for a degree-n tensor t.
Tensor create_tensor(const OneParticleVector& phi, std::span<const double> t);
/// (a^-(phi) t)(j_1..j_{n-1}) = sum_i q^{i-1} sum_x phi(x) t(j_1..j_{i-1}, x, j_i..j_{n-1}).
Tensor annihilate_tensor(const OneParticleVector& phi, int n, std::span<const double> t, double q);

/// a^+(phi) f; the degree-N component of f is dropped by truncation.
GradedVector create(const OneParticleVector& phi, const GradedVector& f);
/// a^-(phi) f; degree 0 maps to zero.
GradedVector annihilate(const OneParticleVector& phi, const GradedVector& f);
/// <omega, phi> f = a^+(phi) f + a^-(phi) f.
GradedVector apply_field(const OneParticleVector& phi, const GradedVector& f);

Eigen::MatrixXd creation_matrix(const OneParticleVector& phi, const QContext& ctx,
                                std::size_t cap = kDefaultDenseCap);
Eigen::MatrixXd annihilation_matrix(const OneParticleVector& phi, const QContext& ctx,
                                    std::size_t cap = kDefaultDenseCap);

/// Matrix of a^+(phi) + a^-(phi) in the monomial basis. It is self-adjoint
/// for the q-inner product, i.e. G^T P = P G with P = gram_matrix(ctx), not
/// symmetric in the Euclidean sense.
Eigen::MatrixXd field_matrix(const OneParticleVector& phi, const QContext& ctx,
                             std::size_t cap = kDefaultDenseCap);

/// Block-diagonal q-Gram matrix diag(P^{(0)}, ..., P^{(N)}).
Eigen::MatrixXd gram_matrix(const QContext& ctx, std::size_t cap = kDefaultDenseCap);

struct CommutationResidual {
  /// || a^-(phi) a^+(psi) - q a^+(psi) a^-(phi) - (phi,psi) Id ||.
  double corrected = 0.0;
  /// || a^-(phi) a^+(psi) - q a^+(phi) a^-(psi) - (phi,psi) Id ||, the index
  /// placement as printed in the literature; nonzero in general.
  double as_printed = 0.0;
};

/// Euclidean operator norms restricted to degrees <= N-1, where truncation is
/// exact. Both operators preserve degree, so the norm is a max over blocks.
CommutationResidual commutation_residual(const OneParticleVector& phi,
                                         const OneParticleVector& psi, const QContext& ctx);

struct Spectrum {
  double min = 0.0;
  double max = 0.0;
};

/// Extremal eigenvalues of P_q^{(n)}.
Spectrum pq_spectrum(int n, const QContext& ctx, std::size_t cap = kDefaultDenseCap);

}  // namespace qwick
