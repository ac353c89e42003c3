#include "qwick/fock.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "qwick/error.hpp"

namespace qwick {

QContext::QContext(double q, int dim, int max_degree, double tol)
    : q_(q), dim_(dim), max_degree_(max_degree), tol_(tol) {
  if (!(std::abs(q) < 1.0)) throw PreconditionError("QContext: |q| < 1 required");
  if (dim < 1) throw std::invalid_argument("QContext: dim must be >= 1");
  if (max_degree < 0) throw std::invalid_argument("QContext: max_degree must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("QContext: tol must be positive");
}

std::size_t QContext::degree_size(int n) const {
  std::size_t size = 1;
  for (int k = 0; k < n; ++k) size *= static_cast<std::size_t>(dim_);
  return size;
}

std::size_t QContext::degree_offset(int n) const {
  std::size_t offset = 0;
  for (int k = 0; k < n; ++k) offset += degree_size(k);
  return offset;
}

QContext QContext::with_max_degree(int max_degree) const {
  return QContext(q_, dim_, max_degree, tol_);
}

QContext QContext::with_q(double q) const { return QContext(q, dim_, max_degree_, tol_); }

bool QContext::same_space(const QContext& other) const {
  return q_ == other.q_ && dim_ == other.dim_ && max_degree_ == other.max_degree_;
}

OneParticleVector OneParticleVector::unit(int dim, int i) {
  OneParticleVector v(std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  v.entries.at(static_cast<std::size_t>(i)) = 1.0;
  return v;
}

double dot(const OneParticleVector& a, const OneParticleVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dot: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm(const OneParticleVector& a) { return std::sqrt(dot(a, a)); }

GradedVector::GradedVector(QContext ctx) : ctx_(ctx) {
  components_.reserve(static_cast<std::size_t>(ctx_.max_degree() + 1));
  for (int n = 0; n <= ctx_.max_degree(); ++n) {
    components_.emplace_back(ctx_.degree_size(n), 0.0);
  }
}

GradedVector GradedVector::vacuum(QContext ctx) {
  GradedVector v(ctx);
  v.component(0)[0] = 1.0;
  return v;
}

GradedVector GradedVector::one_particle(QContext ctx, const OneParticleVector& phi) {
  if (phi.dim() != ctx.dim()) throw std::invalid_argument("one_particle: dimension mismatch");
  GradedVector v(ctx);
  if (ctx.max_degree() >= 1) v.component(1) = phi.entries;
  return v;
}

GradedVector GradedVector::elementary(QContext ctx, std::span<const OneParticleVector> factors) {
  const int n = static_cast<int>(factors.size());
  if (n > ctx.max_degree()) throw std::out_of_range("elementary: degree exceeds truncation");
  Tensor t{1.0};
  for (const auto& f : factors) {
    if (f.dim() != ctx.dim()) throw std::invalid_argument("elementary: dimension mismatch");
    t = tensor_product(t, f.entries);
  }
  GradedVector v(ctx);
  v.component(n) = std::move(t);
  return v;
}

Tensor& GradedVector::component(int n) { return components_.at(static_cast<std::size_t>(n)); }

const Tensor& GradedVector::component(int n) const {
  return components_.at(static_cast<std::size_t>(n));
}

GradedVector& GradedVector::operator+=(const GradedVector& other) {
  if (!ctx_.same_space(other.ctx_)) throw std::invalid_argument("GradedVector: context mismatch");
  for (std::size_t n = 0; n < components_.size(); ++n) {
    for (std::size_t i = 0; i < components_[n].size(); ++i) components_[n][i] += other.components_[n][i];
  }
  return *this;
}

GradedVector& GradedVector::operator-=(const GradedVector& other) {
  if (!ctx_.same_space(other.ctx_)) throw std::invalid_argument("GradedVector: context mismatch");
  for (std::size_t n = 0; n < components_.size(); ++n) {
    for (std::size_t i = 0; i < components_[n].size(); ++i) components_[n][i] -= other.components_[n][i];
  }
  return *this;
}

GradedVector& GradedVector::operator*=(double c) {
  for (auto& comp : components_) {
    for (double& x : comp) x *= c;
  }
  return *this;
}

double GradedVector::max_abs() const {
  double m = 0.0;
  for (const auto& comp : components_) {
    for (double x : comp) m = std::max(m, std::abs(x));
  }
  return m;
}

double GradedVector::euclidean_norm() const {
  double sum = 0.0;
  for (const auto& comp : components_) {
    for (double x : comp) sum += x * x;
  }
  return std::sqrt(sum);
}

Eigen::VectorXd GradedVector::flatten() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(ctx_.total_size()));
  Eigen::Index k = 0;
  for (const auto& comp : components_) {
    for (double x : comp) v(k++) = x;
  }
  return v;
}

GradedVector GradedVector::unflatten(QContext ctx, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != ctx.total_size()) {
    throw std::invalid_argument("unflatten: size mismatch");
  }
  GradedVector out(ctx);
  Eigen::Index k = 0;
  for (int n = 0; n <= ctx.max_degree(); ++n) {
    for (double& x : out.component(n)) x = v(k++);
  }
  return out;
}

std::vector<int> decode_multi_index(std::size_t index, int n, int dim) {
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::size_t>(dim));
    index /= static_cast<std::size_t>(dim);
  }
  return digits;
}

std::size_t encode_multi_index(std::span<const int> digits, int dim) {
  std::size_t index = 0;
  for (int digit : digits) index = index * static_cast<std::size_t>(dim) + static_cast<std::size_t>(digit);
  return index;
}

Tensor tensor_product(std::span<const double> a, std::span<const double> b) {
  Tensor out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

Tensor tensor_power(const OneParticleVector& phi, int n) {
  Tensor t{1.0};
  for (int k = 0; k < n; ++k) t = tensor_product(t, phi.entries);
  return t;
}

PqOperator::PqOperator(int n, int dim, double q, int cap) : n_(n) {
  if (!(std::abs(q) < 1.0)) throw PreconditionError("PqOperator: |q| < 1 required");
  if (n > cap) {
    throw CapExceeded("P_q^(" + std::to_string(n) + ") exceeds permutation cap " +
                      std::to_string(cap));
  }
  size_ = 1;
  for (int k = 0; k < n; ++k) size_ *= static_cast<std::size_t>(dim);

  std::vector<std::vector<int>> perms;
  std::vector<double> weights;
  for_each_permutation(n, [&](const Permutation& p) {
    perms.push_back(p.image());
    weights.push_back(q_power(q, inversions(p)));
  }, cap);

  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::size_t s = 1;
    for (int t = k + 1; t < n; ++t) s *= static_cast<std::size_t>(dim);
    stride[static_cast<std::size_t>(k)] = s;
  }

  // Column i receives weight q^{inv(pi)} at row j with j_k = i_{pi(k)}.
  std::vector<std::vector<std::pair<std::size_t, double>>> by_row(size_);
  std::vector<double> scratch(size_, 0.0);
  std::vector<char> seen(size_, 0);
  std::vector<std::size_t> touched;
  for (std::size_t col = 0; col < size_; ++col) {
    const auto digits = decode_multi_index(col, n, dim);
    touched.clear();
    for (std::size_t p = 0; p < perms.size(); ++p) {
      if (weights[p] == 0.0) continue;
      std::size_t row = 0;
      for (int k = 0; k < n; ++k) {
        row += static_cast<std::size_t>(digits[static_cast<std::size_t>(perms[p][static_cast<std::size_t>(k)])]) *
               stride[static_cast<std::size_t>(k)];
      }
      if (!seen[row]) {
        seen[row] = 1;
        touched.push_back(row);
      }
      scratch[row] += weights[p];
    }
    for (std::size_t row : touched) {
      if (scratch[row] != 0.0) by_row[row].emplace_back(col, scratch[row]);
      scratch[row] = 0.0;
      seen[row] = 0;
    }
  }

  row_start_.reserve(size_ + 1);
  row_start_.push_back(0);
  for (auto& entries : by_row) {
    for (const auto& [col, value] : entries) {
      columns_.push_back(col);
      values_.push_back(value);
    }
    row_start_.push_back(columns_.size());
  }
}

std::shared_ptr<const PqOperator> PqOperator::cached(int n, int dim, double q) {
  using Key = std::tuple<int, int, std::uint64_t>;
  static std::shared_mutex mutex;
  static std::map<Key, std::shared_ptr<const PqOperator>> cache;

  std::uint64_t bits = 0;
  std::memcpy(&bits, &q, sizeof bits);
  const Key key{n, dim, bits};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto fresh = std::make_shared<const PqOperator>(n, dim, q);
  std::unique_lock lock(mutex);
  // Concurrent fills build identical operators; the first insert wins.
  return cache.emplace(key, std::move(fresh)).first->second;
}

Tensor PqOperator::apply(std::span<const double> t) const {
  if (t.size() != size_) throw std::invalid_argument("PqOperator::apply: size mismatch");
  Tensor out(size_, 0.0);
  for (std::size_t row = 0; row < size_; ++row) {
    double sum = 0.0;
    for (std::size_t k = row_start_[row]; k < row_start_[row + 1]; ++k) sum += values_[k] * t[columns_[k]];
    out[row] = sum;
  }
  return out;
}

Eigen::MatrixXd PqOperator::dense() const {
  const auto size = static_cast<Eigen::Index>(size_);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t row = 0; row < size_; ++row) {
    for (std::size_t k = row_start_[row]; k < row_start_[row + 1]; ++k) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(columns_[k])) = values_[k];
    }
  }
  return m;
}

Tensor apply_pq(int n, std::span<const double> t, const QContext& ctx) {
  return PqOperator::cached(n, ctx.dim(), ctx.q())->apply(t);
}

double q_inner(const GradedVector& f, const GradedVector& g) {
  if (!f.context().same_space(g.context())) throw std::invalid_argument("q_inner: context mismatch");
  double sum = 0.0;
  for (int n = 0; n <= f.max_degree(); ++n) {
    const Tensor pf = apply_pq(n, f.component(n), f.context());
    const Tensor& gn = g.component(n);
    for (std::size_t i = 0; i < pf.size(); ++i) sum += pf[i] * gn[i];
  }
  return sum;
}

double q_norm(const GradedVector& f) { return std::sqrt(std::max(0.0, q_inner(f, f))); }

Tensor create_tensor(const OneParticleVector& phi, std::span<const double> t) {
  return tensor_product(phi.entries, t);
}

Tensor annihilate_tensor(const OneParticleVector& phi, int n, std::span<const double> t, double q) {
  if (n == 0) return {};
  const auto dim = static_cast<std::size_t>(phi.dim());
  std::size_t out_size = 1;
  for (int k = 0; k < n - 1; ++k) out_size *= dim;
  if (t.size() != out_size * dim) throw std::invalid_argument("annihilate_tensor: size mismatch");

  Tensor out(out_size, 0.0);
  double weight = 1.0;
  for (int pos = 0; pos < n; ++pos) {
    // The contracted slot sits after `pos` leading digits.
    std::size_t tail = 1;
    for (int k = pos; k < n - 1; ++k) tail *= dim;
    for (std::size_t j = 0; j < out_size; ++j) {
      const std::size_t hi = j / tail;
      const std::size_t lo = j % tail;
      double sum = 0.0;
      for (std::size_t x = 0; x < dim; ++x) sum += phi.entries[x] * t[(hi * dim + x) * tail + lo];
      out[j] += weight * sum;
    }
    weight *= q;
  }
  return out;
}

GradedVector create(const OneParticleVector& phi, const GradedVector& f) {
  if (phi.dim() != f.context().dim()) throw std::invalid_argument("create: dimension mismatch");
  GradedVector out(f.context());
  for (int n = 1; n <= f.max_degree(); ++n) out.component(n) = create_tensor(phi, f.component(n - 1));
  return out;
}

GradedVector annihilate(const OneParticleVector& phi, const GradedVector& f) {
  if (phi.dim() != f.context().dim()) throw std::invalid_argument("annihilate: dimension mismatch");
  GradedVector out(f.context());
  for (int n = 1; n <= f.max_degree(); ++n) {
    out.component(n - 1) = annihilate_tensor(phi, n, f.component(n), f.context().q());
  }
  return out;
}

GradedVector apply_field(const OneParticleVector& phi, const GradedVector& f) {
  return create(phi, f) + annihilate(phi, f);
}

namespace {

void require_dense(const QContext& ctx, std::size_t cap) {
  if (ctx.total_size() > cap) {
    throw CapExceeded("dense Fock matrix of size " + std::to_string(ctx.total_size()) +
                      " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

Eigen::MatrixXd creation_matrix(const OneParticleVector& phi, const QContext& ctx, std::size_t cap) {
  require_dense(ctx, cap);
  if (phi.dim() != ctx.dim()) throw std::invalid_argument("creation_matrix: dimension mismatch");
  const auto total = static_cast<Eigen::Index>(ctx.total_size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
  for (int n = 0; n < ctx.max_degree(); ++n) {
    const std::size_t size = ctx.degree_size(n);
    for (std::size_t b = 0; b < size; ++b) {
      for (int x = 0; x < ctx.dim(); ++x) {
        const std::size_t row = ctx.degree_offset(n + 1) + static_cast<std::size_t>(x) * size + b;
        m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(ctx.degree_offset(n) + b)) = phi[x];
      }
    }
  }
  return m;
}

Eigen::MatrixXd annihilation_matrix(const OneParticleVector& phi, const QContext& ctx,
                                    std::size_t cap) {
  require_dense(ctx, cap);
  if (phi.dim() != ctx.dim()) throw std::invalid_argument("annihilation_matrix: dimension mismatch");
  const auto total = static_cast<Eigen::Index>(ctx.total_size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
  for (int n = 1; n <= ctx.max_degree(); ++n) {
    const std::size_t size = ctx.degree_size(n);
    Tensor unit(size, 0.0);
    for (std::size_t b = 0; b < size; ++b) {
      unit[b] = 1.0;
      const Tensor col = annihilate_tensor(phi, n, unit, ctx.q());
      unit[b] = 0.0;
      for (std::size_t r = 0; r < col.size(); ++r) {
        m(static_cast<Eigen::Index>(ctx.degree_offset(n - 1) + r),
          static_cast<Eigen::Index>(ctx.degree_offset(n) + b)) = col[r];
      }
    }
  }
  return m;
}

Eigen::MatrixXd field_matrix(const OneParticleVector& phi, const QContext& ctx, std::size_t cap) {
  return creation_matrix(phi, ctx, cap) + annihilation_matrix(phi, ctx, cap);
}

Eigen::MatrixXd gram_matrix(const QContext& ctx, std::size_t cap) {
  require_dense(ctx, cap);
  const auto total = static_cast<Eigen::Index>(ctx.total_size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
  for (int n = 0; n <= ctx.max_degree(); ++n) {
    const auto offset = static_cast<Eigen::Index>(ctx.degree_offset(n));
    const auto size = static_cast<Eigen::Index>(ctx.degree_size(n));
    m.block(offset, offset, size, size) = PqOperator::cached(n, ctx.dim(), ctx.q())->dense();
  }
  return m;
}

namespace {

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0 || m.isZero(0.0)) return 0.0;
  const Eigen::MatrixXd gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

}  // namespace

CommutationResidual commutation_residual(const OneParticleVector& phi,
                                         const OneParticleVector& psi, const QContext& ctx) {
  if (ctx.max_degree() < 1) throw PreconditionError("commutation_residual: N >= 1 required");
  if (phi.dim() != ctx.dim() || psi.dim() != ctx.dim()) {
    throw std::invalid_argument("commutation_residual: dimension mismatch");
  }
  const double q = ctx.q();
  const double overlap = dot(phi, psi);
  CommutationResidual result;
  for (int n = 0; n < ctx.max_degree(); ++n) {
    const std::size_t size = ctx.degree_size(n);
    const auto s = static_cast<Eigen::Index>(size);
    Eigen::MatrixXd corrected(s, s);
    Eigen::MatrixXd printed(s, s);
    Tensor unit(size, 0.0);
    for (std::size_t b = 0; b < size; ++b) {
      unit[b] = 1.0;
      const Tensor lead = annihilate_tensor(phi, n + 1, create_tensor(psi, unit), q);
      Tensor swap_corrected(size, 0.0);
      Tensor swap_printed(size, 0.0);
      if (n >= 1) {
        swap_corrected = create_tensor(psi, annihilate_tensor(phi, n, unit, q));
        swap_printed = create_tensor(phi, annihilate_tensor(psi, n, unit, q));
      }
      for (std::size_t r = 0; r < size; ++r) {
        const double id = r == b ? overlap : 0.0;
        corrected(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b)) =
            lead[r] - q * swap_corrected[r] - id;
        printed(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b)) =
            lead[r] - q * swap_printed[r] - id;
      }
      unit[b] = 0.0;
    }
    result.corrected = std::max(result.corrected, spectral_norm(corrected));
    result.as_printed = std::max(result.as_printed, spectral_norm(printed));
  }
  return result;
}

Spectrum pq_spectrum(int n, const QContext& ctx, std::size_t cap) {
  if (ctx.degree_size(n) > cap) {
    throw CapExceeded("pq_spectrum: d^n = " + std::to_string(ctx.degree_size(n)) +
                      " exceeds eigensolver cap " + std::to_string(cap));
  }
  const Eigen::MatrixXd p = PqOperator::cached(n, ctx.dim(), ctx.q())->dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(p, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return Spectrum{ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace qwick
