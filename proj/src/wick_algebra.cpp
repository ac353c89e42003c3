#include "qwick/wick_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwick/error.hpp"

namespace qwick {

WickTerm wick_mul(const NormalWord& u, const NormalWord& v, double q) {
  WickTerm term;
  const int m = static_cast<int>(u.annihilators.size());
  const int k = static_cast<int>(v.creators.size());
  term.coefficient = q_power(q, k * m);
  term.word.creators = u.creators;
  term.word.creators.insert(term.word.creators.end(), v.creators.begin(), v.creators.end());
  term.word.annihilators = u.annihilators;
  term.word.annihilators.insert(term.word.annihilators.end(), v.annihilators.begin(),
                                v.annihilators.end());
  return term;
}

NormalWord adjoint(const NormalWord& w) {
  NormalWord out;
  out.creators.assign(w.annihilators.rbegin(), w.annihilators.rend());
  out.annihilators.assign(w.creators.rbegin(), w.creators.rend());
  return out;
}

WickPolynomial WickPolynomial::identity(double coefficient) {
  return word(NormalWord{}, coefficient);
}

WickPolynomial WickPolynomial::word(NormalWord w, double coefficient) {
  WickPolynomial p;
  p.add(w, coefficient);
  return p;
}

WickPolynomial WickPolynomial::creator(const OneParticleVector& phi) {
  return word(NormalWord{{phi}, {}});
}

WickPolynomial WickPolynomial::annihilator(const OneParticleVector& phi) {
  return word(NormalWord{{}, {phi}});
}

WickPolynomial WickPolynomial::field(const OneParticleVector& phi) {
  return creator(phi) + annihilator(phi);
}

void WickPolynomial::add(const NormalWord& w, double coefficient) {
  if (coefficient == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(w, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double WickPolynomial::coefficient(const NormalWord& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? 0.0 : it->second;
}

int WickPolynomial::max_creators() const {
  int m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, static_cast<int>(w.creators.size()));
  return m;
}

int WickPolynomial::max_length() const {
  int m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, w.length());
  return m;
}

double WickPolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

WickPolynomial& WickPolynomial::operator+=(const WickPolynomial& other) {
  for (const auto& [w, c] : other.terms_) add(w, c);
  return *this;
}

WickPolynomial& WickPolynomial::operator-=(const WickPolynomial& other) {
  for (const auto& [w, c] : other.terms_) add(w, -c);
  return *this;
}

WickPolynomial& WickPolynomial::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, coeff] : terms_) coeff *= c;
  return *this;
}

WickPolynomial wick_mul(const WickPolynomial& a, const WickPolynomial& b, double q) {
  WickPolynomial out;
  for (const auto& [u, cu] : a.terms()) {
    for (const auto& [v, cv] : b.terms()) {
      const WickTerm t = wick_mul(u, v, q);
      out.add(t.word, cu * cv * t.coefficient);
    }
  }
  return out;
}

namespace {

// Moves the annihilators `pending` (rightmost first) through `creators`,
// collecting the contraction terms, and appends the result to `out`.
void normal_order(const std::vector<OneParticleVector>& left_creators,
                  std::span<const OneParticleVector> pending,
                  const std::vector<OneParticleVector>& creators,
                  const std::vector<OneParticleVector>& tail, double coefficient, double q,
                  WickPolynomial& out) {
  if (pending.empty()) {
    NormalWord w;
    w.creators = left_creators;
    w.creators.insert(w.creators.end(), creators.begin(), creators.end());
    w.annihilators = tail;
    out.add(w, coefficient);
    return;
  }
  const OneParticleVector& g = pending.back();
  const auto rest = pending.first(pending.size() - 1);

  // a^-(g) a^+(c_1)...a^+(c_k) = sum_i q^{i-1} (g, c_i) [c_i removed] + q^k a^+(c)... a^-(g)
  double weight = 1.0;
  for (std::size_t i = 0; i < creators.size(); ++i) {
    const double c = weight * dot(g, creators[i]);
    if (c != 0.0) {
      std::vector<OneParticleVector> reduced;
      reduced.reserve(creators.size() - 1);
      for (std::size_t t = 0; t < creators.size(); ++t) {
        if (t != i) reduced.push_back(creators[t]);
      }
      normal_order(left_creators, rest, reduced, tail, coefficient * c, q, out);
    }
    weight *= q;
  }
  if (weight != 0.0) {
    std::vector<OneParticleVector> new_tail;
    new_tail.reserve(tail.size() + 1);
    new_tail.push_back(g);
    new_tail.insert(new_tail.end(), tail.begin(), tail.end());
    normal_order(left_creators, rest, creators, new_tail, coefficient * weight, q, out);
  }
}

}  // namespace

WickPolynomial compose(const WickPolynomial& a, const WickPolynomial& b, double q) {
  WickPolynomial out;
  for (const auto& [u, cu] : a.terms()) {
    for (const auto& [v, cv] : b.terms()) {
      normal_order(u.creators, u.annihilators, v.creators, v.annihilators, cu * cv, q, out);
    }
  }
  return out;
}

WickPolynomial adjoint(const WickPolynomial& p) {
  WickPolynomial out;
  for (const auto& [w, c] : p.terms()) out.add(adjoint(w), c);
  return out;
}

double max_coefficient_difference(const WickPolynomial& a, const WickPolynomial& b) {
  return (a - b).max_abs_coefficient();
}

GradedVector apply_to_fock(const NormalWord& w, const GradedVector& f) {
  GradedVector v = f;
  for (auto it = w.annihilators.rbegin(); it != w.annihilators.rend(); ++it) v = annihilate(*it, v);
  for (auto it = w.creators.rbegin(); it != w.creators.rend(); ++it) v = create(*it, v);
  return v;
}

GradedVector apply_to_fock(const WickPolynomial& p, const GradedVector& f) {
  GradedVector out(f.context());
  for (const auto& [w, c] : p.terms()) out += c * apply_to_fock(w, f);
  return out;
}

WickPolynomial wick_monomial(std::span<const OneParticleVector> fs, double q) {
  if (fs.empty()) return WickPolynomial::identity();
  if (fs.size() == 1) return WickPolynomial::field(fs[0]);

  const OneParticleVector& head = fs[0];
  const auto rest = fs.subspan(1);
  WickPolynomial result = compose(WickPolynomial::field(head), wick_monomial(rest, q), q);

  // a^-(f_1) f_2 (x) ... (x) f_n = sum_i q^{i-1} (f_1, f_{i+1}) [f_{i+1} removed]
  double weight = 1.0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const double c = weight * dot(head, rest[i]);
    if (c != 0.0) {
      std::vector<OneParticleVector> reduced;
      reduced.reserve(rest.size() - 1);
      for (std::size_t t = 0; t < rest.size(); ++t) {
        if (t != i) reduced.push_back(rest[t]);
      }
      result -= c * wick_monomial(reduced, q);
    }
    weight *= q;
  }
  return result;
}

WickPolynomial wick_product_of_fields(std::span<const OneParticleVector> fs, double q) {
  WickPolynomial result = WickPolynomial::identity();
  for (const auto& f : fs) result = wick_mul(result, WickPolynomial::field(f), q);
  return result;
}

double vacuum_expectation(const WickPolynomial& p, const QContext& ctx) {
  if (p.max_creators() > ctx.max_degree()) {
    throw std::out_of_range("vacuum_expectation: a word creates " +
                            std::to_string(p.max_creators()) +
                            " particles, beyond truncation degree " +
                            std::to_string(ctx.max_degree()));
  }
  return apply_to_fock(p, GradedVector::vacuum(ctx)).component(0)[0];
}

MomentReport moment(const OneParticleVector& phi, int k, const QContext& ctx) {
  if (k < 0) throw std::invalid_argument("moment: order must be nonnegative");
  if (k > kDefaultPairingCap) {
    throw CapExceeded("moment: order " + std::to_string(k) + " exceeds pairing cap " +
                      std::to_string(kDefaultPairingCap));
  }
  if (phi.dim() != ctx.dim()) throw std::invalid_argument("moment: dimension mismatch");

  const QContext work = ctx.with_max_degree(std::max(1, k / 2));
  GradedVector v = GradedVector::vacuum(work);
  for (int step = 0; step < k; ++step) v = apply_field(phi, v);

  MomentReport report;
  report.order = k;
  report.value = v.component(0)[0];
  if (k % 2 == 0) {
    const auto coeffs = crossing_polynomial(k / 2);
    report.oracle_value = std::pow(norm(phi), k) * evaluate_crossing_polynomial(coeffs, ctx.q());
  }
  report.residual = std::abs(report.value - report.oracle_value);
  return report;
}

L2Inner l2_inner(const WickPolynomial& p1, const WickPolynomial& p2, const QContext& ctx) {
  const int headroom = std::max(p1.max_creators(), p2.max_creators());
  if (headroom > ctx.max_degree()) {
    throw std::out_of_range("l2_inner: polynomial degree " + std::to_string(headroom) +
                            " exceeds truncation degree " + std::to_string(ctx.max_degree()));
  }
  const GradedVector omega = GradedVector::vacuum(ctx);
  L2Inner result;
  result.value = q_inner(apply_to_fock(p1, omega), apply_to_fock(p2, omega));
  result.algebra_value = compose(adjoint(p2), p1, ctx.q()).coefficient(NormalWord{});
  result.residual = std::abs(result.value - result.algebra_value);
  return result;
}

std::vector<double> single_mode_coefficients(const WickPolynomial& p, const OneParticleVector& e,
                                             double q, double tol) {
  for (const auto& [w, c] : p.terms()) {
    const auto uses_e = [&](const OneParticleVector& v) { return v == e; };
    if (!std::all_of(w.creators.begin(), w.creators.end(), uses_e) ||
        !std::all_of(w.annihilators.begin(), w.annihilators.end(), uses_e)) {
      throw std::invalid_argument("single_mode_coefficients: word uses a vector other than e");
    }
  }
  const int top = p.max_length();
  std::vector<WickPolynomial> powers{WickPolynomial::identity()};
  const WickPolynomial x = WickPolynomial::field(e);
  for (int k = 1; k <= top; ++k) powers.push_back(compose(x, powers.back(), q));

  // x^k is the only power <= k containing a^+(e)^k, with coefficient 1.
  std::vector<double> coeffs(static_cast<std::size_t>(top + 1), 0.0);
  WickPolynomial remainder = p;
  for (int k = top; k >= 0; --k) {
    NormalWord lead;
    lead.creators.assign(static_cast<std::size_t>(k), e);
    const double c = remainder.coefficient(lead);
    coeffs[static_cast<std::size_t>(k)] = c;
    remainder -= c * powers[static_cast<std::size_t>(k)];
  }
  const double scale = std::max(1.0, p.max_abs_coefficient());
  if (remainder.max_abs_coefficient() > tol * scale) {
    throw std::invalid_argument("single_mode_coefficients: not a polynomial in <omega, e>");
  }
  return coeffs;
}

std::vector<double> q_hermite_coefficients(int n, double q) {
  if (n < 0) throw std::invalid_argument("q_hermite_coefficients: n must be nonnegative");
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k + 2), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    const double bk = q_integer(k, q);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= bk * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace qwick
