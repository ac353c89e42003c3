#include "qwick/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "qwick/error.hpp"
#include "qwick/random.hpp"

namespace qwick {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class CheckKind { residual, ratio, positive, info };

struct Check {
  std::string name;
  CheckKind kind = CheckKind::residual;
  /// Stated bound (ratio checks) or tolerance (residual checks).
  double bound = 0.0;
  /// Violation threshold: value > limit, or value <= limit for positive checks.
  double limit = 0.0;
};

Check residual_check(std::string name, double tol) {
  return Check{std::move(name), CheckKind::residual, tol, tol};
}
Check ratio_check(std::string name, double bound, double limit) {
  return Check{std::move(name), CheckKind::ratio, bound, limit};
}
Check info_check(std::string name) { return Check{std::move(name), CheckKind::info, kInf, kInf}; }

bool violates(const Check& c, double value) {
  if (std::isnan(value)) return c.kind != CheckKind::info;
  switch (c.kind) {
    case CheckKind::positive:
      return !(value > c.limit);
    case CheckKind::info:
      return false;
    default:
      return value > c.limit;
  }
}

using TrialFn = std::function<std::vector<double>(int trial)>;

std::vector<std::vector<double>> run_parallel(int trials, int workers, const TrialFn& fn) {
  std::vector<std::vector<double>> results(static_cast<std::size_t>(trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  const auto work = [&] {
    for (int t = next++; t < trials; t = next++) {
      try {
        results[static_cast<std::size_t>(t)] = fn(t);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

Json scales_json(const std::vector<ScaleTriple>& scales) {
  Json out = Json::array();
  for (const auto& sc : scales) out.push_back(Json{{"r", sc.r}, {"s", sc.s}, {"alpha", sc.alpha}});
  return out;
}

Json base_params(const RunConfig& cfg) {
  return Json{{"q", cfg.q},       {"dim", cfg.dim},   {"max_degree", cfg.max_degree},
              {"trials", cfg.trials}, {"seed", cfg.seed}};
}

Report aggregate(const std::string& suite, Json params, const std::vector<Check>& checks, int trials,
                 const std::vector<std::vector<double>>& values, Json details) {
  Report report;
  report.suite = suite;
  report.params = std::move(params);
  report.trials = trials;
  report.details = std::move(details);

  Json check_summary = Json::array();
  double worst_ratio_share = -kInf;
  for (std::size_t c = 0; c < checks.size(); ++c) {
    const Check& check = checks[c];
    double max_value = -kInf;
    double min_value = kInf;
    for (int t = 0; t < trials; ++t) {
      const double v = values[static_cast<std::size_t>(t)][c];
      if (std::isnan(v) && check.kind == CheckKind::info) continue;
      report.samples.push_back(Sample{check.name, t, v, check.bound});
      if (!std::isnan(v)) {
        max_value = std::max(max_value, v);
        min_value = std::min(min_value, v);
      }
      if (violates(check, v)) report.violations.push_back(Violation{t, v, check.name});
    }
    if (max_value == -kInf) continue;
    Json entry{{"check", check.name}};
    switch (check.kind) {
      case CheckKind::residual:
        entry["max_residual"] = max_value;
        entry["tolerance"] = check.limit;
        report.max_residual = std::max(report.max_residual, max_value);
        if (!report.bound) report.bound = check.bound;
        break;
      case CheckKind::ratio:
        entry["max_ratio"] = max_value;
        entry["bound"] = check.bound;
        if (max_value / check.bound > worst_ratio_share) {
          worst_ratio_share = max_value / check.bound;
          report.max_ratio = max_value;
          report.bound = check.bound;
        }
        break;
      case CheckKind::positive:
        entry["min_value"] = min_value;
        entry["must_exceed"] = check.limit;
        break;
      case CheckKind::info:
        entry["max_value"] = max_value;
        entry["min_value"] = min_value;
        break;
    }
    check_summary.push_back(entry);
  }
  report.details["checks"] = check_summary;
  report.pass = report.violations.empty();
  return report;
}

Report run_trials(const std::string& suite, const RunConfig& cfg, Json params,
                  const std::vector<Check>& checks, int trials, const TrialFn& fn, Json details = Json::object()) {
  const auto values = run_parallel(trials, worker_count(cfg, trials), fn);
  return aggregate(suite, std::move(params), checks, trials, values, std::move(details));
}

double relative(double residual, double scale) { return residual / std::max(1.0, scale); }

double max_abs_difference(const GradedVector& a, const GradedVector& b) { return (a - b).max_abs(); }

QContext context_of(const RunConfig& cfg) { return QContext(cfg.q, cfg.dim, cfg.max_degree); }

std::vector<ScaleTriple> scales_or(const RunConfig& cfg, std::vector<ScaleTriple> fallback) {
  return cfg.scales.empty() ? fallback : cfg.scales;
}

std::string scale_label(const char* prefix, const ScaleTriple& sc, bool with_s, bool with_alpha) {
  std::ostringstream out;
  out << prefix << " r=" << sc.r;
  if (with_s) out << " s=" << sc.s;
  if (with_alpha) out << " alpha=" << sc.alpha;
  return out.str();
}

// ---------------------------------------------------------------- fock-core

Report suite_commutation(const RunConfig& cfg) {
  if (cfg.max_degree < 1) throw std::invalid_argument("commutation suite needs max_degree >= 1");
  const QContext ctx = context_of(cfg);
  const std::vector<Check> checks{residual_check("corrected", 1e-12), info_check("as_printed")};
  return run_trials("commutation", cfg, base_params(cfg), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const OneParticleVector phi = random_vector(rng, cfg.dim);
    const OneParticleVector psi = random_vector(rng, cfg.dim);
    const CommutationResidual r = commutation_residual(phi, psi, ctx);
    return std::vector<double>{r.corrected, r.as_printed};
  });
}

Report suite_positivity(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  std::vector<int> degrees;
  for (int n = 1; n <= std::min(cfg.max_degree, kDefaultPermutationCap); ++n) {
    if (ctx.degree_size(n) <= kDefaultDenseCap) degrees.push_back(n);
  }
  const int cases = static_cast<int>(degrees.size());
  std::vector<Spectrum> spectra(degrees.size());
  const std::vector<Check> checks{Check{"min_eigenvalue", CheckKind::positive, 0.0, 0.0},
                                  residual_check("max_eigenvalue_over_abs_q_factorial", 1e-10),
                                  info_check("max_eigenvalue_minus_q_factorial")};
  const auto values = run_parallel(cases, worker_count(cfg, cases), [&](int i) {
    const int n = degrees[static_cast<std::size_t>(i)];
    const Spectrum sp = pq_spectrum(n, ctx);
    spectra[static_cast<std::size_t>(i)] = sp;
    return std::vector<double>{sp.min, std::max(0.0, sp.max - q_factorial(n, std::abs(cfg.q))),
                               sp.max - q_factorial(n, cfg.q)};
  });

  Json table = Json::array();
  Json exceeding = Json::array();
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const int n = degrees[i];
    const double qf = q_factorial(n, cfg.q);
    table.push_back(Json{{"n", n},
                         {"min_eigenvalue", spectra[i].min},
                         {"max_eigenvalue", spectra[i].max},
                         {"q_factorial", qf},
                         {"abs_q_factorial", q_factorial(n, std::abs(cfg.q))}});
    if (spectra[i].max > qf + 1e-12) exceeding.push_back(n);
  }
  Json details{{"spectra", table}, {"max_eigenvalue_exceeds_q_factorial_at", exceeding}};
  if (!exceeding.empty()) {
    details["finding"] =
        "the norm of P_q^(n) exceeds [n]_q! for q < 0; norm bounds must use [n]_{|q|}!";
  }
  return aggregate("positivity", base_params(cfg), checks, cases, values, details);
}

Report suite_adjointness(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const std::vector<Check> checks{residual_check("creation_annihilation", 1e-10),
                                  residual_check("field_self_adjoint", 1e-10)};
  return run_trials("adjointness", cfg, base_params(cfg), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const OneParticleVector phi = random_vector(rng, cfg.dim);
    const GradedVector f = random_graded(rng, ctx);
    const GradedVector g = random_graded(rng, ctx);
    const double lhs = q_inner(create(phi, f), g);
    const double rhs = q_inner(f, annihilate(phi, g));
    const double scale = norm(phi) * q_norm(f) * q_norm(g);
    const double field_lhs = q_inner(apply_field(phi, f), g);
    const double field_rhs = q_inner(f, apply_field(phi, g));
    return std::vector<double>{relative(std::abs(lhs - rhs), scale),
                               relative(std::abs(field_lhs - field_rhs), scale)};
  });
}

// ---------------------------------------------------------- qcombinatorics

Report suite_macmahon(const RunConfig& cfg) {
  std::vector<std::pair<int, int>> cases;
  for (int total = 0; total <= kDefaultPermutationCap; ++total) {
    for (int m = 0; m <= total; ++m) cases.emplace_back(m, total - m);
  }
  const int count = static_cast<int>(cases.size());
  Json params{{"q", cfg.q}, {"max_total", kDefaultPermutationCap}};
  return run_trials("macmahon", cfg, params, {residual_check("residual", 1e-12)}, count, [&](int i) {
    const auto [m, n] = cases[static_cast<std::size_t>(i)];
    return std::vector<double>{macmahon_residual(m, n, cfg.q)};
  });
}

// ------------------------------------------------------------ wick-algebra

Report suite_moments(const RunConfig& cfg) {
  constexpr int kMaxOrder = 10;
  const QContext ctx = context_of(cfg);
  Json table = Json::array();
  const OneParticleVector unit = OneParticleVector::unit(cfg.dim, 0);
  for (int k = 0; k <= kMaxOrder; ++k) {
    const MomentReport m = moment(unit, k, ctx);
    table.push_back(Json{{"k", k}, {"value", m.value}, {"oracle", m.oracle_value}, {"residual", m.residual}});
  }
  const std::vector<Check> checks{residual_check("relative_residual", 1e-9)};
  return run_trials(
      "moments", cfg, base_params(cfg), checks, cfg.trials,
      [&](int t) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
        const OneParticleVector phi = random_vector(rng, cfg.dim);
        double worst = 0.0;
        for (int k = 1; k <= kMaxOrder; ++k) {
          const MomentReport m = moment(phi, k, ctx);
          const double scale = k % 2 == 0 ? std::abs(m.oracle_value) : std::pow(norm(phi), k);
          worst = std::max(worst, relative(m.residual, scale));
        }
        return std::vector<double>{worst};
      },
      Json{{"unit_vector_moments", table}});
}

std::vector<OneParticleVector> random_vectors(Rng& rng, int count, int dim) {
  std::vector<OneParticleVector> out;
  for (int i = 0; i < count; ++i) out.push_back(random_vector(rng, dim));
  return out;
}

Report suite_wick_correspondence(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const int n_max = cfg.max_degree;
  const std::vector<Check> checks{residual_check("wick_product_is_tensor_product", 1e-10),
                                  residual_check("monomial_on_vacuum", 1e-10),
                                  residual_check("monomial_product", 1e-10),
                                  residual_check("recursion_vs_field_products", 1e-10)};
  return run_trials("wick-correspondence", cfg, base_params(cfg), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const double q = cfg.q;
    const GradedVector vacuum = GradedVector::vacuum(ctx);

    const WickPolynomial p1 = random_field_polynomial(rng, cfg.dim, q, n_max / 2, 2);
    const WickPolynomial p2 = random_field_polynomial(rng, cfg.dim, q, n_max - n_max / 2, 2);
    const GradedVector lhs = apply_to_fock(wick_mul(p1, p2, q), vacuum);
    const GradedVector rhs = graded_tensor(apply_to_fock(p1, vacuum), apply_to_fock(p2, vacuum));
    const double correspondence = relative(max_abs_difference(lhs, rhs), rhs.max_abs());

    const int n = rng.integer(0, n_max);
    const auto fs = random_vectors(rng, n, cfg.dim);
    const GradedVector w_omega = apply_to_fock(wick_monomial(fs, q), vacuum);
    const GradedVector kernel = GradedVector::elementary(ctx, fs);
    const double on_vacuum = relative(max_abs_difference(w_omega, kernel), kernel.max_abs());

    const int m = rng.integer(0, n);
    const std::span<const OneParticleVector> all(fs);
    const WickPolynomial product = wick_mul(wick_monomial(all.first(static_cast<std::size_t>(m)), q),
                                            wick_monomial(all.subspan(static_cast<std::size_t>(m)), q), q);
    const WickPolynomial joint = wick_monomial(all, q);
    const double product_residual =
        relative(max_coefficient_difference(product, joint), joint.max_abs_coefficient());
    const WickPolynomial fields = wick_product_of_fields(all, q);
    const double routes = relative(max_coefficient_difference(fields, joint), joint.max_abs_coefficient());
    return std::vector<double>{correspondence, on_vacuum, product_residual, routes};
  });
}

// He_n coefficients from the closed form n! / (k! (n-2k)! 2^k) with alternating signs.
std::vector<double> probabilists_hermite(int n) {
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  for (int k = 0; 2 * k <= n; ++k) {
    double v = std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - 2.0 * k + 1.0) * std::ldexp(1.0, k));
    c[static_cast<std::size_t>(n - 2 * k)] = k % 2 == 0 ? v : -v;
  }
  return c;
}

/// Coefficient-wise |a_i - b_i| / max(1, |b_i|).
double max_vector_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  const std::size_t size = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < size; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    worst = std::max(worst, relative(std::abs(x - y), std::abs(y)));
  }
  return worst;
}

Report suite_hermite(const RunConfig& cfg) {
  constexpr double kNearOne = 1.0 - 1e-6;
  const int top = std::max(6, cfg.max_degree);
  const OneParticleVector e{1.0};
  const std::vector<Check> checks{residual_check("q_hermite_recurrence", 1e-12),
                                  residual_check("classical_limit", 1e-4)};
  Json params{{"q", cfg.q}, {"max_n", top}, {"near_one_q", kNearOne}};
  return run_trials("hermite", cfg, params, checks, top + 1, [&](int n) {
    const std::vector<OneParticleVector> fs(static_cast<std::size_t>(n), e);
    const auto coeffs = single_mode_coefficients(wick_monomial(fs, cfg.q), e, cfg.q);
    const auto recurrence = q_hermite_coefficients(n, cfg.q);
    const auto near_one = single_mode_coefficients(wick_monomial(fs, kNearOne), e, kNearOne);
    return std::vector<double>{max_vector_difference(coeffs, recurrence),
                               max_vector_difference(near_one, probabilists_hermite(n))};
  });
}

// ------------------------------------------------------------- norm-scales

Json scaled_params(const RunConfig& cfg, const std::vector<ScaleTriple>& scales) {
  Json p = base_params(cfg);
  p["scales"] = scales_json(scales);
  return p;
}

Report suite_embedding(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const auto scales = scales_or(cfg, {{1.0, 1.0, 1.0}, {1.0, 1.0, 2.0}, {2.0, 1.0, 1.0}});
  std::vector<WeightedSpace> spaces;
  std::vector<Check> checks;
  for (const auto& sc : scales) {
    spaces.emplace_back(ctx, NormScale{sc.r, sc.alpha, WeightBase::abs_q, ScaleSide::test});
    checks.push_back(residual_check(scale_label("embedding", sc, false, true), 1e-12));
  }
  for (const auto& sc : scales) {
    checks.push_back(ratio_check(scale_label("embedding_ratio", sc, false, true), 1.0, 1.0 + 1e-12));
  }
  // Probe the precondition once up front so a bad scale is a config error.
  for (const auto& sp : spaces) (void)embedding_residual(GradedVector::vacuum(ctx), sp);

  Json details = Json::object();
  if (cfg.q < 0.0 && cfg.dim >= 2 && cfg.max_degree >= 2) {
    GradedVector anti(ctx);
    anti.component(2)[1] = 1.0;
    anti.component(2)[static_cast<std::size_t>(cfg.dim)] = -1.0;
    const WeightedSpace q_weights(ctx, NormScale{1.0, 1.0, WeightBase::q, ScaleSide::test});
    details["q_weight_finding"] = Json{
        {"vector", "e1(x)e2 - e2(x)e1"},
        {"weight_base", "q"},
        {"r", 1.0},
        {"alpha", 1.0},
        {"residual", embedding_residual(anti, q_weights)},
        {"note", "weights [n]_q! do not dominate the Fock norm for q < 0; the abs_q weights do"}};
  }
  return run_trials(
      "embedding", cfg, scaled_params(cfg, scales), checks, cfg.trials,
      [&](int t) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
        const GradedVector f = random_graded(rng, ctx);
        std::vector<double> out;
        for (const auto& sp : spaces) out.push_back(relative(embedding_residual(f, sp), q_norm(f)));
        for (const auto& sp : spaces) out.push_back(q_norm(f) / g_norm(f, sp));
        return out;
      },
      details);
}

Report suite_lemma53(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const int top = std::min(cfg.max_degree, kDefaultPermutationCap);
  const std::vector<Check> checks{ratio_check("binomial_bound", 1.0, 1.0 + 1e-9)};
  return run_trials("lemma53", cfg, base_params(cfg), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const int m = rng.integer(0, top);
    const int n = rng.integer(0, top - m);
    const Tensor f = random_tensor(rng, ctx.degree_size(m));
    const Tensor g = random_tensor(rng, ctx.degree_size(n));
    const InequalityCheck c = lemma53_check(m, f, n, g, ctx);
    return std::vector<double>{c.rhs > 0.0 ? c.lhs / c.rhs : 0.0};
  });
}

Report suite_theorem43(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const auto scales = scales_or(cfg, {{1.0, 2.0, 1.0}, {1.0, 2.0, 2.0}, {2.0, 4.0, 2.0}});
  const auto weights = default_hplus_weights(cfg.dim);
  std::vector<Check> checks;
  std::vector<std::pair<double, double>> ranges;
  for (const auto& sc : scales) {
    const double lo = std::min(sc.r, sc.s);
    const double hi = std::max(sc.r, sc.s);
    const double c1 = estimate_c1(lo, hi, sc.alpha, ctx);
    ranges.emplace_back(lo, hi);
    checks.push_back(ratio_check(scale_label("product", ScaleTriple{lo, hi, sc.alpha}, true, true), c1,
                                 c1 * (1.0 + 1e-9)));
  }
  return run_trials("theorem43", cfg, scaled_params(cfg, scales), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const GradedVector f = random_graded(rng, ctx);
    const GradedVector g = random_graded(rng, ctx);
    std::vector<double> out;
    for (std::size_t i = 0; i < scales.size(); ++i) {
      out.push_back(product_ratio(f, g, ranges[i].first, ranges[i].second, scales[i].alpha, weights).ratio);
    }
    return out;
  });
}

Report suite_vage(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  auto scales = scales_or(cfg, {{2.0, 1.0, 2.0}, {4.0, 1.0, 2.0}, {1.5, 1.2, 2.0}});
  for (auto& sc : scales) {
    if (!(sc.r > sc.s && sc.s >= 1.0)) throw std::invalid_argument("vage suite needs r > s >= 1");
    sc.alpha = 2.0;
  }
  const auto weights = default_hplus_weights(cfg.dim);
  std::vector<Check> checks;
  for (const auto& sc : scales) {
    const double bound = std::sqrt(sc.r / (sc.r - sc.s));
    checks.push_back(ratio_check(scale_label("vage", sc, true, false), bound, bound + 1e-9));
  }
  return run_trials("vage", cfg, scaled_params(cfg, scales), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const GradedVector f = random_graded(rng, ctx);
    const GradedVector g = random_graded(rng, ctx);
    std::vector<double> out;
    for (const auto& sc : scales) out.push_back(vage_ratio(f, g, sc.r, sc.s, weights).ratio);
    return out;
  });
}

Report suite_duality(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const auto scales = scales_or(cfg, {{1.0, 1.0, 1.0}, {2.0, 1.0, 2.0}});
  const auto weights = default_hplus_weights(cfg.dim);
  std::vector<Check> checks;
  for (const auto& sc : scales) checks.push_back(residual_check(scale_label("duality", sc, false, true), 1e-10));
  for (const auto& sc : scales) {
    checks.push_back(ratio_check(scale_label("duality_ratio", sc, false, true), 1.0, 1.0 + 1e-10));
  }
  return run_trials("duality", cfg, scaled_params(cfg, scales), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const GradedVector f = random_graded(rng, ctx);
    const GradedVector g = random_graded(rng, ctx);
    std::vector<double> out;
    std::vector<double> ratios;
    for (const auto& sc : scales) {
      const WeightedSpace test(ctx, NormScale{sc.r, sc.alpha, WeightBase::abs_q, ScaleSide::test}, weights);
      const WeightedSpace dual(ctx, NormScale{sc.r, sc.alpha, WeightBase::abs_q, ScaleSide::dual}, weights);
      const double scale = g_norm(f, test) * f_dual_norm(g, dual);
      out.push_back(relative(duality_residual(f, g, sc.r, sc.alpha, weights), scale));
      ratios.push_back(std::abs(q_inner(f, g)) / scale);
    }
    out.insert(out.end(), ratios.begin(), ratios.end());
    return out;
  });
}

// ------------------------------------------------------------- wick-series

Report suite_inverse(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const std::vector<Check> checks{residual_check("inverse_identity", 1e-12)};
  return run_trials("inverse", cfg, base_params(cfg), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    GradedVector f = random_graded(rng, ctx);
    // Keep f^(0) away from zero so the check measures rounding, not conditioning.
    const double f0 = rng.uniform(0.5, 2.0);
    f.component(0)[0] = rng.integer(0, 1) == 0 ? f0 : -f0;
    const GradedVector inv = wick_inverse(f);
    const GradedVector product = graded_tensor(f, inv);
    const double scale = f.max_abs() * inv.max_abs() * (cfg.max_degree + 1);
    return std::vector<double>{relative(max_abs_difference(product, GradedVector::vacuum(ctx)), scale)};
  });
}

Report suite_series(const RunConfig& cfg) {
  const QContext ctx = context_of(cfg);
  const SeriesOptions options{default_hplus_weights(cfg.dim)};
  const SeriesSpec geometric = SeriesSpec::geometric(options.max_terms);
  const std::vector<Check> checks{ratio_check("contraction", 1.0, 1.0 - 1e-12),
                                  ratio_check("increment_over_geometric_bound", 1.0, 1.0 + 1e-9),
                                  residual_check("sum_vs_inverse", 1e-10)};
  const WeightedSpace unit_scale(ctx, NormScale{1.0, 2.0, WeightBase::abs_q, ScaleSide::dual},
                                 options.hplus_weights);
  return run_trials("series", cfg, base_params(cfg), checks, cfg.trials, [&](int t) {
    Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    GradedVector f = random_graded(rng, ctx);
    f.component(0)[0] *= 0.2;
    f *= 0.5 / f_dual_norm(f, unit_scale);
    const ConvergenceCertificate cert = certify_radius(f, geometric, 1.0, options);
    const SeriesResult sum = wick_series(f, geometric, cert, options);

    const double amplification = std::sqrt(cert.r / (cert.r - cert.s));
    double worst = 0.0;
    for (std::size_t n = 1; n < sum.increment_norms.size(); ++n) {
      const double bound = std::pow(cert.contraction * cert.radius, static_cast<double>(n)) / amplification;
      worst = std::max(worst, sum.increment_norms[n] / bound);
    }
    // sum F^n = (Omega - F)^{-1} for the geometric series.
    const GradedVector closed = wick_inverse(GradedVector::vacuum(ctx) - f);
    const double exact = relative(max_abs_difference(sum.value, closed), closed.max_abs());
    return std::vector<double>{cert.contraction, worst, exact};
  });
}

using SuiteFn = Report (*)(const RunConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites{
      {"commutation", suite_commutation},
      {"positivity", suite_positivity},
      {"adjointness", suite_adjointness},
      {"macmahon", suite_macmahon},
      {"moments", suite_moments},
      {"wick-correspondence", suite_wick_correspondence},
      {"hermite", suite_hermite},
      {"embedding", suite_embedding},
      {"lemma53", suite_lemma53},
      {"theorem43", suite_theorem43},
      {"vage", suite_vage},
      {"duality", suite_duality},
      {"inverse", suite_inverse},
      {"series", suite_series},
  };
  return suites;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

void RunConfig::validate() const {
  if (!(std::abs(q) < 1.0)) throw std::invalid_argument("q must lie in (-1, 1)");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  for (const auto& sc : scales) {
    if (!(sc.r >= 1.0) || !(sc.s >= 1.0) || !std::isfinite(sc.alpha)) {
      throw std::invalid_argument("scales need r >= 1, s >= 1 and finite alpha");
    }
  }
  for (const auto& s : suites) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) throw UnknownSuite("unknown suite: " + s);
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

int worker_count(const RunConfig& cfg, int jobs) {
  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QWICK_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) workers = std::min(workers, cap);
  }
  return std::clamp(workers, 1, std::max(1, jobs));
}

Report run_suite(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  for (const auto& [suite, fn] : registry()) {
    if (suite == name) return fn(cfg);
  }
  throw UnknownSuite("unknown suite: " + name);
}

Json to_json(const Report& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back(Json{{"trial", v.trial}, {"value", v.value}, {"check", v.check}});
  }
  Json j{{"suite", report.suite},
         {"params", report.params},
         {"trials", report.trials},
         {"max_residual", report.max_residual},
         {"max_ratio", report.max_ratio ? Json(*report.max_ratio) : Json(nullptr)},
         {"bound", report.bound ? Json(*report.bound) : Json(nullptr)},
         {"violations", violations},
         {"pass", report.pass},
         {"details", report.details}};
  return j;
}

std::string samples_csv(const std::vector<Report>& reports) {
  std::ostringstream out;
  out.precision(17);
  out << "suite,check,trial,value,bound\n";
  for (const auto& r : reports) {
    for (const auto& s : r.samples) {
      out << r.suite << ',' << csv_escape(s.check) << ',' << s.trial << ',' << s.value << ',' << s.bound << '\n';
    }
  }
  return out.str();
}

}  // namespace qwick
