// qwick: verification suites and Wick-calculus computations on the truncated
// q-Fock space.
//
// Exit codes: 0 pass, 1 violation found, 2 usage, input or precondition error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwick/error.hpp"
#include "qwick/json_io.hpp"
#include "qwick/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + " entry \"" + item + "\"");
    }
  }
  return out;
}

qwick::ScaleTriple parse_scale(const std::vector<double>& v) {
  if (v.size() != 3) throw UsageError("a scale is r,s,alpha");
  return qwick::ScaleTriple{v[0], v[1], v[2]};
}

void apply_config_file(const std::string& path, qwick::RunConfig& cfg) {
  const qwick::Json j = qwick::read_json_file(path);
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    if (j.contains("q")) cfg.q = j.at("q").get<double>();
    if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
    if (j.contains("max_degree")) cfg.max_degree = j.at("max_degree").get<int>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("csv")) cfg.csv = j.at("csv").get<std::string>();
    if (j.contains("suites")) cfg.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("scales")) {
      cfg.scales.clear();
      for (const auto& sc : j.at("scales")) {
        if (sc.is_array()) {
          cfg.scales.push_back(parse_scale(sc.get<std::vector<double>>()));
        } else {
          cfg.scales.push_back({sc.at("r").get<double>(), sc.at("s").get<double>(), sc.at("alpha").get<double>()});
        }
      }
    }
  } catch (const qwick::Json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

qwick::Json load(const std::string& path) {
  if (path.empty()) throw UsageError("missing input file");
  return qwick::read_json_file(path);
}

std::string dump(const qwick::Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed Fock space and Wick calculus toolkit"};
  app.require_subcommand(1);

  // verify
  qwick::RunConfig cfg;
  std::string config_path;
  std::vector<std::string> suite_args;
  std::vector<std::string> scale_args;
  auto* verify = app.add_subcommand("verify", "run verification suites and emit JSON reports");
  verify->add_option("--suite", suite_args, "suite name, comma list, or 'all'")->delimiter(',');
  auto* opt_q = verify->add_option("--q", cfg.q, "deformation parameter in (-1,1)");
  auto* opt_dim = verify->add_option("--dim", cfg.dim, "one-particle dimension");
  auto* opt_deg = verify->add_option("--max-degree", cfg.max_degree, "truncation degree N");
  auto* opt_trials = verify->add_option("--trials", cfg.trials, "random trials per suite");
  auto* opt_seed = verify->add_option("--seed", cfg.seed, "suite seed");
  verify->add_option("--scale", scale_args, "r,s,alpha (repeatable)");
  auto* opt_threads = verify->add_option("--threads", cfg.threads, "workers (QWICK_THREADS caps this)");
  verify->add_option("--config", config_path, "JSON config; flags override it");
  auto* opt_output = verify->add_option("--output", cfg.output, "report path (default stdout)");
  auto* opt_csv = verify->add_option("--csv", cfg.csv, "per-trial CSV path");

  // compute
  auto* compute = app.add_subcommand("compute", "Wick-calculus computations on JSON inputs");
  compute->require_subcommand(1);
  std::string output;
  std::string input;
  std::string left;
  std::string right;
  std::string series_path;
  double q = 0.5;
  int order = 8;
  std::string phi_text = "1";
  std::string side = "dual";
  std::string weight_base = "abs_q";
  std::string weights_text;
  double r = 1.0;
  double alpha = 0.0;

  auto* moments = compute->add_subcommand("moments", "vacuum moments of <omega,phi> against the pairing oracle");
  moments->add_option("--q", q, "deformation parameter");
  moments->add_option("--order", order, "largest moment order (<= 12)");
  moments->add_option("--phi", phi_text, "comma-separated entries of phi");
  moments->add_option("--output", output, "JSON output path");

  auto* wick_mul = compute->add_subcommand("wick-mul", "Wick product of two graded vectors or polynomials");
  wick_mul->add_option("--left", left, "left factor JSON")->required();
  wick_mul->add_option("--right", right, "right factor JSON")->required();
  wick_mul->add_option("--q", q, "deformation parameter for polynomial inputs");
  wick_mul->add_option("--output", output, "JSON output path");

  auto* wick_inv = compute->add_subcommand("wick-inv", "Wick inverse of a graded vector");
  wick_inv->add_option("--input", input, "graded vector JSON")->required();
  wick_inv->add_option("--output", output, "JSON output path");

  auto* wick_exp = compute->add_subcommand("wick-exp", "Wick exponential of a graded vector");
  wick_exp->add_option("--input", input, "graded vector JSON")->required();
  wick_exp->add_option("--output", output, "JSON output path");

  auto* wick_series = compute->add_subcommand("wick-series", "certified Wick power series");
  wick_series->add_option("--input", input, "graded vector JSON")->required();
  wick_series->add_option("--series", series_path, "series JSON {coefficients, radius}")->required();
  wick_series->add_option("--output", output, "JSON output path");

  auto* norm = compute->add_subcommand("norm", "weighted scale norm of a graded vector");
  norm->add_option("--input", input, "graded vector JSON")->required();
  norm->add_option("--side", side, "test or dual")->check(CLI::IsMember({"test", "dual"}));
  norm->add_option("--r", r, "scale parameter r >= 1");
  norm->add_option("--alpha", alpha, "exponent alpha");
  norm->add_option("--weight-base", weight_base, "q or abs_q")->check(CLI::IsMember({"q", "abs_q"}));
  norm->add_option("--weights", weights_text, "comma-separated H_+ weights (default all ones)");
  norm->add_option("--output", output, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      qwick::RunConfig file_cfg;
      if (!config_path.empty()) apply_config_file(config_path, file_cfg);
      // Flags given on the command line win over the config file.
      if (opt_q->count()) file_cfg.q = cfg.q;
      if (opt_dim->count()) file_cfg.dim = cfg.dim;
      if (opt_deg->count()) file_cfg.max_degree = cfg.max_degree;
      if (opt_trials->count()) file_cfg.trials = cfg.trials;
      if (opt_seed->count()) file_cfg.seed = cfg.seed;
      if (opt_threads->count()) file_cfg.threads = cfg.threads;
      if (opt_output->count()) file_cfg.output = cfg.output;
      if (opt_csv->count()) file_cfg.csv = cfg.csv;
      if (!scale_args.empty()) {
        file_cfg.scales.clear();
        for (const auto& s : scale_args) file_cfg.scales.push_back(parse_scale(parse_list(s, "scale")));
      }
      if (!suite_args.empty()) file_cfg.suites = suite_args;
      cfg = file_cfg;
      if (cfg.suites.empty()) throw UsageError("no suite given; use --suite NAME or --suite all");
      if (cfg.suites.size() == 1 && cfg.suites.front() == "all") cfg.suites = qwick::suite_names();
      cfg.validate();

      std::vector<qwick::Report> reports;
      bool pass = true;
      for (const auto& name : cfg.suites) {
        reports.push_back(qwick::run_suite(name, cfg));
        pass = pass && reports.back().pass;
        if (!cfg.output.empty()) {
          std::fprintf(stderr, "%-20s %s\n", name.c_str(), reports.back().pass ? "pass" : "FAIL");
        }
      }
      qwick::Json doc;
      if (reports.size() == 1) {
        doc = qwick::to_json(reports.front());
      } else {
        doc = qwick::Json{{"reports", qwick::Json::array()}, {"pass", pass}};
        for (const auto& rep : reports) doc["reports"].push_back(qwick::to_json(rep));
      }
      write_text(cfg.output, dump(doc));
      if (!cfg.csv.empty()) write_text(cfg.csv, qwick::samples_csv(reports));
      return pass ? kExitPass : kExitViolation;
    }

    if (moments->parsed()) {
      const qwick::OneParticleVector phi(parse_list(phi_text, "phi"));
      const qwick::QContext ctx(q, phi.dim(), 0);
      qwick::Json rows = qwick::Json::array();
      bool pass = true;
      std::printf("%4s %25s %25s %25s\n", "k", "value", "oracle", "residual");
      for (int k = 0; k <= order; ++k) {
        const qwick::MomentReport m = qwick::moment(phi, k, ctx);
        std::printf("%4d %25.17g %25.17g %25.17g\n", k, m.value, m.oracle_value, m.residual);
        rows.push_back(qwick::Json{{"k", k}, {"value", m.value}, {"oracle", m.oracle_value}, {"residual", m.residual}});
        pass = pass && m.residual <= 1e-9 * std::max(1.0, std::abs(m.oracle_value));
      }
      if (!output.empty()) write_text(output, dump(qwick::Json{{"q", q}, {"phi", phi.entries}, {"moments", rows}}));
      return pass ? kExitPass : kExitViolation;
    }

    qwick::Json result;
    if (wick_mul->parsed()) {
      const qwick::Json a = load(left);
      const qwick::Json b = load(right);
      if (a.contains("terms") || b.contains("terms")) {
        result = qwick::to_json(qwick::wick_mul(qwick::wick_polynomial_from_json(a),
                                                qwick::wick_polynomial_from_json(b), q));
      } else {
        const qwick::GradedVector f = qwick::graded_vector_from_json(a);
        const qwick::GradedVector g = qwick::graded_vector_from_json(b);
        if (!f.context().same_space(g.context())) throw UsageError("wick-mul: inputs live in different spaces");
        result = qwick::to_json(qwick::graded_tensor(f, g));
      }
    } else if (wick_inv->parsed()) {
      result = qwick::to_json(qwick::wick_inverse(qwick::graded_vector_from_json(load(input))));
    } else if (wick_exp->parsed()) {
      const qwick::GradedVector f = qwick::graded_vector_from_json(load(input));
      result = qwick::to_json(qwick::wick_exp(f, qwick::SeriesOptions{qwick::default_hplus_weights(f.context().dim())}));
    } else if (wick_series->parsed()) {
      const qwick::GradedVector f = qwick::graded_vector_from_json(load(input));
      const qwick::SeriesSpec spec = qwick::series_spec_from_json(load(series_path));
      const qwick::SeriesOptions options{qwick::default_hplus_weights(f.context().dim())};
      const qwick::ConvergenceCertificate cert = qwick::certify_radius(f, spec, 1.0, options);
      const qwick::SeriesResult sum = qwick::wick_series(f, spec, cert, options);
      result = qwick::Json{{"value", qwick::to_json(sum.value)},
                           {"certificate",
                            {{"s", cert.s},
                             {"norm_s", cert.norm_s},
                             {"epsilon", cert.epsilon},
                             {"r", cert.r},
                             {"contraction", cert.contraction},
                             {"radius", cert.radius}}},
                           {"terms_used", sum.terms_used},
                           {"tail_bound", sum.tail_bound}};
    } else if (norm->parsed()) {
      const qwick::GradedVector f = qwick::graded_vector_from_json(load(input));
      const qwick::NormScale scale{r, alpha, weight_base == "q" ? qwick::WeightBase::q : qwick::WeightBase::abs_q,
                                   side == "test" ? qwick::ScaleSide::test : qwick::ScaleSide::dual};
      const std::vector<double> weights = weights_text.empty() ? std::vector<double>{} : parse_list(weights_text, "weights");
      const qwick::WeightedSpace space(f.context(), scale, weights);
      const double value = side == "test" ? qwick::g_norm(f, space) : qwick::f_dual_norm(f, space);
      result = qwick::Json{{"norm", value}, {"side", side}, {"r", r}, {"alpha", alpha}, {"weight_base", weight_base}};
    }
    write_text(output, dump(result));
    return kExitPass;
  } catch (const qwick::UnknownSuite& e) {
    std::fprintf(stderr, "qwick: %s (known: all", e.what());
    for (const auto& name : qwick::suite_names()) std::fprintf(stderr, ", %s", name.c_str());
    std::fprintf(stderr, ")\n");
    return kExitUsage;
  } catch (const qwick::PreconditionError& e) {
    std::fprintf(stderr, "qwick: precondition violated: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qwick: %s\n", e.what());
    return kExitUsage;
  }
}
