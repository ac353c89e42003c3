#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "qwick/random.hpp"
#include "qwick/suites.hpp"

using namespace qwick;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.q = -0.5;
  cfg.dim = 2;
  cfg.max_degree = 4;
  cfg.trials = 12;
  cfg.seed = 42;
  return cfg;
}

}  // namespace

TEST_CASE("per-trial seeds are distinct and stable") {
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
  CHECK(trial_seed(7, 3) == trial_seed(7, 3));
  Rng a = Rng::for_trial(5, 9);
  Rng b = Rng::for_trial(5, 9);
  for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("every suite passes on a small configuration") {
  const RunConfig cfg = small_config();
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    const Report report = run_suite(name, cfg);
    CHECK(report.suite == name);
    CHECK(report.pass);
    CHECK(report.violations.empty());
    CHECK(report.trials > 0);
  }
}

TEST_CASE("reports are identical for any worker count") {
  RunConfig one = small_config();
  one.threads = 1;
  RunConfig many = small_config();
  many.threads = 4;
  for (const char* name : {"vage", "moments", "positivity", "series"}) {
    CHECK(to_json(run_suite(name, one)).dump() == to_json(run_suite(name, many)).dump());
  }
}

TEST_CASE("report schema") {
  const Json j = to_json(run_suite("vage", small_config()));
  for (const char* key : {"suite", "params", "trials", "max_residual", "max_ratio", "bound", "violations", "pass"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["max_ratio"].get<double>() <= j["bound"].get<double>());
  CHECK(j["params"]["seed"] == 42);
  CHECK(j["params"]["scales"].size() == 3);
}

TEST_CASE("vage report at the documented configuration") {
  RunConfig cfg;
  cfg.q = 0.5;
  cfg.dim = 2;
  cfg.max_degree = 6;
  cfg.trials = 200;
  cfg.seed = 42;
  cfg.scales = {{2.0, 1.0, 2.0}};
  const Report r = run_suite("vage", cfg);
  CHECK(r.pass);
  REQUIRE(r.max_ratio.has_value());
  CHECK(*r.max_ratio <= 1.41421 + 1e-9);
  CHECK(*r.bound == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("positivity records the q-factorial finding for negative q") {
  const Report r = run_suite("positivity", small_config());
  CHECK(r.pass);
  CHECK_FALSE(r.details["max_eigenvalue_exceeds_q_factorial_at"].empty());
  RunConfig positive = small_config();
  positive.q = 0.5;
  CHECK(run_suite("positivity", positive).details["max_eigenvalue_exceeds_q_factorial_at"].empty());
}

TEST_CASE("embedding suite reports the q-weight counterexample") {
  const Report r = run_suite("embedding", small_config());
  CHECK(r.pass);
  CHECK(r.details["q_weight_finding"]["residual"].get<double>() > 0.0);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(run_suite("unknown", small_config()), UnknownSuite);
  RunConfig bad = small_config();
  bad.q = 1.0;
  CHECK_THROWS(run_suite("macmahon", bad));
  bad = small_config();
  bad.trials = 0;
  CHECK_THROWS(run_suite("vage", bad));
  bad = small_config();
  bad.scales = {{1.0, 2.0, 2.0}};
  CHECK_THROWS(run_suite("vage", bad));
}

TEST_CASE("worker count honours QWICK_THREADS") {
  RunConfig cfg = small_config();
  cfg.threads = 8;
  setenv("QWICK_THREADS", "2", 1);
  CHECK(worker_count(cfg, 100) == 2);
  CHECK(worker_count(cfg, 1) == 1);
  unsetenv("QWICK_THREADS");
  CHECK(worker_count(cfg, 100) == 8);
}

TEST_CASE("CSV export") {
  const Report r = run_suite("lemma53", small_config());
  const std::string csv = samples_csv({r});
  CHECK(csv.rfind("suite,check,trial,value,bound\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + r.trials);
}
