#pragma once

// Randomized and exhaustive verification suites behind `qwick verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwick/json_io.hpp"

namespace qwick {

struct ScaleTriple {
  double r = 2.0;
  double s = 1.0;
  double alpha = 2.0;
};

struct RunConfig {
  double q = 0.5;
  int dim = 2;
  int max_degree = 6;
  int trials = 500;
  std::uint64_t seed = 1;
  /// Empty means each suite's own default scales.
  std::vector<ScaleTriple> scales;
  std::vector<std::string> suites;
  std::string output;
  std::string csv;
  /// Requested workers; 0 means the hardware count. QWICK_THREADS caps either.
  int threads = 0;

  /// Throws std::invalid_argument on an out-of-domain field.
  void validate() const;
};

/// Raised for a suite name outside suite_names().
class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& suite_names();

struct Violation {
  int trial = 0;
  double value = 0.0;
  std::string check;
};

/// One row per trial and check, for CSV export.
struct Sample {
  std::string check;
  int trial = 0;
  double value = 0.0;
  double bound = 0.0;
};

struct Report {
  std::string suite;
  Json params;
  int trials = 0;
  double max_residual = 0.0;
  std::optional<double> max_ratio;
  std::optional<double> bound;
  std::vector<Violation> violations;
  bool pass = true;
  Json details = Json::object();
  std::vector<Sample> samples;
};

Json to_json(const Report& report);
/// "suite,check,trial,value,bound" rows.
std::string samples_csv(const std::vector<Report>& reports);

/// Deterministic for a fixed configuration, independent of the worker count.
Report run_suite(const std::string& name, const RunConfig& cfg);

/// Worker count after applying cfg.threads and the QWICK_THREADS cap.
int worker_count(const RunConfig& cfg, int jobs);

}  // namespace qwick
