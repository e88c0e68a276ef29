#pragma once

#include "sldp/family.hpp"
#include "sldp/legendre.hpp"
#include "sldp/measures.hpp"
#include "sldp/psi.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sldp {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ValidationError with the line and
/// column of the offending character.
Json parse_json(std::string_view text, const std::string& source = "<json>");
Json read_json_file(const std::string& path);

// {"kind": "cone-lp", "p": 3, "qStar": 1.5}; p and qStar are optional.
Json to_json(const MeasureFamily& family);
MeasureFamily family_from_json(const Json& j);

// {"mean": [...], "cov": [[...], ...]}
Json to_json(const GaussianMeasure& g);
GaussianMeasure gaussian_from_json(const Json& j);

// {"newtonTol": 1e-10, "maxIter": 200, "goldenTol": 1e-8, ...}; unknown
// keys are rejected so that typos do not pass silently.
Json to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const Json& j);

/// Rows x1,...,xk[,weight]. Blank lines and lines starting with '#' are
/// skipped; an optional header row names the columns, and a column called
/// "weight" holds the weights (uniform otherwise).
EmpiricalMeasure read_empirical_csv(const std::string& path);

/// `standard`, `gaussian:<json text or file>` or `discrete:<csv file>`.
NuSpec parse_nu(const std::string& arg, int k);
/// Canonical string for headers, e.g. "standard(2)".
std::string describe_nu(const NuSpec& nu);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// `git describe` of the build.
std::string build_describe();

/// A CLI invocation as data: round-trips through JSON without loss.
struct ExperimentSpec {
  std::string command;
  MeasureFamily family = MeasureFamily::product_gaussian();
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  std::string output;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

inline const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> c{"sample",     "rate-quenched", "rate-annealed",
                                          "var-formula", "verify-ldp",   "slln",
                                          "phi-n",       "self-test"};
  return c;
}

Json to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const Json& j);

/// "# sldp spec_hash=<hex> seed=<seed> build=<describe> spec=<compact json>"
std::string metadata_header(const ExperimentSpec& spec);

/// Shortest round-trip decimal for a double ("inf", "-inf", "nan" for the
/// non-finite values; negative zero prints as 0).
std::string format_double(double v);

struct RateCurvePoint {
  Vec x;
  double value = kInf;
  bool converged = false;
  double tau = 1.0;
  Vec argmax;
};

struct RateCurve {
  std::string rate;  // "quenched" or "annealed"
  MeasureFamily family = MeasureFamily::product_gaussian();
  std::string nu;
  SolverConfig solver;
  std::vector<RateCurvePoint> points;
  /// Column names for the argmax coordinates; argmax1, argmax2, ... when empty.
  std::vector<std::string> argmaxNames;
  /// Name of the column holding RateCurvePoint::tau.
  std::string tauName = "tau";
};

/// CSV: metadata line, a comment line naming the family, nu and solver hash,
/// then x1..xk,rate,converged,<tauName> and the argmax columns. Throws ValidationError on an
/// empty curve and Error on I/O failure.
void emit_rate_curve(const RateCurve& curve, std::ostream& os, const std::string& metadata);
void emit_rate_curve(const RateCurve& curve, const std::string& path, const std::string& metadata);

/// Writes `content` to `path` ("-" means stdout); throws Error on failure.
void write_text(const std::string& path, const std::string& content);

}  // namespace sldp
