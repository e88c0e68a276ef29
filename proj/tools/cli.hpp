#pragma once

#include "sldp/io.hpp"

#include <string>
#include <vector>

namespace sldp::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,     // I/O errors, failed self-test
  kInvalid = 2,     // bad flags, config or input data
  kNumeric = 3,     // results written, but some point did not converge or is flagged
};

/// Executes a fully specified experiment. Missing parameters are filled
/// with their defaults inside `spec` so the written metadata is complete.
int run(ExperimentSpec& spec, int jobs);

/// Parses argv (flags, optional --spec file) and runs the experiment.
int main(int argc, const char* const* argv);

/// "lo:hi:step" -> lo, lo + step, ... <= hi (within 1e-9 step). Throws
/// ValidationError on malformed or empty grids.
std::vector<double> parse_grid(const std::string& text);

/// "1,0.5,-2" -> vector.
Vec parse_vector(const std::string& text);

}  // namespace sldp::cli
