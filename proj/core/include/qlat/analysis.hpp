#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlat/io.hpp"

namespace qlat {

struct MethodResult {
  std::string method;
  Verdict verdict = Verdict::inconclusive;
  Json certificate;
  double seconds = 0.0;
};

struct AnalysisOptions {
  /// Subset of: spectral, pure_witness, witness_search, projection, ppt, css.
  std::vector<std::string> methods{"spectral", "pure_witness", "witness_search", "projection", "ppt", "css"};
  std::uint64_t seed = 0;
  int restarts = 20;
  int max_iterations = 2000;
  int samples = 200;
  Tolerances tol{};
  std::optional<SeparableDecomposition> decomposition;
};

struct AnalysisReport {
  std::string input_digest;
  BipartiteDims dims;
  std::uint64_t seed = 0;
  Tolerances tol{};
  std::vector<MethodResult> results;
  Verdict verdict = Verdict::inconclusive;

  /// Schema 1 document; timings live under "timings" only.
  Json to_json(bool with_timings = true) const;
};

const std::vector<std::string>& known_methods();

/// ENTANGLED if any method certifies entanglement, SEPARABLE if any
/// decomposition or exact PPT certificate applies, else INCONCLUSIVE.
/// Throws NumericalError when both are certified.
Verdict merge_verdicts(const std::vector<MethodResult>& results);

/// Runs the selected criteria.  Throws Error on an unknown method name.
AnalysisReport check_separability(const DensityMatrix& rho, const BipartiteDims& dims,
                                  const AnalysisOptions& opt = {}, const std::string& input_digest = "");

}  // namespace qlat
