#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlat/composite.hpp"
#include "qlat/operator.hpp"
#include "qlat/verdict.hpp"

namespace qlat {

enum class ExtremumMode { min, max };

/// Best product vector found for v, w -> (v (x) w)^dagger op (v (x) w).
struct ProductOptimum {
  PureStateVector v;
  PureStateVector w;
  double value = 0.0;
  ExtremumMode mode = ExtremumMode::max;
  int restarts_used = 0;
  int iterations = 0;  // half-steps of the winning restart
  int best_restart = 0;
  bool converged = false;
  /// Values after each half-step of the winning restart.
  std::vector<double> history;
  /// Alternating iteration only guarantees a local optimum.
  static constexpr const char* caveat = "local optimum of the alternating iteration; best over restarts";
};

struct ExtremaOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
  int max_iterations = 500;
  double value_tol = 1e-12;
};

/// Alternating extreme-eigenvector iteration over product vectors.
/// Restart 0 starts from the leading Schmidt vector of the extreme
/// eigenvector of `op`; the rest from seeded random vectors.
ProductOptimum product_extrema(const HermitianOperator& op, const BipartiteDims& dims, ExtremumMode mode,
                               const ExtremaOptions& opt = {});

/// (lambda_min, lambda_max): extrema of tr(op .) over all states.
std::pair<double, double> state_extrema(const HermitianOperator& op);

/// Interval form: separable states satisfy m <= tr(operator sigma) <= M.
struct Witness {
  HermitianOperator op;  // unit Frobenius norm
  double m = 0.0;
  double M = 0.0;
  double value = 0.0;      // tr(target op)
  double violation = 0.0;  // max(value - M, m - value)
  DensityMatrix target;
  std::string source;
  bool certified(double tol) const { return violation > tol; }
  /// op - M I: tr(shifted sigma) <= 0 on separable states,
  /// tr(shifted target) = value - M.
  HermitianOperator shifted_upper() const;
};

/// Builds a witness from a direction (normalized here), computing m, M by
/// product_extrema.
Witness make_witness(const HermitianOperator& direction, const DensityMatrix& target, const BipartiteDims& dims,
                     const ExtremaOptions& opt, std::string source);

struct CriterionResult {
  Verdict verdict = Verdict::inconclusive;
  std::string method;
  int index = -1;      // eigenvector index for the spectral test
  double value = 0.0;  // t = tr(xx^dagger rho), or lambda_j
  double bound = 0.0;  // sigma_1(reshape(x))^2
};

/// ENTANGLED iff tr(xx^dagger rho) > sigma_1(reshape x)^2 + tol.criterion.
CriterionResult pure_witness_test(const DensityMatrix& rho, const PureStateVector& x, const BipartiteDims& dims,
                                  const Tolerances& tol = default_tolerances());

/// Eigen-decomposes rho and flags the first eigenvector with
/// lambda_j > sigma_1(reshape x_j)^2 + tol.criterion (the largest margin
/// is reported).
CriterionResult spectral_criterion(const DensityMatrix& rho, const BipartiteDims& dims,
                                   const Tolerances& tol = default_tolerances());

struct WitnessSearchOptions {
  int samples = 200;  // random Hermitian directions (eigenvector directions are added)
  int restarts = 20;
  std::uint64_t seed = 0;
  /// Restarts used to re-check a candidate violation before reporting it.
  int confirm_restarts = 60;
};

struct WitnessSearchResult {
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> best;
  int directions = 0;
};

WitnessSearchResult random_witness_search(const DensityMatrix& rho, const BipartiteDims& dims,
                                          const WitnessSearchOptions& opt = {},
                                          const Tolerances& tol = default_tolerances());

struct SeparableApproximation {
  DensityMatrix point;
  std::vector<double> weights;
  std::vector<PureStateVector> factors_a;
  std::vector<PureStateVector> factors_b;
  double distance = 0.0;  // Frobenius, to the target
  double gap = 0.0;       // Frank-Wolfe duality gap at the last iterate
  int iterations = 0;
  bool converged = false;
  std::vector<double> distances;  // per iteration, non-increasing

  /// sum_k weights_k |a_k><a_k| (x) |b_k><b_k|.
  Matrix reconstruct() const;
};

struct ProjectionOptions {
  int max_iterations = 2000;
  std::uint64_t seed = 0;
  int lmo_restarts = 8;
  int lmo_max_iterations = 100;
  double stop_distance = 1e-9;
  double stop_gap = 1e-13;
};

struct ProjectionResult {
  SeparableApproximation approximation;
  Witness witness;
  Verdict verdict = Verdict::inconclusive;
};

/// Fully-corrective conditional gradient: the linear oracle is
/// product_extrema in min mode, and after each new atom the weights are
/// re-optimized exactly over the active atoms (Wolfe corral), so the
/// active set stays affinely independent.
ProjectionResult project_separable(const DensityMatrix& rho, const BipartiteDims& dims,
                                   const ProjectionOptions& opt = {},
                                   const Tolerances& tol = default_tolerances());

struct PptResult {
  bool ppt = true;
  double min_eigenvalue = 0.0;
  /// PPT decides separability (d1 d2 <= 6).
  bool exact = false;
};

PptResult ppt_check(const DensityMatrix& rho, const BipartiteDims& dims, const Tolerances& tol = default_tolerances());

}  // namespace qlat
