#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlat/convex_set.hpp"
#include "qlat/separability.hpp"

namespace qlat {

/// rho = sum_p weights_p factors_a[pairs_p.first] (x) factors_b[pairs_p.second].
struct SeparableDecomposition {
  std::vector<double> weights;
  std::vector<DensityMatrix> factors_a;
  std::vector<DensityMatrix> factors_b;
  std::vector<std::pair<int, int>> pairs;

  BipartiteDims dims() const;
  /// Throws InvariantError / DimensionError on a malformed decomposition.
  void validate(const Tolerances& tol = default_tolerances()) const;
  DensityMatrix assemble() const;
  /// mu_k: total weight on factor a_k.
  std::vector<double> marginal_weights_a() const;
  /// nu_l: total weight on factor b_l.
  std::vector<double> marginal_weights_b() const;

  /// One pair per term; pure factors become projectors.
  static SeparableDecomposition from_approximation(const SeparableApproximation& ap);
  /// Weights as given, pairs (k, k).
  static SeparableDecomposition diagonal(std::vector<double> weights, std::vector<DensityMatrix> a,
                                         std::vector<DensityMatrix> b);
};

/// tr_i of every generator, duplicates (within 1e-12) removed.
StatePolytope tau_polytope(const StatePolytope& c, Subsystem keep, const BipartiteDims& dims);
/// Hull of all pairwise tensor products of generators.
StatePolytope lambda(const StatePolytope& c1, const StatePolytope& c2);
/// lambda(tau_1(c), tau_2(c)).
StatePolytope lambda_tau(const StatePolytope& c, const BipartiteDims& dims);

struct IdentityReport {
  double residual_first = 0.0;
  double residual_second = 0.0;
  bool ok = false;
  double residual() const { return std::max(residual_first, residual_second); }
};

/// tau(lambda(c1, c2)) = (c1, c2) by mutual generator membership.
IdentityReport check_tau_lambda_identity(const StatePolytope& c1, const StatePolytope& c2,
                                         const Tolerances& tol = default_tolerances());

/// Generators a_k (x) b_l for all index pairs (k, l).
StatePolytope css_for_decomposition(const SeparableDecomposition& dec);

struct CssCheck {
  bool css = false;
  double residual = 0.0;
};

/// c = lambda_tau(c) by mutual generator membership (tol.membership).
CssCheck is_css(const StatePolytope& c, const BipartiteDims& dims, const Tolerances& tol = default_tolerances());

struct CssVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::optional<SeparableDecomposition> decomposition;
  std::optional<StatePolytope> css;
  double membership_residual = 0.0;
  double invariance_residual = 0.0;
  /// Distance reached by project_separable when no decomposition was given.
  std::optional<double> recovered_distance;
  /// Smallest von Neumann entropy over the CSS generators.
  std::optional<double> min_entropy;
  std::string note;
};

/// SEPARABLE with a CSS certificate, or INCONCLUSIVE; never ENTANGLED.
CssVerdict separable_via_css(const DensityMatrix& rho, const std::optional<SeparableDecomposition>& dec,
                             const BipartiteDims& dims, const ProjectionOptions& opt = {},
                             const Tolerances& tol = default_tolerances());

}  // namespace qlat
