#pragma once

#include <vector>

#include "qlat/convex_set.hpp"
#include "qlat/operator.hpp"
#include "qlat/subspace.hpp"

namespace qlat {

/// <R> = r.
struct MeanValueConstraint {
  HermitianOperator observable;
  double target = 0.0;
  /// target inside [lambda_min - tol, lambda_max + tol].
  bool in_range(double tol = 1e-9) const;
};

/// States with tr(E rho) = lam.
LatticeElement effect_level_set(const Effect& e, double lam, const Tolerances& tol = default_tolerances());
/// States with tr(R rho) = r; empty for an infeasible target.
LatticeElement constraint_set(const MeanValueConstraint& c, const Tolerances& tol = default_tolerances());
/// Meet of the constraint sets.  Throws Error on an empty list.
ImplicitConvexSet c_maxent(const std::vector<MeanValueConstraint>& constraints,
                           const Tolerances& tol = default_tolerances());

/// ln tr exp(-sum lambda_i R_i).
double log_partition(const std::vector<HermitianOperator>& obs, const RealVector& lambda);
/// d ln Z / d lambda_i = -<R_i>.
RealVector log_partition_gradient(const std::vector<HermitianOperator>& obs, const RealVector& lambda);
/// d^2 ln Z / d lambda_i d lambda_j: the Kubo-Mori covariance of the R_i
/// (the ordinary covariance when they commute).
RealMatrix log_partition_hessian(const std::vector<HermitianOperator>& obs, const RealVector& lambda);
/// exp(-sum lambda_i R_i) / Z.
DensityMatrix gibbs_state(const std::vector<HermitianOperator>& obs, const RealVector& lambda, int dim);

struct MaxEntOptions {
  int max_iterations = 500;
  double tol = 1e-8;            // per-constraint residual
  double divergence = 1e3;      // multiplier norm treated as divergence
  /// Range, emptiness and boundary prechecks before the dual iteration.
  bool check_feasibility = true;
};

struct MaxEntSolution {
  DensityMatrix rho;
  std::vector<double> multipliers;
  double lambda0 = 0.0;
  double log_z = 0.0;
  std::vector<double> residuals;  // tr(R_i rho) - r_i
  double entropy = 0.0;
  int iterations = 0;
  int gradient_steps = 0;  // fallbacks from ill-conditioned Newton systems
  double reconstruction_error = 0.0;  // || exp(-lambda0 - sum lambda R) - rho ||_F
};

/// Minimizes ln Z(lambda) + sum lambda_i r_i by safeguarded Newton.
/// Throws DimensionError for mixed dimensions and InfeasibleError (kind
/// "range", "empty", "boundary" or "divergent") when no interior solution
/// exists; NumericalError if the budget runs out.
MaxEntSolution solve_maxent(const std::vector<MeanValueConstraint>& constraints, int dim,
                            const MaxEntOptions& opt = {}, const Tolerances& tol = default_tolerances());

}  // namespace qlat
