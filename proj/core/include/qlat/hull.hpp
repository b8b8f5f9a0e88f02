#pragma once

#include "qlat/linalg.hpp"

namespace qlat {

/// Minimum-norm point of the convex hull of the columns of `points`
/// (Wolfe's corral algorithm).  Exact up to rounding; the active corral is
/// affinely independent, so at most n + 1 weights are nonzero.
struct MinNormResult {
  RealVector point;    // nearest point of the hull to the origin
  RealVector weights;  // one per column, simplex
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// `warm`: optional starting weights; their support must be affinely independent.
MinNormResult min_norm_point(const RealMatrix& points, int max_iterations = 20000,
                             const RealVector* warm = nullptr);

/// Projection of `target` onto conv(columns of `points`).
struct HullProjection {
  RealVector weights;
  RealVector nearest;
  double distance = 0.0;
  /// target - nearest: <normal, p> <= <normal, nearest> for every column p,
  /// and <normal, target> - <normal, nearest> = distance^2.
  RealVector normal;
  int iterations = 0;
  bool converged = false;
};

HullProjection project_onto_hull(const RealMatrix& points, const RealVector& target,
                                 int max_iterations = 20000, const RealVector* warm = nullptr);

/// Nonnegative least squares min ||A x - b|| s.t. x >= 0 (Lawson-Hanson
/// active set).  At termination the dual vector A^T (b - A x) is <= 0 on
/// the zero set, so a nonzero residual is a Farkas certificate of
/// infeasibility of {A x = b, x >= 0}.
struct NnlsResult {
  RealVector x;
  RealVector residual;  // b - A x
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

NnlsResult nnls(const RealMatrix& a, const RealVector& b, int max_iterations = 0);

}  // namespace qlat
