#include "qlat/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qlat {

namespace {

// Affine combination of the corral minimizing the norm: solve the bordered
// system [G 1; 1^T 0][a; mu] = [0; 1].
RealVector affine_minimizer(const RealMatrix& corral) {
  const Eigen::Index k = corral.cols();
  RealMatrix kkt = RealMatrix::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = corral.transpose() * corral;
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  RealVector rhs = RealVector::Zero(k + 1);
  rhs(k) = 1.0;
  const RealVector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormResult min_norm_point(const RealMatrix& points, int max_iterations, const RealVector* warm) {
  const Eigen::Index m = points.cols();
  MinNormResult out;
  out.weights = RealVector::Zero(m);
  if (m == 0) {
    out.point = RealVector::Zero(points.rows());
    return out;
  }
  const RealVector sq = points.colwise().squaredNorm().transpose();
  const double scale = std::max(sq.maxCoeff(), 1e-300);

  std::vector<Eigen::Index> corral;
  std::vector<double> lambda;
  if (warm != nullptr && warm->size() == m && warm->sum() > 0.0) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if ((*warm)(k) > 0.0) {
        corral.push_back(k);
        lambda.push_back((*warm)(k) / warm->sum());
      }
    }
  } else {
    Eigen::Index first = 0;
    sq.minCoeff(&first);
    corral.push_back(first);
    lambda.push_back(1.0);
  }
  RealVector x = RealVector::Zero(points.rows());
  for (std::size_t i = 0; i < corral.size(); ++i) x += lambda[i] * points.col(corral[i]);

  auto corral_matrix = [&]() {
    RealMatrix c(points.rows(), static_cast<Eigen::Index>(corral.size()));
    for (std::size_t i = 0; i < corral.size(); ++i) c.col(static_cast<Eigen::Index>(i)) = points.col(corral[i]);
    return c;
  };

  for (int iter = 0; iter < max_iterations; ++iter) {
    out.iterations = iter + 1;
    const double xx = x.squaredNorm();
    if (xx <= 1e-30 * scale) {
      out.converged = true;
      break;
    }
    const RealVector dots = points.transpose() * x;
    Eigen::Index j = 0;
    const double best = dots.minCoeff(&j);
    if (xx - best <= 1e-14 * scale) {
      out.converged = true;
      break;
    }
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) {
      out.converged = true;
      break;
    }
    corral.push_back(j);
    lambda.push_back(0.0);

    // minor cycles
    for (int minor = 0; minor < static_cast<int>(points.rows()) + 2 * static_cast<int>(corral.size()) + 5; ++minor) {
      const RealVector alpha = affine_minimizer(corral_matrix());
      double min_alpha = alpha.minCoeff();
      if (min_alpha > 1e-15) {
        for (std::size_t i = 0; i < corral.size(); ++i) lambda[i] = alpha(static_cast<Eigen::Index>(i));
        break;
      }
      double theta = std::numeric_limits<double>::infinity();
      std::size_t drop = 0;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        const double a = alpha(static_cast<Eigen::Index>(i));
        if (a <= 1e-15) {
          const double denom = lambda[i] - a;
          const double t = denom > 0.0 ? lambda[i] / denom : 0.0;
          if (t < theta) {
            theta = t;
            drop = i;
          }
        }
      }
      theta = std::min(theta, 1.0);
      for (std::size_t i = 0; i < corral.size(); ++i) {
        lambda[i] = theta * alpha(static_cast<Eigen::Index>(i)) + (1.0 - theta) * lambda[i];
      }
      lambda[drop] = 0.0;
      std::vector<Eigen::Index> keep_idx;
      std::vector<double> keep_lambda;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (lambda[i] > 1e-15) {
          keep_idx.push_back(corral[i]);
          keep_lambda.push_back(lambda[i]);
        }
      }
      corral.swap(keep_idx);
      lambda.swap(keep_lambda);
      if (corral.size() == 1) {
        lambda[0] = 1.0;
        break;
      }
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    x.setZero();
    for (std::size_t i = 0; i < corral.size(); ++i) {
      lambda[i] /= total;
      x += lambda[i] * points.col(corral[i]);
    }
  }
  for (std::size_t i = 0; i < corral.size(); ++i) out.weights(corral[i]) = lambda[i];
  out.point = x;
  out.norm = x.norm();
  return out;
}

HullProjection project_onto_hull(const RealMatrix& points, const RealVector& target, int max_iterations,
                                 const RealVector* warm) {
  const RealMatrix shifted = points.colwise() - target;
  const MinNormResult mn = min_norm_point(shifted, max_iterations, warm);
  HullProjection out;
  out.weights = mn.weights;
  out.nearest = points * mn.weights;
  out.normal = target - out.nearest;
  out.distance = out.normal.norm();
  out.iterations = mn.iterations;
  out.converged = mn.converged;
  return out;
}

NnlsResult nnls(const RealMatrix& a, const RealVector& b, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 50);
  NnlsResult out;
  out.x = RealVector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double anorm = std::max(a.norm(), 1e-300);
  const double tol = 1e-13 * anorm * std::max(1.0, b.norm()) * std::max<double>(1.0, static_cast<double>(std::max(a.rows(), n)));

  RealVector x = RealVector::Zero(n);
  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    RealMatrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const RealVector zp = ap.colPivHouseholderQr().solve(b);
    RealVector z = RealVector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
    return z;
  };

  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    const RealVector w = a.transpose() * (b - a * x);
    Eigen::Index j = -1;
    double wmax = tol;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!passive[static_cast<std::size_t>(k)] && w(k) > wmax) {
        wmax = w(k);
        j = k;
      }
    }
    if (j < 0) {
      out.converged = true;
      break;
    }
    passive[static_cast<std::size_t>(j)] = true;
    for (int inner = 0; inner <= n; ++inner) {
      RealVector z = solve_passive();
      bool all_positive = true;
      for (Eigen::Index k = 0; k < n; ++k)
        if (passive[static_cast<std::size_t>(k)] && z(k) <= 0.0) all_positive = false;
      if (all_positive) {
        x = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      Eigen::Index drop = -1;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (passive[static_cast<std::size_t>(k)] && z(k) <= 0.0) {
          const double denom = x(k) - z(k);
          const double t = denom > 0.0 ? x(k) / denom : 0.0;
          if (t < alpha) {
            alpha = t;
            drop = k;
          }
        }
      }
      x += alpha * (z - x);
      passive[static_cast<std::size_t>(drop)] = false;
      x(drop) = 0.0;
      const double xscale = std::max(1.0, x.cwiseAbs().maxCoeff());
      for (Eigen::Index k = 0; k < n; ++k) {
        if (passive[static_cast<std::size_t>(k)] && x(k) <= 1e-15 * xscale) {
          passive[static_cast<std::size_t>(k)] = false;
          x(k) = 0.0;
        }
      }
    }
  }
  out.iterations = iter;
  out.x = x;
  out.residual = b - a * x;
  out.residual_norm = out.residual.norm();
  return out;
}

}  // namespace qlat
