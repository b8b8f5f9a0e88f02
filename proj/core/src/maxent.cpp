#include "qlat/maxent.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qlat/error.hpp"

namespace qlat {

bool MeanValueConstraint::in_range(double tol) const {
  const RealVector ev = eigenvalues(observable);
  return target >= ev(0) - tol && target <= ev(ev.size() - 1) + tol;
}

namespace {

LatticeElement level_set(const HermitianOperator& r, double value, const Tolerances& tol) {
  const HermitianOperator f = r - HermitianOperator::identity(r.dim()) * value;
  if (f.frobenius_norm() <= tol.rank) return LatticeElement::full(r.dim());
  const std::vector<HermitianOperator> ops{f};
  return good_representative(subspace_orth(span_subspace(ops)), tol);
}

// Eigen-decomposition of K = sum lambda_i R_i.
struct Exponent {
  RealVector e;  // ascending
  Matrix u;
  RealVector w;  // exp(-(e - e_min)), unnormalized weights
  double shift = 0.0;
  double zs = 0.0;  // sum w
  double log_z() const { return std::log(zs) - shift; }
};

Exponent exponent(const std::vector<HermitianOperator>& obs, const RealVector& lambda, int dim) {
  Matrix k = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < obs.size(); ++i) k += lambda(static_cast<Eigen::Index>(i)) * obs[i].matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k + k.adjoint()));
  Exponent x;
  x.e = es.eigenvalues();
  x.u = es.eigenvectors();
  x.shift = x.e(0);
  x.w = (-(x.e.array() - x.shift)).exp();
  x.zs = x.w.sum();
  return x;
}

int common_dim(const std::vector<HermitianOperator>& obs) {
  if (obs.empty()) throw DimensionError("no observables");
  for (const auto& o : obs)
    if (o.dim() != obs.front().dim()) throw DimensionError("observables differ in dimension");
  return obs.front().dim();
}

RealVector means(const std::vector<HermitianOperator>& obs, const Exponent& x) {
  RealVector m(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const Matrix ri = x.u.adjoint() * obs[i].matrix() * x.u;
    m(static_cast<Eigen::Index>(i)) = (ri.diagonal().real().array() * x.w.array()).sum() / x.zs;
  }
  return m;
}

RealMatrix hessian(const std::vector<HermitianOperator>& obs, const Exponent& x) {
  const Eigen::Index n = x.e.size();
  // -(divided difference of exp(-t)) / Z, in the shifted frame
  RealMatrix kern(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double d = x.e(b) - x.e(a);
      const double wa = x.w(a);
      kern(a, b) = (d == 0.0 ? wa : -wa * std::expm1(-d) / d) / x.zs;
    }
  }
  std::vector<Matrix> rs;
  for (const auto& o : obs) rs.push_back(x.u.adjoint() * o.matrix() * x.u);
  const RealVector m = means(obs, x);
  const auto k = static_cast<Eigen::Index>(obs.size());
  RealMatrix h(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      const auto& ri = rs[static_cast<std::size_t>(i)];
      const auto& rj = rs[static_cast<std::size_t>(j)];
      double s = 0.0;
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) s += (ri(b, a) * rj(a, b)).real() * kern(a, b);
      h(i, j) = h(j, i) = s - m(i) * m(j);
    }
  }
  return h;
}

Matrix state_matrix(const Exponent& x) {
  return x.u * (x.w / x.zs).asDiagonal() * x.u.adjoint();
}

}  // namespace

LatticeElement effect_level_set(const Effect& e, double lam, const Tolerances& tol) {
  return level_set(e.op(), lam, tol);
}

LatticeElement constraint_set(const MeanValueConstraint& c, const Tolerances& tol) {
  return level_set(c.observable, c.target, tol);
}

ImplicitConvexSet c_maxent(const std::vector<MeanValueConstraint>& constraints, const Tolerances& tol) {
  if (constraints.empty()) throw Error("c_maxent needs at least one constraint");
  std::optional<ImplicitConvexSet> acc;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    auto s = ImplicitConvexSet::slice(constraint_set(constraints[i], tol), "C_R" + std::to_string(i + 1));
    acc = acc ? meet(*acc, s, tol) : s;
  }
  return acc->with_note("meet in the lattice of convex sets; not necessarily an element of the subspace lattice");
}

double log_partition(const std::vector<HermitianOperator>& obs, const RealVector& lambda) {
  return exponent(obs, lambda, common_dim(obs)).log_z();
}

RealVector log_partition_gradient(const std::vector<HermitianOperator>& obs, const RealVector& lambda) {
  return -means(obs, exponent(obs, lambda, common_dim(obs)));
}

RealMatrix log_partition_hessian(const std::vector<HermitianOperator>& obs, const RealVector& lambda) {
  return hessian(obs, exponent(obs, lambda, common_dim(obs)));
}

DensityMatrix gibbs_state(const std::vector<HermitianOperator>& obs, const RealVector& lambda, int dim) {
  if (obs.empty()) return DensityMatrix::maximally_mixed(dim);
  return DensityMatrix(HermitianOperator(state_matrix(exponent(obs, lambda, dim)), Tolerances{.hermitian = 1e-10}));
}

MaxEntSolution solve_maxent(const std::vector<MeanValueConstraint>& constraints, int dim, const MaxEntOptions& opt,
                            const Tolerances& tol) {
  for (const auto& c : constraints)
    if (c.observable.dim() != dim) throw DimensionError("constraint observable has the wrong dimension");

  MaxEntSolution sol;
  if (constraints.empty()) {
    sol.rho = DensityMatrix::maximally_mixed(dim);
    sol.log_z = sol.lambda0 = std::log(static_cast<double>(dim));
    sol.entropy = von_neumann_entropy(sol.rho);
    return sol;
  }

  if (opt.check_feasibility) {
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const auto [lo, hi] = [&] {
        const RealVector ev = eigenvalues(constraints[i].observable);
        return std::pair{ev(0), ev(ev.size() - 1)};
      }();
      const double r = constraints[i].target;
      if (r < lo - 1e-9 || r > hi + 1e-9) {
        throw InfeasibleError("target " + std::to_string(r) + " of constraint " + std::to_string(i + 1) +
                                  " lies outside the spectrum",
                              "range", {static_cast<double>(i), r, lo, hi});
      }
      if (hi - lo > tol.maxent_boundary && (r < lo + tol.maxent_boundary || r > hi - tol.maxent_boundary)) {
        throw InfeasibleError("target of constraint " + std::to_string(i + 1) + " lies on the spectrum boundary",
                              "boundary", {static_cast<double>(i), r, lo, hi});
      }
    }
    const auto set = c_maxent(constraints, tol).as_slice();
    if (!set || set->is_empty()) {
      throw InfeasibleError("constraints have no common state", "empty", {});
    }
    const auto& cert = set->certificate();
    if (cert.support_rank < dim || cert.min_eigenvalue < tol.maxent_boundary) {
      throw InfeasibleError("targets lie on the boundary of the joint numerical range", "boundary",
                            {static_cast<double>(cert.support_rank), cert.min_eigenvalue});
    }
  }

  std::vector<HermitianOperator> obs;
  RealVector r(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    obs.push_back(constraints[i].observable);
    r(static_cast<Eigen::Index>(i)) = constraints[i].target;
  }
  const auto k = r.size();
  auto dual = [&](const RealVector& l) { return exponent(obs, l, dim).log_z() + l.dot(r); };

  RealVector lambda = RealVector::Zero(k);
  std::vector<double> norms;
  int it = 0;
  double resid = std::numeric_limits<double>::infinity();
  for (; it < opt.max_iterations; ++it) {
    const Exponent x = exponent(obs, lambda, dim);
    const RealVector grad = r - means(obs, x);
    resid = grad.cwiseAbs().maxCoeff();
    if (resid <= 1e-3 * opt.tol) break;
    norms.push_back(lambda.norm());
    if (lambda.norm() > opt.divergence) {
      throw InfeasibleError("dual iteration diverges: multipliers grow without bound", "divergent", norms);
    }
    const RealMatrix h = hessian(obs, x);
    Eigen::SelfAdjointEigenSolver<RealMatrix> hs(h);
    const double hmax = hs.eigenvalues().maxCoeff();
    const double hmin = hs.eigenvalues().minCoeff();
    RealVector step;
    if (hmin > 0.0 && hmax / hmin <= 1e12) {
      step = -h.ldlt().solve(grad);
    } else {
      step = -grad;
      ++sol.gradient_steps;
    }
    const double d0 = x.log_z() + lambda.dot(r);
    const double slope = grad.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const RealVector trial = lambda + t * step;
      if (dual(trial) <= d0 + 1e-4 * t * slope) {
        lambda = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // no decrease representable: stationary to rounding
      if (resid <= opt.tol) break;
      lambda += 1e-3 * step;
    }
  }
  const Exponent x = exponent(obs, lambda, dim);
  const RealVector grad = r - means(obs, x);
  resid = grad.cwiseAbs().maxCoeff();
  if (!(resid <= opt.tol)) {
    if (lambda.norm() > opt.divergence / 10) {
      norms.push_back(lambda.norm());
      throw InfeasibleError("dual iteration diverges: multipliers grow without bound", "divergent", norms);
    }
    throw NumericalError("maxent dual did not converge", resid);
  }

  sol.iterations = it;
  sol.multipliers.assign(lambda.data(), lambda.data() + k);
  sol.log_z = x.log_z();
  sol.lambda0 = sol.log_z;
  const Matrix rho = state_matrix(x);
  sol.rho = DensityMatrix(HermitianOperator(0.5 * (rho + rho.adjoint())));
  for (Eigen::Index i = 0; i < k; ++i) sol.residuals.push_back(-grad(i));
  sol.entropy = von_neumann_entropy(sol.rho);
  // exp(-lambda0 - sum lambda R) assembled from the unshifted spectrum
  const RealVector direct = (-(x.e.array() + sol.lambda0)).exp();
  sol.reconstruction_error = (x.u * direct.asDiagonal() * x.u.adjoint() - sol.rho.matrix()).norm();
  return sol;
}

}  // namespace qlat
