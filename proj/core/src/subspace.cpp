#include "qlat/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlat/error.hpp"

namespace qlat {

// --------------------------------------------------------------- subspaces

HermitianSubspace::HermitianSubspace(int dim) : dim_(dim), q_(RealMatrix(dim * dim, 0)) {
  if (dim < 1) throw DimensionError("subspace ambient dimension must be positive");
}

HermitianSubspace HermitianSubspace::from_coords(int dim, const RealMatrix& columns, double rank_tol) {
  HermitianSubspace s(dim);
  if (columns.rows() != static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionError("subspace coordinates have the wrong length");
  }
  s.q_ = orthonormal_columns(columns, rank_tol);
  return s;
}

HermitianSubspace HermitianSubspace::full(int dim) {
  HermitianSubspace s(dim);
  s.q_ = RealMatrix::Identity(dim * dim, dim * dim);
  return s;
}

std::vector<HermitianOperator> HermitianSubspace::basis() const {
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(q_.cols()));
  for (Eigen::Index j = 0; j < q_.cols(); ++j) {
    out.emplace_back(from_hermitian_coords(q_.col(j), dim_));
  }
  return out;
}

double HermitianSubspace::gram_defect() const {
  if (q_.cols() == 0) return 0.0;
  return (q_.transpose() * q_ - RealMatrix::Identity(q_.cols(), q_.cols())).cwiseAbs().maxCoeff();
}

double HermitianSubspace::residual(const RealVector& x) const {
  if (q_.cols() == 0) return x.norm();
  return (x - q_ * (q_.transpose() * x)).norm();
}

double HermitianSubspace::residual(const HermitianOperator& h) const {
  if (h.dim() != dim_) throw DimensionError("subspace residual: dimension mismatch");
  return residual(hermitian_coords(h.matrix()));
}

HermitianOperator HermitianSubspace::project(const HermitianOperator& h) const {
  if (h.dim() != dim_) throw DimensionError("subspace projection: dimension mismatch");
  const RealVector x = hermitian_coords(h.matrix());
  const RealVector p = q_.cols() ? RealVector(q_ * (q_.transpose() * x)) : RealVector::Zero(x.size());
  return HermitianOperator(from_hermitian_coords(p, dim_));
}

HermitianSubspace span_subspace(std::span<const HermitianOperator> ops, double rank_tol) {
  if (ops.empty()) throw InvariantError("span of an empty list", 0.0);
  const int d = ops.front().dim();
  RealMatrix cols(d * d, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].dim() != d) throw DimensionError("span_subspace: dimension mismatch");
    cols.col(static_cast<Eigen::Index>(i)) = hermitian_coords(ops[i].matrix());
  }
  if (cols.norm() < 1e-14) throw InvariantError("span of all-zero operators", cols.norm());
  return HermitianSubspace::from_coords(d, cols, rank_tol);
}

namespace {

void require_same(const HermitianSubspace& s, const HermitianSubspace& t, const char* where) {
  if (s.dim() != t.dim()) throw DimensionError(std::string(where) + ": ambient dimension mismatch");
}

}  // namespace

HermitianSubspace subspace_join(const HermitianSubspace& s, const HermitianSubspace& t) {
  require_same(s, t, "subspace_join");
  RealMatrix cols(s.coords().rows(), s.rank() + t.rank());
  cols << s.coords(), t.coords();
  return HermitianSubspace::from_coords(s.dim(), cols);
}

HermitianSubspace subspace_orth(const HermitianSubspace& s) {
  const Eigen::Index n = static_cast<Eigen::Index>(s.dim()) * s.dim();
  return HermitianSubspace::from_coords(s.dim(), orthogonal_complement(s.coords(), n));
}

HermitianSubspace subspace_meet(const HermitianSubspace& s, const HermitianSubspace& t) {
  require_same(s, t, "subspace_meet");
  return subspace_orth(subspace_join(subspace_orth(s), subspace_orth(t)));
}

double inclusion_residual(const HermitianSubspace& s, const HermitianSubspace& t) {
  require_same(s, t, "inclusion_residual");
  double worst = 0.0;
  for (Eigen::Index j = 0; j < s.coords().cols(); ++j) worst = std::max(worst, t.residual(RealVector(s.coords().col(j))));
  return worst;
}

bool subspace_leq(const HermitianSubspace& s, const HermitianSubspace& t, double tol) {
  return inclusion_residual(s, t) <= tol;
}

bool subspace_equal(const HermitianSubspace& s, const HermitianSubspace& t, double tol) {
  return s.rank() == t.rank() && subspace_leq(s, t, tol) && subspace_leq(t, s, tol);
}

// ------------------------------------------------ relative-interior search

namespace {

// Coordinates of V Y V^dagger for every coordinate unit vector Y (n x n).
RealMatrix compression_map(const Matrix& v) {
  const int d = static_cast<int>(v.rows());
  const int n = static_cast<int>(v.cols());
  RealMatrix t(d * d, n * n);
  for (int a = 0; a < n * n; ++a) {
    RealVector e = RealVector::Zero(n * n);
    e(a) = 1.0;
    const Matrix y = from_hermitian_coords(e, n);
    t.col(a) = hermitian_coords(v * y * v.adjoint());
  }
  return t;
}

bool cholesky_ok(const Matrix& m, Eigen::LLT<Matrix>& llt) {
  llt.compute(m);
  return llt.info() == Eigen::Success;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  double s = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
  return 2.0 * s;
}

struct BarrierOutcome {
  RealVector c;
  double t = 0.0;
  Matrix y;
  Matrix z;  // mu (Y - tI)^{-1}, trace ~ 1
  int iterations = 0;
};

// max t + mu log det(Y(c) - t I) along a decreasing mu schedule, with
// Y(c) = Y0 + sum c_j D_j.
BarrierOutcome maximize_min_eigenvalue(const Matrix& y0, const std::vector<Matrix>& dirs) {
  const int n = static_cast<int>(y0.rows());
  const int m = static_cast<int>(dirs.size());
  const Matrix eye = Matrix::Identity(n, n);
  BarrierOutcome out;
  out.c = RealVector::Zero(m);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(y0, Eigen::EigenvaluesOnly);
    out.t = es.eigenvalues()(0) - 1.0;
  }
  auto assemble = [&](const RealVector& c) {
    Matrix y = y0;
    for (int j = 0; j < m; ++j) y += c(j) * dirs[static_cast<std::size_t>(j)];
    return y;
  };

  double mu = 1.0;
  const double mu_min = 1e-11;
  Eigen::LLT<Matrix> llt;
  while (true) {
    for (int it = 0; it < 200; ++it) {
      ++out.iterations;
      const Matrix y = assemble(out.c);
      const Matrix mm = y - out.t * eye;
      if (!cholesky_ok(mm, llt)) throw NumericalError("barrier iterate left the feasible cone", out.t);
      const Matrix w = llt.solve(eye);
      const double f = out.t + mu * log_det(llt);

      RealVector g(m + 1);
      RealMatrix h(m + 1, m + 1);
      std::vector<Matrix> p(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        g(i) = mu * (w.array() * dirs[static_cast<std::size_t>(i)].transpose().array()).sum().real();
        p[static_cast<std::size_t>(i)] = w * dirs[static_cast<std::size_t>(i)] * w;
      }
      g(m) = 1.0 - mu * w.trace().real();
      for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
          const double v = -mu * (p[static_cast<std::size_t>(i)].array() *
                                  dirs[static_cast<std::size_t>(j)].transpose().array()).sum().real();
          h(i, j) = h(j, i) = v;
        }
        h(i, m) = h(m, i) = mu * p[static_cast<std::size_t>(i)].trace().real();
      }
      h(m, m) = -mu * (w * w).trace().real();

      const RealVector step = (-h).ldlt().solve(g);
      const double decrement = g.dot(step);
      if (!(decrement > 2e-13)) break;

      double s = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        const RealVector c_new = out.c + s * step.head(m);
        const double t_new = out.t + s * step(m);
        const Matrix m_new = assemble(c_new) - t_new * eye;
        if (cholesky_ok(m_new, llt)) {
          const double f_new = t_new + mu * log_det(llt);
          if (f_new >= f + 0.25 * s * decrement) {
            out.c = c_new;
            out.t = t_new;
            accepted = true;
            break;
          }
        }
        s *= 0.5;
      }
      if (!accepted) break;
    }
    if (mu <= mu_min) break;
    mu = std::max(mu * 0.2, mu_min);
  }
  out.y = assemble(out.c);
  const Matrix mm = out.y - out.t * eye;
  llt.compute(mm);
  out.z = mu * llt.solve(eye);
  return out;
}

struct InteriorOutcome {
  InteriorCertificate cert;
  Matrix support;            // d x n, orthonormal columns
  Matrix point;              // d x d, empty when nonempty == false
  RealMatrix reduced_span;   // good representative coordinates (d^2 x r)
};

InteriorOutcome relative_interior(const HermitianSubspace& s, const Tolerances& tol) {
  const int d = s.dim();
  InteriorOutcome out;
  Matrix v = Matrix::Identity(d, d);
  const RealMatrix& q = s.coords();

  while (true) {
    const int n = static_cast<int>(v.cols());
    if (n == 0 || q.cols() == 0) {
      out.cert.nonempty = false;
      out.cert.trace_free = true;
      return out;
    }
    const RealMatrix t_map = compression_map(v);
    const RealMatrix outside = q.cols() ? RealMatrix(t_map - q * (q.transpose() * t_map)) : t_map;
    const RealMatrix b = null_space(outside, 1e-10);
    const RealVector tau = hermitian_coords(Matrix::Identity(n, n));
    const RealVector g = b.transpose() * tau;
    if (b.cols() == 0 || g.norm() < 1e-12) {
      out.cert.nonempty = false;
      out.cert.trace_free = out.cert.reductions == 0;
      out.cert.min_eigenvalue = -std::numeric_limits<double>::infinity();
      return out;
    }
    const RealVector y0c = b * (g / g.squaredNorm());
    const Matrix y0 = from_hermitian_coords(y0c, n);
    RealMatrix gt(1, g.size());
    gt.row(0) = g.transpose();
    const RealMatrix nd = null_space(gt, 1e-12);
    std::vector<Matrix> dirs;
    for (Eigen::Index j = 0; j < nd.cols(); ++j) {
      dirs.push_back(from_hermitian_coords(b * nd.col(j), n));
    }

    const BarrierOutcome bo = maximize_min_eigenvalue(y0, dirs);
    out.cert.newton_iterations += bo.iterations;
    out.cert.min_eigenvalue = bo.t;

    if (bo.t > tol.interior) {
      out.cert.nonempty = true;
      out.cert.support_rank = n;
      out.support = v;
      Matrix y = 0.5 * (bo.y + bo.y.adjoint());
      y /= y.trace().real();
      out.point = v * y * v.adjoint();
      out.reduced_span = t_map * b;
      return out;
    }
    if (bo.t < -tol.empty) {
      out.cert.nonempty = false;
      return out;
    }
    // t* ~ 0: every member is orthogonal to the dual matrix Z >= 0, so the
    // members live on ker(Z); restrict to it and repeat.
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (bo.z + bo.z.adjoint()));
    const double cut = 0.25 / n;
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()(i) <= cut) keep.push_back(i);
    if (static_cast<int>(keep.size()) == n) {
      // no identifiable kernel: treat as a (barely) interior point
      if (bo.t > 0.0) {
        out.cert.nonempty = true;
        out.cert.support_rank = n;
        out.support = v;
        Matrix y = 0.5 * (bo.y + bo.y.adjoint());
        y /= y.trace().real();
        out.point = v * y * v.adjoint();
        out.reduced_span = t_map * b;
        return out;
      }
      out.cert.nonempty = false;
      return out;
    }
    Matrix u(n, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) u.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    v = v * u;
    ++out.cert.reductions;
  }
}

}  // namespace

// --------------------------------------------------------- lattice elements

LatticeElement LatticeElement::empty(int dim) {
  LatticeElement e;
  e.span_ = HermitianSubspace(dim);
  e.support_ = Matrix(dim, 0);
  return e;
}

LatticeElement LatticeElement::full(int dim) {
  LatticeElement e;
  e.span_ = HermitianSubspace::full(dim);
  e.interior_ = DensityMatrix::maximally_mixed(dim);
  e.support_ = Matrix::Identity(dim, dim);
  e.cert_.nonempty = true;
  e.cert_.min_eigenvalue = 1.0 / dim;
  e.cert_.support_rank = dim;
  return e;
}

LatticeElement good_representative(const HermitianSubspace& s, const Tolerances& tol) {
  const InteriorOutcome io = relative_interior(s, tol);
  LatticeElement e;
  e.cert_ = io.cert;
  if (!io.cert.nonempty) {
    e.span_ = HermitianSubspace(s.dim());
    e.support_ = Matrix(s.dim(), 0);
    return e;
  }
  e.span_ = HermitianSubspace::from_coords(s.dim(), io.reduced_span);
  e.support_ = io.support;
  e.interior_ = DensityMatrix(HermitianOperator(io.point, Tolerances{.hermitian = 1e-9}),
                              Tolerances{.psd = 1e-9, .trace = 1e-9});
  return e;
}

bool LatticeElement::contains(const DensityMatrix& rho, const Tolerances& tol) const {
  if (rho.dim() != dim()) throw DimensionError("lattice membership: dimension mismatch");
  if (is_empty()) return false;
  return span_.residual(rho.op()) <= tol.membership;
}

std::vector<DensityMatrix> LatticeElement::sample(int count, Rng& rng, int burn_in) const {
  std::vector<DensityMatrix> out;
  if (is_empty() || count <= 0) return out;
  const int d = dim();
  // traceless directions of the span
  const RealVector tau = hermitian_coords(Matrix::Identity(d, d));
  RealMatrix gt(1, span_.rank());
  gt.row(0) = (span_.coords().transpose() * tau).transpose();
  const RealMatrix nd = null_space(gt, 1e-12);
  const RealMatrix dirs = span_.coords() * nd;
  Matrix current = interior_->matrix();
  if (dirs.cols() == 0) {
    for (int i = 0; i < count; ++i) out.push_back(*interior_);
    return out;
  }
  const Matrix& v = support_;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int total = count * (burn_in + 1);
  for (int step = 0; step < total; ++step) {
    RealVector coef(dirs.cols());
    for (Eigen::Index j = 0; j < coef.size(); ++j) coef(j) = gauss(rng);
    const Matrix dmat = from_hermitian_coords(dirs * coef, d);
    const Matrix rv = v.adjoint() * current * v;
    const Matrix dv = v.adjoint() * dmat * v;
    Eigen::SelfAdjointEigenSolver<Matrix> er(0.5 * (rv + rv.adjoint()));
    const RealVector lam = er.eigenvalues().cwiseMax(1e-300);
    const Matrix isq = er.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() * er.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> eg(isq * dv * isq, Eigen::EigenvaluesOnly);
    const double mu_min = eg.eigenvalues()(0);
    const double mu_max = eg.eigenvalues()(eg.eigenvalues().size() - 1);
    const double lo = mu_max > 0.0 ? -1.0 / mu_max : -1e3;
    const double hi = mu_min < 0.0 ? -1.0 / mu_min : 1e3;
    // stay a hair inside the chord
    const double t = lo + (hi - lo) * (0.001 + 0.998 * unif(rng));
    current += t * dmat;
    current = 0.5 * (current + current.adjoint()).eval();
    current /= current.trace().real();
    if ((step + 1) % (burn_in + 1) == 0) {
      out.emplace_back(HermitianOperator(current), Tolerances{.psd = 1e-9, .trace = 1e-9});
    }
  }
  return out;
}

LatticeElement lattice_meet(const LatticeElement& a, const LatticeElement& b, const Tolerances& tol) {
  if (a.dim() != b.dim()) throw DimensionError("lattice_meet: dimension mismatch");
  if (a.is_empty() || b.is_empty()) return LatticeElement::empty(a.dim());
  return good_representative(subspace_meet(a.subspace(), b.subspace()), tol);
}

LatticeElement lattice_join(const LatticeElement& a, const LatticeElement& b, const Tolerances& tol) {
  if (a.dim() != b.dim()) throw DimensionError("lattice_join: dimension mismatch");
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return good_representative(subspace_join(a.subspace(), b.subspace()), tol);
}

LatticeElement lattice_neg(const LatticeElement& a, const Tolerances& tol) {
  return good_representative(subspace_orth(a.subspace()), tol);
}

bool lattice_leq(const LatticeElement& a, const LatticeElement& b, const Tolerances& tol) {
  if (a.dim() != b.dim()) throw DimensionError("lattice_leq: dimension mismatch");
  if (a.is_empty()) return true;
  if (b.is_empty()) return false;
  return subspace_leq(a.subspace(), b.subspace(), tol.subspace);
}

bool lattice_equal(const LatticeElement& a, const LatticeElement& b, const Tolerances& tol) {
  return lattice_leq(a, b, tol) && lattice_leq(b, a, tol);
}

LatticeElement atom_of(const DensityMatrix& rho) {
  LatticeElement e;
  const HermitianOperator ops[] = {rho.op()};
  e.span_ = span_subspace(ops);
  e.interior_ = rho;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  std::vector<int> idx;
  for (int i = 0; i < rho.dim(); ++i)
    if (es.eigenvalues()(i) > 1e-12) idx.push_back(i);
  e.support_ = Matrix(rho.dim(), static_cast<Eigen::Index>(idx.size()));
  double lmin = 1.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    e.support_.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(idx[k]);
    lmin = std::min(lmin, es.eigenvalues()(idx[k]));
  }
  e.cert_.nonempty = true;
  e.cert_.min_eigenvalue = lmin;
  e.cert_.support_rank = static_cast<int>(idx.size());
  return e;
}

// ------------------------------------------------------------------- faces

double FaceFunctional::support_defect() const { return max_eigenvalue(normal) - offset; }

LatticeElement face_to_lattice_element(const FaceFunctional& f, const Tolerances& tol) {
  const double defect = f.support_defect();
  if (defect > tol.face) throw InvariantError("functional is not supporting on the state space", defect);
  const int d = f.normal.dim();
  const Matrix shifted = f.normal.matrix() - f.offset * Matrix::Identity(d, d);
  const RealVector c = hermitian_coords(shifted);
  if (c.norm() < 1e-14) return LatticeElement::full(d);
  RealMatrix row(1, c.size());
  row.row(0) = c.transpose();
  const HermitianSubspace kernel = HermitianSubspace::from_coords(d, null_space(row, 1e-12));
  return good_representative(kernel, tol);
}

bool ProjectorFace::contains(const DensityMatrix& rho, const Tolerances& tol) const {
  return hs_inner(rho.op(), p_.op()) >= 1.0 - tol.face;
}

LatticeElement ProjectorFace::to_lattice(const Tolerances& tol) const {
  if (p_.rank() == 0) return LatticeElement::empty(p_.dim());
  return face_to_lattice_element(FaceFunctional{p_.op(), 1.0}, tol);
}

ProjectorFace projector_face(const Projector& p) { return ProjectorFace(p); }

Projector projector_meet(const Projector& a, const Projector& b) {
  if (a.dim() != b.dim()) throw DimensionError("projector_meet: dimension mismatch");
  const int d = a.dim();
  Matrix stacked(2 * d, d);
  stacked << (Matrix::Identity(d, d) - a.op().matrix()), (Matrix::Identity(d, d) - b.op().matrix());
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-8) ++r;
  return Projector::onto_span(svd.matrixV().rightCols(d - r));
}

Projector projector_join(const Projector& a, const Projector& b) {
  if (a.dim() != b.dim()) throw DimensionError("projector_join: dimension mismatch");
  Matrix cols(a.dim(), 2 * a.dim());
  cols << a.op().matrix(), b.op().matrix();
  return Projector::onto_span(cols, 1e-8);
}

// ------------------------------------------------------ composite transfer

LatticeElement psi_product(const LatticeElement& a, const LatticeElement& b, const Tolerances& tol) {
  const int d = a.dim() * b.dim();
  if (a.is_empty() || b.is_empty()) return LatticeElement::empty(d);
  const auto ba = a.subspace().basis();
  const auto bb = b.subspace().basis();
  std::vector<HermitianOperator> prods;
  prods.reserve(ba.size() * bb.size());
  for (const auto& x : ba)
    for (const auto& y : bb) prods.push_back(kron(x, y));
  return good_representative(span_subspace(prods), tol);
}

LatticeElement tau_on_L(const LatticeElement& l, Subsystem keep, const BipartiteDims& dims,
                        const Tolerances& tol) {
  if (l.dim() != dims.total()) throw DimensionError("tau_on_L: dimension mismatch");
  const int dk = dims.factor(static_cast<int>(keep));
  if (l.is_empty()) return LatticeElement::empty(dk);
  std::vector<HermitianOperator> images;
  for (const auto& b : l.subspace().basis()) images.push_back(partial_trace(b, keep, dims));
  double total = 0.0;
  for (const auto& im : images) total += im.frobenius_norm();
  if (total < 1e-14) return LatticeElement::empty(dk);
  return good_representative(span_subspace(images), tol);
}

}  // namespace qlat
