#include "qlat/operator.hpp"

#include <algorithm>
#include <cmath>

#include "qlat/error.hpp"
#include "qlat/random.hpp"

namespace qlat {

// ---------------------------------------------------------------- Hermitian

InvariantReport HermitianOperator::check(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return {false, std::numeric_limits<double>::infinity()};
  if (!all_finite(m)) return {false, std::numeric_limits<double>::infinity()};
  const double dev = hermiticity_defect(m);
  return {dev <= tol.hermitian, dev};
}

HermitianOperator::HermitianOperator(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("Hermitian operator needs a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!all_finite(m)) throw InvariantError("matrix has non-finite entries", std::numeric_limits<double>::infinity());
  const auto rep = check(m, tol);
  if (!rep.ok) throw InvariantError("matrix is not Hermitian", rep.deviation);
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Matrix::Identity(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim), Trusted{});
}

HermitianOperator HermitianOperator::outer(const Vector& x) {
  Matrix m = x * x.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return HermitianOperator(std::move(m), Trusted{});
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("operator sum: dimension mismatch");
  return HermitianOperator(m_ + o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("operator difference: dimension mismatch");
  return HermitianOperator(m_ - o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(m_ * s, Trusted{});
}

// ------------------------------------------------------------------ spectra

RealVector eigenvalues(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const HermitianOperator& h) { return eigenvalues(h)(0); }

double max_eigenvalue(const HermitianOperator& h) {
  const auto ev = eigenvalues(h);
  return ev(ev.size() - 1);
}

Matrix SpectralDecomposition::reconstruct() const {
  const int d = eigenvectors.empty() ? 0 : eigenvectors.front().dim();
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < eigenvectors.size(); ++i) {
    const auto& v = eigenvectors[i].amplitudes();
    m += eigenvalues(static_cast<Eigen::Index>(i)) * (v * v.adjoint());
  }
  return m;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed", 0.0);
  const int d = h.dim();
  SpectralDecomposition out;
  out.eigenvalues.resize(d);
  Matrix vecs(d, d);
  for (int i = 0; i < d; ++i) {
    out.eigenvalues(i) = es.eigenvalues()(d - 1 - i);
    vecs.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  // Orthonormalize within degenerate clusters so the basis stays clean even
  // when the solver returns slightly mixed vectors.
  int start = 0;
  while (start < d) {
    int end = start + 1;
    while (end < d && std::abs(out.eigenvalues(end - 1) - out.eigenvalues(end)) < tol.degenerate_gap) ++end;
    if (end - start > 1) {
      Eigen::HouseholderQR<Matrix> qr(vecs.middleCols(start, end - start));
      vecs.middleCols(start, end - start) =
          qr.householderQ() * Matrix::Identity(d, end - start);
    }
    start = end;
  }
  out.eigenvectors.reserve(d);
  for (int i = 0; i < d; ++i) out.eigenvectors.push_back(PureStateVector::normalized(vecs.col(i)));
  out.reconstruction_error = (out.reconstruct() - h.matrix()).norm();
  out.orthonormality_error = (vecs.adjoint() * vecs - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  return out;
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("hs_inner: dimension mismatch");
  // tr(ab) = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

// ------------------------------------------------------------ density matrix

InvariantReport DensityMatrix::check(const HermitianOperator& h, const Tolerances& tol) {
  const double lmin = min_eigenvalue(h);
  const double trace_dev = std::abs(h.trace() - 1.0);
  const double psd_dev = std::max(0.0, -lmin);
  const bool ok = psd_dev <= tol.psd && trace_dev <= tol.trace;
  return {ok, std::max(psd_dev, trace_dev)};
}

DensityMatrix::DensityMatrix(HermitianOperator h, const Tolerances& tol) : op_(std::move(h)) {
  const double lmin = min_eigenvalue(op_);
  if (lmin < -tol.psd) throw InvariantError("density matrix has a negative eigenvalue", -lmin);
  const double trace_dev = std::abs(op_.trace() - 1.0);
  if (trace_dev > tol.trace) throw InvariantError("density matrix trace differs from 1", trace_dev);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator::identity(dim) * (1.0 / dim));
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  return PureStateVector::basis(dim, k).density();
}

// --------------------------------------------------------------- pure state

PureStateVector::PureStateVector(Vector x, const Tolerances& tol) : x_(std::move(x)) {
  if (x_.size() == 0) throw DimensionError("empty state vector");
  if (!x_.allFinite()) throw InvariantError("state vector has non-finite entries", std::numeric_limits<double>::infinity());
  const double dev = std::abs(x_.norm() - 1.0);
  if (dev > tol.vector_norm) throw InvariantError("state vector is not normalized", dev);
}

PureStateVector PureStateVector::normalized(const Vector& x) {
  const double n = x.norm();
  if (!(n > 1e-300)) throw InvariantError("cannot normalize a zero vector", n);
  return PureStateVector(x / n);
}

PureStateVector PureStateVector::basis(int dim, int k) {
  if (k < 0 || k >= dim) throw DimensionError("basis index out of range");
  Vector e = Vector::Zero(dim);
  e(k) = 1.0;
  return PureStateVector(e);
}

DensityMatrix PureStateVector::density() const {
  return DensityMatrix(HermitianOperator::outer(x_));
}

// ---------------------------------------------------------------- projector

InvariantReport Projector::check(const HermitianOperator& h, const Tolerances& tol) {
  const double dev = (h.matrix() * h.matrix() - h.matrix()).norm();
  return {dev <= tol.projector, dev};
}

Projector::Projector(HermitianOperator h, const Tolerances& tol) : op_(std::move(h)) {
  const auto rep = check(op_, tol);
  if (!rep.ok) throw InvariantError("operator is not idempotent", rep.deviation);
}

Projector Projector::onto_span(const Matrix& vectors, double rank_tol) {
  const auto d = vectors.rows();
  if (vectors.cols() == 0) return zero(static_cast<int>(d));
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rank_tol * std::max(1.0, s(0))) ++r;
  const Matrix u = svd.matrixU().leftCols(r);
  return Projector(HermitianOperator(Matrix(u * u.adjoint()), Tolerances{.hermitian = 1e-10}));
}

Projector Projector::zero(int dim) { return Projector(HermitianOperator::zero(dim)); }
Projector Projector::identity(int dim) { return Projector(HermitianOperator::identity(dim)); }

int Projector::rank() const { return static_cast<int>(std::lround(op_.trace())); }

Projector Projector::complement() const {
  return Projector(HermitianOperator::identity(dim()) - op_);
}

// ------------------------------------------------------------------- effects

InvariantReport Effect::check(const HermitianOperator& h, const Tolerances& tol) {
  const auto ev = eigenvalues(h);
  const double dev = std::max({0.0, -ev(0), ev(ev.size() - 1) - 1.0});
  return {dev <= tol.effect, dev};
}

Effect::Effect(HermitianOperator h, const Tolerances& tol) : op_(std::move(h)) {
  const auto rep = check(op_, tol);
  if (!rep.ok) throw InvariantError("operator spectrum leaves [0, 1]", rep.deviation);
}

InvariantReport FinitePOVM::check(std::span<const Effect> effects, const Tolerances& tol) {
  if (effects.empty()) return {false, std::numeric_limits<double>::infinity()};
  const int d = effects.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : effects) {
    if (e.dim() != d) return {false, std::numeric_limits<double>::infinity()};
    sum += e.op().matrix();
  }
  const double dev = (sum - Matrix::Identity(d, d)).norm();
  return {dev <= tol.povm, dev};
}

FinitePOVM::FinitePOVM(std::vector<Effect> effects, const Tolerances& tol) : effects_(std::move(effects)) {
  if (effects_.empty()) throw DimensionError("POVM needs at least one effect");
  for (const auto& e : effects_) {
    if (e.dim() != effects_.front().dim()) throw DimensionError("POVM effects differ in dimension");
  }
  const auto rep = check(effects_, tol);
  if (!rep.ok) throw InvariantError("POVM effects do not sum to the identity", rep.deviation);
}

std::vector<double> FinitePOVM::probabilities(const DensityMatrix& rho) const {
  std::vector<double> p;
  p.reserve(effects_.size());
  for (const auto& e : effects_) p.push_back(effect_probability(rho, e).value);
  return p;
}

// ---------------------------------------------------------- probabilities

namespace {

Probability clamp_probability(double raw, double slack) {
  Probability p{raw, raw, false};
  if (raw < 0.0 || raw > 1.0) {
    if (raw < -slack || raw > 1.0 + slack) {
      throw InvariantError("probability outside [0, 1]", raw < 0.0 ? -raw : raw - 1.0);
    }
    p.value = std::clamp(raw, 0.0, 1.0);
    p.clamped = true;
  }
  return p;
}

}  // namespace

Probability born_probability(const DensityMatrix& rho, const Projector& p, const Tolerances& tol) {
  if (rho.dim() != p.dim()) throw DimensionError("born_probability: dimension mismatch");
  return clamp_probability(hs_inner(rho.op(), p.op()), 1e3 * tol.psd);
}

Probability effect_probability(const DensityMatrix& rho, const Effect& e, const Tolerances& tol) {
  if (rho.dim() != e.dim()) throw DimensionError("effect_probability: dimension mismatch");
  return clamp_probability(hs_inner(rho.op(), e.op()), 1e3 * tol.effect);
}

double MeasureAxiomReport::max_deviation() const {
  return std::max({null_deviation, complement_deviation, additivity_deviation});
}

MeasureAxiomReport measure_axiom_check(const DensityMatrix& rho, std::span<const Projector> parts,
                                       const Tolerances& tol) {
  const int d = rho.dim();
  MeasureAxiomReport rep;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].dim() != d) throw DimensionError("measure_axiom_check: dimension mismatch");
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      rep.orthogonality_defect = std::max(
          rep.orthogonality_defect, (parts[i].op().matrix() * parts[j].op().matrix()).norm());
    }
  }
  if (rep.orthogonality_defect > tol.projector) {
    throw InvariantError("projector family is not pairwise orthogonal", rep.orthogonality_defect);
  }
  auto s = [&](const HermitianOperator& p) { return hs_inner(rho.op(), p); };
  rep.null_deviation = std::abs(s(HermitianOperator::zero(d)));
  HermitianOperator sum = HermitianOperator::zero(d);
  double sum_of_probs = 0.0;
  for (const auto& p : parts) {
    const double sp = s(p.op());
    rep.complement_deviation =
        std::max(rep.complement_deviation, std::abs(s(p.complement().op()) - (1.0 - sp)));
    sum = sum + p.op();
    sum_of_probs += sp;
  }
  rep.additivity_deviation = std::abs(s(sum) - sum_of_probs);
  return rep;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const auto ev = eigenvalues(rho.op());
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double l = ev(i);
    if (l > 0.0) s -= l * std::log(l);
  }
  return std::max(0.0, s);
}

DensityMatrix mix(std::span<const DensityMatrix> states, std::span<const double> weights,
                  const Tolerances& tol) {
  if (states.empty() || states.size() != weights.size()) {
    throw DimensionError("mix: need one weight per state");
  }
  double total = 0.0;
  double most_negative = 0.0;
  for (double w : weights) {
    total += w;
    most_negative = std::min(most_negative, w);
  }
  if (most_negative < -tol.simplex) throw InvariantError("mix: negative weight", -most_negative);
  if (std::abs(total - 1.0) > tol.simplex) throw InvariantError("mix: weights do not sum to 1", std::abs(total - 1.0));
  const int d = states.front().dim();
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != d) throw DimensionError("mix: dimension mismatch");
    m += weights[i] * states[i].matrix();
  }
  return DensityMatrix(m, tol);
}

PureStateVector superpose(const PureStateVector& psi1, const PureStateVector& psi2, Complex alpha,
                          Complex beta) {
  if (psi1.dim() != psi2.dim()) throw DimensionError("superpose: dimension mismatch");
  const Vector v = alpha * psi1.amplitudes() + beta * psi2.amplitudes();
  if (v.norm() < 1e-14) throw InvariantError("superposition vanishes", v.norm());
  return PureStateVector::normalized(v);
}

DensityMatrix random_density(int dim, int rank, std::uint64_t seed) {
  if (dim < 1 || rank < 1 || rank > dim) {
    throw InvariantError("random_density: need 1 <= rank <= dim", static_cast<double>(rank));
  }
  Rng rng(seed);
  const Matrix g = random_gaussian_matrix(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(HermitianOperator(Matrix(0.5 * (rho + rho.adjoint()))));
}

}  // namespace qlat
