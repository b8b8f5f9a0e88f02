#include "qlat/separability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qlat/error.hpp"
#include "qlat/hull.hpp"
#include "qlat/random.hpp"

namespace qlat {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::entangled:
      return "ENTANGLED";
    case Verdict::separable:
      return "SEPARABLE";
    case Verdict::inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "ENTANGLED") return Verdict::entangled;
  if (s == "SEPARABLE") return Verdict::separable;
  if (s == "INCONCLUSIVE") return Verdict::inconclusive;
  throw Error("unknown verdict '" + s + "'");
}

namespace {

void require_dims(int n, const BipartiteDims& dims) {
  if (dims.d1 < 1 || dims.d2 < 1 || dims.total() != n) throw DimensionError("operator dimension does not match the split");
}

// Extreme eigenvector of a small Hermitian matrix.
Vector extreme_vector(const Matrix& a, ExtremumMode mode) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return mode == ExtremumMode::max ? Vector(es.eigenvectors().col(a.rows() - 1)) : Vector(es.eigenvectors().col(0));
}

double product_value(const Matrix& op, const Vector& v, const Vector& w) {
  const Vector x = kron(v, w);
  return x.dot(op * x).real();
}

// (1 (x) w)^dagger A (1 (x) w)
Matrix contract_second(const Matrix& a, const Vector& w, int d1, int d2) {
  Matrix out(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) out(i, k) = w.dot(a.block(i * d2, k * d2, d2, d2) * w);
  return out;
}

// (v (x) 1)^dagger A (v (x) 1)
Matrix contract_first(const Matrix& a, const Vector& v, int d1, int d2) {
  Matrix out = Matrix::Zero(d2, d2);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d1; ++k) out += std::conj(v(i)) * v(k) * a.block(i * d2, k * d2, d2, d2);
  return out;
}

struct RunResult {
  Vector v, w;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

RunResult alternate(const Matrix& op, const BipartiteDims& dims, ExtremumMode mode, Vector w,
                    const ExtremaOptions& opt) {
  RunResult r;
  r.w = w.normalized();
  double last = 0.0;
  bool have_last = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    r.v = extreme_vector(contract_second(op, r.w, dims.d1, dims.d2), mode);
    r.history.push_back(product_value(op, r.v, r.w));
    r.w = extreme_vector(contract_first(op, r.v, dims.d1, dims.d2), mode);
    const double val = product_value(op, r.v, r.w);
    r.history.push_back(val);
    r.iterations = 2 * (it + 1);
    if (have_last && std::abs(val - last) < opt.value_tol) {
      r.converged = true;
      break;
    }
    last = val;
    have_last = true;
  }
  r.value = product_value(op, r.v, r.w);
  return r;
}

}  // namespace

ProductOptimum product_extrema(const HermitianOperator& op, const BipartiteDims& dims, ExtremumMode mode,
                               const ExtremaOptions& opt) {
  require_dims(op.dim(), dims);
  const Matrix& a = op.matrix();
  const int restarts = std::max(1, opt.restarts);
  std::optional<RunResult> best;
  int best_index = 0;
  for (int r = 0; r < restarts; ++r) {
    Vector w0;
    if (r == 0) {
      const ComplexMatrix x = reshape_to_matrix(extreme_vector(a, mode), dims);
      Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeThinV);
      w0 = svd.matrixV().col(0).conjugate();
    } else {
      Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(r)));
      w0 = random_unit_vector(dims.d2, rng);
    }
    RunResult run = alternate(a, dims, mode, w0, opt);
    const bool better = !best || (mode == ExtremumMode::max ? run.value > best->value + 1e-15
                                                            : run.value < best->value - 1e-15);
    if (better) {
      best = std::move(run);
      best_index = r;
    }
  }
  ProductOptimum out;
  out.v = PureStateVector::normalized(best->v);
  out.w = PureStateVector::normalized(best->w);
  out.value = product_value(a, out.v.amplitudes(), out.w.amplitudes());
  out.mode = mode;
  out.restarts_used = restarts;
  out.iterations = best->iterations;
  out.best_restart = best_index;
  out.converged = best->converged;
  out.history = std::move(best->history);
  return out;
}

std::pair<double, double> state_extrema(const HermitianOperator& op) {
  const RealVector ev = eigenvalues(op);
  return {ev(0), ev(ev.size() - 1)};
}

HermitianOperator Witness::shifted_upper() const { return op - HermitianOperator::identity(op.dim()) * M; }

Witness make_witness(const HermitianOperator& direction, const DensityMatrix& target, const BipartiteDims& dims,
                     const ExtremaOptions& opt, std::string source) {
  require_dims(target.dim(), dims);
  const double norm = direction.frobenius_norm();
  if (!(norm > 0.0)) throw InvariantError("witness direction is zero", norm);
  Witness w;
  w.op = direction * (1.0 / norm);
  w.m = product_extrema(w.op, dims, ExtremumMode::min, opt).value;
  w.M = product_extrema(w.op, dims, ExtremumMode::max, opt).value;
  w.value = hs_inner(w.op, target.op());
  w.violation = std::max(w.value - w.M, w.m - w.value);
  w.target = target;
  w.source = std::move(source);
  return w;
}

CriterionResult pure_witness_test(const DensityMatrix& rho, const PureStateVector& x, const BipartiteDims& dims,
                                  const Tolerances& tol) {
  require_dims(rho.dim(), dims);
  if (x.dim() != rho.dim()) throw DimensionError("pure witness dimension does not match the state");
  CriterionResult r;
  r.method = "pure_witness";
  const Vector& a = x.amplitudes();
  r.value = (a.adjoint() * rho.matrix() * a)(0, 0).real();
  const RealVector s = schmidt_coefficients(x, dims);
  r.bound = s(0) * s(0);
  r.verdict = r.value > r.bound + tol.criterion ? Verdict::entangled : Verdict::inconclusive;
  return r;
}

CriterionResult spectral_criterion(const DensityMatrix& rho, const BipartiteDims& dims, const Tolerances& tol) {
  require_dims(rho.dim(), dims);
  const SpectralDecomposition sd = spectral_decompose(rho.op(), tol);
  CriterionResult r;
  r.method = "spectral";
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < static_cast<int>(sd.eigenvectors.size()); ++j) {
    const RealVector s = schmidt_coefficients(sd.eigenvectors[static_cast<std::size_t>(j)], dims);
    const double lam = sd.eigenvalues(j);
    const double margin = lam - s(0) * s(0);
    if (margin > best_margin) {
      best_margin = margin;
      r.index = j;
      r.value = lam;
      r.bound = s(0) * s(0);
    }
  }
  r.verdict = best_margin > tol.criterion ? Verdict::entangled : Verdict::inconclusive;
  return r;
}

WitnessSearchResult random_witness_search(const DensityMatrix& rho, const BipartiteDims& dims,
                                          const WitnessSearchOptions& opt, const Tolerances& tol) {
  require_dims(rho.dim(), dims);
  const int n = rho.dim();
  std::vector<HermitianOperator> dirs;
  std::vector<std::optional<PureStateVector>> pure;
  const SpectralDecomposition sd = spectral_decompose(rho.op(), tol);
  for (const auto& x : sd.eigenvectors) {
    dirs.push_back(x.density().op());
    pure.emplace_back(x);
  }
  for (int k = 0; k < opt.samples; ++k) {
    Rng rng(derive_seed(opt.seed, 1000003u + static_cast<std::uint64_t>(k)));
    dirs.emplace_back(random_hermitian_matrix(n, rng));
    pure.emplace_back(std::nullopt);
  }

  WitnessSearchResult out;
  out.directions = static_cast<int>(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const ExtremaOptions eo{.restarts = opt.restarts, .seed = derive_seed(opt.seed, k)};
    Witness w = make_witness(dirs[k], rho, dims, eo, pure[k] ? "eigenvector" : "random");
    auto tighten = [&](Witness& c) {
      if (pure[k]) {
        // exact range of a pure witness: [0, sigma_1^2]
        const RealVector s = schmidt_coefficients(*pure[k], dims);
        c.M = std::max(c.M, s(0) * s(0));
        if (dims.d1 > 1 && dims.d2 > 1) c.m = std::min(c.m, 0.0);
      }
      c.violation = std::max(c.value - c.M, c.m - c.value);
    };
    tighten(w);
    if (!w.certified(tol.criterion)) continue;
    // confirm with independent restarts before reporting
    const ExtremaOptions co{.restarts = opt.confirm_restarts, .seed = derive_seed(opt.seed ^ 0x5bd1e995u, k)};
    w.m = std::min(w.m, product_extrema(w.op, dims, ExtremumMode::min, co).value);
    w.M = std::max(w.M, product_extrema(w.op, dims, ExtremumMode::max, co).value);
    tighten(w);
    if (!w.certified(tol.criterion)) continue;
    if (!out.best || w.violation > out.best->violation) out.best = std::move(w);
  }
  if (out.best) out.verdict = Verdict::entangled;
  return out;
}

Matrix SeparableApproximation::reconstruct() const {
  const int n = factors_a.empty() ? point.dim() : factors_a.front().dim() * factors_b.front().dim();
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Vector x = kron(factors_a[k].amplitudes(), factors_b[k].amplitudes());
    m += weights[k] * x * x.adjoint();
  }
  return m;
}

ProjectionResult project_separable(const DensityMatrix& rho, const BipartiteDims& dims, const ProjectionOptions& opt,
                                   const Tolerances& tol) {
  require_dims(rho.dim(), dims);
  const int n = rho.dim();
  const RealVector target = hermitian_coords(rho.matrix());

  std::vector<PureStateVector> va, vb;
  std::vector<RealVector> cols;
  auto add_atom = [&](const ProductOptimum& p) {
    va.push_back(p.v);
    vb.push_back(p.w);
    const Vector x = kron(p.v.amplitudes(), p.w.amplitudes());
    cols.push_back(hermitian_coords(x * x.adjoint()));
  };
  auto atom_matrix = [&]() {
    RealMatrix a(target.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = cols[k];
    return a;
  };

  add_atom(product_extrema(rho.op(), dims, ExtremumMode::max, {.restarts = opt.lmo_restarts, .seed = opt.seed}));
  RealVector s = cols.front();
  RealVector weights = RealVector::Ones(1);

  SeparableApproximation ap;
  double gap = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const double dist = (target - s).norm();
    ap.distances.push_back(dist);
    if (dist <= opt.stop_distance) {
      ap.converged = true;
      break;
    }
    const Matrix g = from_hermitian_coords(s - target, n);
    const ProductOptimum lmo = product_extrema(HermitianOperator(g), dims, ExtremumMode::min,
                                               {.restarts = opt.lmo_restarts,
                                                .seed = derive_seed(opt.seed, it + 1),
                                                .max_iterations = opt.lmo_max_iterations});
    gap = (s - target).dot(s) - lmo.value;
    if (gap <= opt.stop_gap) {
      ap.converged = true;
      break;
    }
    add_atom(lmo);
    RealVector warm = RealVector::Zero(static_cast<Eigen::Index>(cols.size()));
    warm.head(weights.size()) = weights;
    const HullProjection hp = project_onto_hull(atom_matrix(), target, 20000, &warm);
    // keep the corral only
    std::vector<PureStateVector> na, nb;
    std::vector<RealVector> nc;
    std::vector<double> nw;
    for (Eigen::Index k = 0; k < hp.weights.size(); ++k) {
      if (hp.weights(k) > 0.0) {
        na.push_back(va[static_cast<std::size_t>(k)]);
        nb.push_back(vb[static_cast<std::size_t>(k)]);
        nc.push_back(cols[static_cast<std::size_t>(k)]);
        nw.push_back(hp.weights(k));
      }
    }
    va = std::move(na);
    vb = std::move(nb);
    cols = std::move(nc);
    weights = Eigen::Map<RealVector>(nw.data(), static_cast<Eigen::Index>(nw.size()));
    weights /= weights.sum();
    s = atom_matrix() * weights;
  }
  ap.iterations = it;
  ap.gap = gap;
  ap.weights.assign(weights.data(), weights.data() + weights.size());
  ap.factors_a = va;
  ap.factors_b = vb;
  ap.distance = (target - s).norm();
  {
    Matrix sm = from_hermitian_coords(s, n);
    sm /= sm.trace().real();
    ap.point = DensityMatrix(HermitianOperator(sm), Tolerances{.psd = 1e-8, .trace = 1e-8});
  }

  ProjectionResult out;
  const Matrix diff = rho.matrix() - ap.point.matrix();
  const HermitianOperator dir = diff.norm() > 1e-14 ? HermitianOperator(diff)
                                                    : HermitianOperator::identity(n) * (1.0 / std::sqrt(double(n)));
  const ExtremaOptions eo{.restarts = 20, .seed = derive_seed(opt.seed, 0xfeedu)};
  out.witness = make_witness(dir, rho, dims, eo, "projection");
  out.witness.M = std::max(out.witness.M, hs_inner(out.witness.op, ap.point.op()));
  out.witness.violation = std::max(out.witness.value - out.witness.M, out.witness.m - out.witness.value);
  if (out.witness.certified(tol.criterion)) {
    const ExtremaOptions co{.restarts = 60, .seed = derive_seed(opt.seed, 0xc0ffeeu)};
    out.witness.M = std::max(out.witness.M, product_extrema(out.witness.op, dims, ExtremumMode::max, co).value);
    out.witness.m = std::min(out.witness.m, product_extrema(out.witness.op, dims, ExtremumMode::min, co).value);
    out.witness.violation = std::max(out.witness.value - out.witness.M, out.witness.m - out.witness.value);
  }
  out.verdict = out.witness.certified(tol.criterion) ? Verdict::entangled : Verdict::inconclusive;
  out.approximation = std::move(ap);
  return out;
}

PptResult ppt_check(const DensityMatrix& rho, const BipartiteDims& dims, const Tolerances& tol) {
  require_dims(rho.dim(), dims);
  PptResult r;
  r.min_eigenvalue = min_eigenvalue(partial_transpose(rho, dims));
  r.ppt = r.min_eigenvalue >= -tol.ppt;
  r.exact = dims.d1 == 1 || dims.d2 == 1 || dims.total() <= 6;
  return r;
}

}  // namespace qlat
