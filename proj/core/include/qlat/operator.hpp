#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qlat/linalg.hpp"
#include "qlat/tolerances.hpp"

namespace qlat {

/// Outcome of an invariant check: the achieved deviation and whether it is
/// inside the tolerance.
struct InvariantReport {
  bool ok = true;
  double deviation = 0.0;
};

/// Self-adjoint d x d operator.  The stored matrix is exactly Hermitian
/// (symmetrized on construction after the tolerance check).
class HermitianOperator {
 public:
  HermitianOperator() = default;

  static InvariantReport check(const Matrix& m, const Tolerances& tol = default_tolerances());
  /// Throws InvariantError / DimensionError if `m` is not square, finite and
  /// Hermitian within `tol.hermitian`.
  explicit HermitianOperator(const Matrix& m, const Tolerances& tol = default_tolerances());

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  /// |x><x| for an arbitrary (not necessarily normalized) vector.
  static HermitianOperator outer(const Vector& x);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  HermitianOperator operator-() const { return *this * -1.0; }

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& h) { return h * s; }

/// Positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  static InvariantReport check(const HermitianOperator& h, const Tolerances& tol = default_tolerances());
  explicit DensityMatrix(HermitianOperator h, const Tolerances& tol = default_tolerances());
  explicit DensityMatrix(const Matrix& m, const Tolerances& tol = default_tolerances())
      : DensityMatrix(HermitianOperator(m, tol), tol) {}

  /// I/d.
  static DensityMatrix maximally_mixed(int dim);
  /// |e_k><e_k|.
  static DensityMatrix basis_state(int dim, int k);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

/// Unit vector of a Hilbert space.
class PureStateVector {
 public:
  PureStateVector() = default;
  /// Requires ||x|| = 1 within `tol.vector_norm`.
  explicit PureStateVector(Vector x, const Tolerances& tol = default_tolerances());
  /// Divides by the norm; throws InvariantError on a zero vector.
  static PureStateVector normalized(const Vector& x);
  static PureStateVector basis(int dim, int k);

  int dim() const { return static_cast<int>(x_.size()); }
  const Vector& amplitudes() const { return x_; }
  DensityMatrix density() const;

 private:
  Vector x_;
};

class Projector {
 public:
  Projector() = default;
  static InvariantReport check(const HermitianOperator& h, const Tolerances& tol = default_tolerances());
  explicit Projector(HermitianOperator h, const Tolerances& tol = default_tolerances());
  /// Orthogonal projector onto the column span of `vectors`.
  static Projector onto_span(const Matrix& vectors, double rank_tol = 1e-10);
  static Projector zero(int dim);
  static Projector identity(int dim);

  int dim() const { return op_.dim(); }
  int rank() const;
  const HermitianOperator& op() const { return op_; }
  Projector complement() const;

 private:
  HermitianOperator op_;
};

class Effect {
 public:
  Effect() = default;
  static InvariantReport check(const HermitianOperator& h, const Tolerances& tol = default_tolerances());
  explicit Effect(HermitianOperator h, const Tolerances& tol = default_tolerances());
  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }

 private:
  HermitianOperator op_;
};

/// Finite-outcome POVM; effects sum to the identity.
class FinitePOVM {
 public:
  static InvariantReport check(std::span<const Effect> effects, const Tolerances& tol = default_tolerances());
  explicit FinitePOVM(std::vector<Effect> effects, const Tolerances& tol = default_tolerances());
  const std::vector<Effect>& effects() const { return effects_; }
  int dim() const { return effects_.front().dim(); }
  /// Outcome distribution tr(E_i rho).
  std::vector<double> probabilities(const DensityMatrix& rho) const;

 private:
  std::vector<Effect> effects_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;                    // descending
  std::vector<PureStateVector> eigenvectors; // orthonormal
  double reconstruction_error = 0.0;         // Frobenius
  double orthonormality_error = 0.0;         // max |G - I| of the Gram matrix

  Matrix reconstruct() const;
};

/// tr(ab).
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

SpectralDecomposition spectral_decompose(const HermitianOperator& h,
                                         const Tolerances& tol = default_tolerances());

/// Ascending eigenvalues without eigenvectors.
RealVector eigenvalues(const HermitianOperator& h);
double min_eigenvalue(const HermitianOperator& h);
double max_eigenvalue(const HermitianOperator& h);

struct Probability {
  double value = 0.0;  // clamped into [0, 1]
  double raw = 0.0;    // unclamped trace
  bool clamped = false;
};

/// tr(rho P).
Probability born_probability(const DensityMatrix& rho, const Projector& p,
                             const Tolerances& tol = default_tolerances());
/// tr(E rho).
Probability effect_probability(const DensityMatrix& rho, const Effect& e,
                               const Tolerances& tol = default_tolerances());

struct MeasureAxiomReport {
  double null_deviation = 0.0;        // |s(0)|
  double complement_deviation = 0.0;  // max_i |s(P_i^perp) - (1 - s(P_i))|
  double additivity_deviation = 0.0;  // |s(sum P_i) - sum s(P_i)|
  double orthogonality_defect = 0.0;  // max_{i != j} ||P_i P_j||_F
  double max_deviation() const;
  bool passed(double tol) const { return max_deviation() <= tol; }
};

/// Checks the finite non-Kolmogorovian measure axioms of the state
/// P -> tr(rho P) on a pairwise-orthogonal family.  Throws InvariantError
/// if the family is not orthogonal within `tol.projector`.
MeasureAxiomReport measure_axiom_check(const DensityMatrix& rho, std::span<const Projector> parts,
                                       const Tolerances& tol = default_tolerances());

/// -sum lambda ln lambda in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Convex combination.  Throws InvariantError unless weights form a simplex
/// vector within `tol.simplex`.
DensityMatrix mix(std::span<const DensityMatrix> states, std::span<const double> weights,
                  const Tolerances& tol = default_tolerances());

/// alpha|psi1> + beta|psi2>, renormalized.  Throws InvariantError on a zero
/// resultant.
PureStateVector superpose(const PureStateVector& psi1, const PureStateVector& psi2, Complex alpha,
                          Complex beta);

/// Ginibre construction G G^dagger / tr(G G^dagger) with G of size dim x rank.
DensityMatrix random_density(int dim, int rank, std::uint64_t seed);

}  // namespace qlat
