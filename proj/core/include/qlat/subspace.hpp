#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qlat/composite.hpp"
#include "qlat/operator.hpp"
#include "qlat/random.hpp"

namespace qlat {

/// Real subspace of the Hermitian d x d operators, stored as orthonormal
/// columns in `hermitian_coords` space (so the column Gram matrix is the
/// Hilbert-Schmidt Gram matrix of the basis).
class HermitianSubspace {
 public:
  explicit HermitianSubspace(int dim = 1);
  /// Columns are re-orthonormalized; dependent columns are dropped.
  static HermitianSubspace from_coords(int dim, const RealMatrix& columns, double rank_tol = 1e-10);
  static HermitianSubspace full(int dim);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(q_.cols()); }
  bool is_zero() const { return q_.cols() == 0; }
  const RealMatrix& coords() const { return q_; }
  std::vector<HermitianOperator> basis() const;
  /// max |G - I| over the basis Gram matrix.
  double gram_defect() const;

  /// ||h - P_S h||_F.
  double residual(const HermitianOperator& h) const;
  double residual(const RealVector& coords) const;
  HermitianOperator project(const HermitianOperator& h) const;

 private:
  int dim_;
  RealMatrix q_;
};

/// Orthonormal basis of the real span (Gram-Schmidt in HS geometry).
/// Throws InvariantError if every input is zero.
HermitianSubspace span_subspace(std::span<const HermitianOperator> ops, double rank_tol = 1e-10);

HermitianSubspace subspace_join(const HermitianSubspace& s, const HermitianSubspace& t);
HermitianSubspace subspace_orth(const HermitianSubspace& s);
/// orth(join(orth s, orth t)).
HermitianSubspace subspace_meet(const HermitianSubspace& s, const HermitianSubspace& t);

/// max over basis vectors b of s of ||b - P_t b||.
double inclusion_residual(const HermitianSubspace& s, const HermitianSubspace& t);
bool subspace_leq(const HermitianSubspace& s, const HermitianSubspace& t, double tol = 1e-8);
bool subspace_equal(const HermitianSubspace& s, const HermitianSubspace& t, double tol = 1e-8);

/// Certificate of the relative-interior search over S with tr = 1.
struct InteriorCertificate {
  bool nonempty = false;
  /// Min eigenvalue of the point restricted to its support, or the best
  /// (negative) value reached when the slice misses the state space.
  double min_eigenvalue = 0.0;
  int support_rank = 0;
  int reductions = 0;       // facial-reduction steps taken
  int newton_iterations = 0;
  bool trace_free = false;  // S contains no operator of nonzero trace
};

/// Element S cap C of the induced lattice, held by its good representative
/// (the real span of S cap C).  Empty elements have the zero subspace.
class LatticeElement {
 public:
  LatticeElement() = default;

  static LatticeElement empty(int dim);
  static LatticeElement full(int dim);

  int dim() const { return span_.dim(); }
  bool is_empty() const { return !interior_.has_value(); }
  const HermitianSubspace& subspace() const { return span_; }
  /// A relative-interior state (maximal support among members).
  const std::optional<DensityMatrix>& interior_point() const { return interior_; }
  const InteriorCertificate& certificate() const { return cert_; }
  /// Orthonormal basis (columns) of the common support of all members.
  const Matrix& support() const { return support_; }

  bool contains(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) const;
  /// Hit-and-run samples of members.
  std::vector<DensityMatrix> sample(int count, Rng& rng, int burn_in = 5) const;

 private:
  friend LatticeElement good_representative(const HermitianSubspace&, const Tolerances&);
  friend LatticeElement atom_of(const DensityMatrix&);
  HermitianSubspace span_{1};
  std::optional<DensityMatrix> interior_;
  InteriorCertificate cert_;
  Matrix support_;
};

/// Computes S_L = span(S cap C) from a relative-interior point of S cap C.
/// Throws NumericalError if the interior search fails to converge.
LatticeElement good_representative(const HermitianSubspace& s, const Tolerances& tol = default_tolerances());

LatticeElement lattice_meet(const LatticeElement& a, const LatticeElement& b,
                            const Tolerances& tol = default_tolerances());
LatticeElement lattice_join(const LatticeElement& a, const LatticeElement& b,
                            const Tolerances& tol = default_tolerances());
/// span(L)^perp cap C.
LatticeElement lattice_neg(const LatticeElement& a, const Tolerances& tol = default_tolerances());
/// Inclusion of good representatives (equivalent to set inclusion).
bool lattice_leq(const LatticeElement& a, const LatticeElement& b, const Tolerances& tol = default_tolerances());
bool lattice_equal(const LatticeElement& a, const LatticeElement& b, const Tolerances& tol = default_tolerances());

/// span{rho} cap C = {rho}.
LatticeElement atom_of(const DensityMatrix& rho);

/// Supporting functional x -> tr(x normal) <= offset on C.
struct FaceFunctional {
  HermitianOperator normal;
  double offset = 0.0;
  /// lambda_max(normal) - offset; <= tol.face when supporting.
  double support_defect() const;
};

/// Kernel of x -> tr(x normal) - offset tr(x), intersected with C.
/// Throws InvariantError if the functional is not supporting.
LatticeElement face_to_lattice_element(const FaceFunctional& f, const Tolerances& tol = default_tolerances());

/// Face of C consisting of the states supported in range(P).
class ProjectorFace {
 public:
  explicit ProjectorFace(Projector p) : p_(std::move(p)) {}
  const Projector& projector() const { return p_; }
  /// tr(rho P) >= 1 - tol.face.
  bool contains(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) const;
  LatticeElement to_lattice(const Tolerances& tol = default_tolerances()) const;

 private:
  Projector p_;
};

ProjectorFace projector_face(const Projector& p);

/// Projector lattice operations (range intersection, range sum, complement).
Projector projector_meet(const Projector& a, const Projector& b);
Projector projector_join(const Projector& a, const Projector& b);
inline Projector projector_orth(const Projector& a) { return a.complement(); }

/// [S1 (x) S2] from good representatives.
LatticeElement psi_product(const LatticeElement& a, const LatticeElement& b,
                           const Tolerances& tol = default_tolerances());

/// [tr_other(S)] on the kept factor.
LatticeElement tau_on_L(const LatticeElement& l, Subsystem keep, const BipartiteDims& dims,
                        const Tolerances& tol = default_tolerances());

}  // namespace qlat
