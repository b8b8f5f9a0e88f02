#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlat/composite.hpp"
#include "qlat/operator.hpp"
#include "qlat/random.hpp"
#include "qlat/subspace.hpp"

namespace qlat {

/// Convex hull of finitely many density matrices.
class StatePolytope {
 public:
  /// Throws DimensionError on an empty list or mixed dimensions.
  explicit StatePolytope(std::vector<DensityMatrix> generators,
                         std::optional<BipartiteDims> dims = std::nullopt);

  int dim() const { return generators_.front().dim(); }
  std::size_t size() const { return generators_.size(); }
  const std::vector<DensityMatrix>& generators() const { return generators_; }
  const std::optional<BipartiteDims>& dims() const { return dims_; }
  /// Generator coordinates as columns (hermitian_coords space).
  const RealMatrix& coords() const { return coords_; }
  /// Drops generators within `tol` (Frobenius) of an earlier one.
  StatePolytope deduplicated(double tol = 1e-12) const;

 private:
  std::vector<DensityMatrix> generators_;
  std::optional<BipartiteDims> dims_;
  RealMatrix coords_;
};

/// Membership answer with the certificate that decided it.
struct MembershipCertificate {
  bool member = false;
  double residual = 0.0;   // Frobenius distance to the hull
  RealVector weights;      // convex weights of the nearest hull point
  /// When not a member: tr(separating g) <= offset for every generator g
  /// and tr(separating rho) > offset.
  std::optional<HermitianOperator> separating;
  double offset = 0.0;
  int iterations = 0;
};

/// Throws DimensionError on mismatch and NumericalError if the hull
/// projection does not converge.
MembershipCertificate member(const StatePolytope& c, const DensityMatrix& rho,
                             const Tolerances& tol = default_tolerances());

/// conv(C1 u C2): generator lists concatenated.
StatePolytope join(const StatePolytope& c1, const StatePolytope& c2);

/// Convex set given by a membership oracle: an expression over polytopes,
/// subspace slices (elements S cap C of the induced lattice), the full and
/// empty sets, meets and joins.
///
/// Joins whose operands contain a slice are not polyhedral and are
/// rejected with UnsupportedError when a query needs them.
class ImplicitConvexSet {
 public:
  struct Node;

  static ImplicitConvexSet from(const StatePolytope& p, std::string label = "");
  static ImplicitConvexSet slice(const LatticeElement& l, std::string label = "");
  static ImplicitConvexSet full(int dim);
  static ImplicitConvexSet empty(int dim);

  int dim() const;
  const std::string& provenance() const;
  const std::vector<std::string>& notes() const;
  ImplicitConvexSet with_note(std::string note) const;

  bool contains(const DensityMatrix& rho, const Tolerances& tol = default_tolerances()) const;
  /// A member, when one exists (exact for polyhedral expressions and pure
  /// slices); nullopt certifies emptiness at `tol.membership`.
  std::optional<DensityMatrix> find_member(const Tolerances& tol = default_tolerances()) const;
  bool is_empty(const Tolerances& tol = default_tolerances()) const { return !find_member(tol).has_value(); }
  /// Members drawn from the set (mixtures of randomly found members, or
  /// hit-and-run inside slices).  Empty vector for the empty set.
  std::vector<DensityMatrix> sample(int count, Rng& rng, const Tolerances& tol = default_tolerances()) const;

  /// The lattice element when the set is a pure slice (or full / empty).
  std::optional<LatticeElement> as_slice() const;
  std::optional<StatePolytope> as_polytope() const;

  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  explicit ImplicitConvexSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend ImplicitConvexSet meet(const ImplicitConvexSet&, const ImplicitConvexSet&, const Tolerances&);
  friend ImplicitConvexSet join(const ImplicitConvexSet&, const ImplicitConvexSet&);
  friend ImplicitConvexSet neg(const ImplicitConvexSet&, const Tolerances&);
  std::shared_ptr<const Node> node_;
};

/// C1 cap C2 as a membership oracle; provenance records both operands.
ImplicitConvexSet meet(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2,
                       const Tolerances& tol = default_tolerances());
ImplicitConvexSet meet(const StatePolytope& c1, const StatePolytope& c2,
                       const Tolerances& tol = default_tolerances());
ImplicitConvexSet join(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2);

/// span(C)^perp cap C_states, with the orthocomplement taken against the
/// linear span of C in the Hilbert-Schmidt geometry.
ImplicitConvexSet neg(const StatePolytope& c, const Tolerances& tol = default_tolerances());
/// Supported for polytopes, slices, full and empty sets.
ImplicitConvexSet neg(const ImplicitConvexSet& c, const Tolerances& tol = default_tolerances());

/// Exact for polytope left operands (every generator is a member).
bool leq(const StatePolytope& c1, const StatePolytope& c2, const Tolerances& tol = default_tolerances());
bool leq(const StatePolytope& c1, const ImplicitConvexSet& c2, const Tolerances& tol = default_tolerances());
/// Semi-decision: every sampled member of c1 is a member of c2 (and an
/// empty c1 is below everything).
bool leq(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2, Rng& rng, int samples = 100,
         const Tolerances& tol = default_tolerances());

/// Mutual generator membership.
bool set_equal(const StatePolytope& a, const StatePolytope& b, const Tolerances& tol = default_tolerances());
/// Largest membership residual over generators of `a` in `b` and vice versa.
double mutual_membership_residual(const StatePolytope& a, const StatePolytope& b);
/// Agreement of membership on `samples` members drawn from both sets.
bool set_equal(const ImplicitConvexSet& a, const ImplicitConvexSet& b, Rng& rng, int samples = 200,
               const Tolerances& tol = default_tolerances());

struct LawCheck {
  std::string name;
  bool holds = false;
  bool vacuous = false;  // premise false (contraposition)
};

/// Laws (a)-(g) (idempotence of meet, commutativity, associativity and
/// absorption of meet and join), contraposition and non-contradiction,
/// decided by set_equal / leq on `samples` sampled members.
std::vector<LawCheck> lattice_law_suite(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2,
                                        const ImplicitConvexSet& c3, Rng& rng, int samples = 200,
                                        const Tolerances& tol = default_tolerances());

}  // namespace qlat
