#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlat/lambda_tau.hpp"

namespace qlat {

enum class ModelKind { classical, quantum, custom };
std::string to_string(ModelKind k);

/// Finite-dimensional convex operational model in real coordinates:
/// states are vectors x with u(x) = unit . x = 1 passing `state_test`;
/// effects are linear functionals f . x.
struct ConvexModel {
  ModelKind kind = ModelKind::custom;
  std::vector<int> dims;
  int ambient = 0;
  RealVector unit;
  std::vector<RealVector> effects;
  std::vector<RealVector> catalogue;
  std::function<bool(const RealVector&, double)> state_test;

  double u(const RealVector& x) const { return unit.dot(x); }
  /// Normalized and inside the state cone.
  bool is_state(const RealVector& x, double tol = 1e-10) const;
  /// Largest of |u(a) - 1| and the effect-range excess over the catalogue.
  InvariantReport check(double tol = 1e-10) const;
};

/// Probability simplex over n outcomes (coordinate functionals as effects).
ConvexModel classical_model(int n);
/// Joint distributions over n1 x n2 outcomes, index i * n2 + j.
ConvexModel classical_model(int n1, int n2);
/// Density matrices in hermitian_coords (trace as unit).
ConvexModel quantum_model(int d);

/// Linear map between ambient spaces.
struct Morphism {
  RealMatrix map;
  std::string name;
  RealVector operator()(const RealVector& x) const { return map * x; }
};

/// Positivity (catalogue images are states after normalization, within
/// 1e-9) and u_target(phi(a)) <= 1 + 1e-10.
InvariantReport check_morphism(const Morphism& phi, const ConvexModel& source, const ConvexModel& target);

using Generators = std::vector<RealVector>;

struct TripleCompound {
  std::string kind;
  ConvexModel composite;
  ConvexModel component1;
  ConvexModel component2;
  Morphism phi1;
  Morphism phi2;
  /// Generators of Psi(C1, C2) from generators of C1 and C2.
  std::function<Generators(const Generators&, const Generators&)> psi;
  bool strict = true;
};

/// "classical" (joint distributions, marginals, outer products) or
/// "quantum" (partial traces, tensor products).  Throws UnsupportedError
/// otherwise.
TripleCompound build_compound(const std::string& kind, const BipartiteDims& dims);

/// Classical 2 x 2 x 2 joint distributions seen through the marginals on
/// the first and last outcome: Psi of two singletons is a segment, so the
/// compound is not strict.
TripleCompound non_strict_compound();

struct CompoundReport {
  double surjectivity = 0.0;   // worst catalogue state of a component missed by phi_i
  double compatibility = 0.0;  // worst (phi_1, phi_2) image of a Psi generator outside (C1, C2)
  double morphisms = 0.0;      // worst morphism invariant deviation
  bool strict_singletons = true;
  bool ok(double tol = 1e-9) const;
};

/// Extension, compatibility (on `trials` random catalogue polytopes) and
/// strictness checks.
CompoundReport check_compound(const TripleCompound& t, int trials, Rng& rng);

/// Psi(phi_1{c}, phi_2{c}) = {c}.  Throws UnsupportedError for a
/// non-strict compound.
bool com_is_product(const RealVector& c, const TripleCompound& t, double tol = 1e-9);

/// Psi(phi_1(C), phi_2(C)) = C by mutual generator membership.
bool com_is_invariant(const Generators& c, const TripleCompound& t, double tol = 1e-8);

struct ComVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::string method;
  Generators invariant_subset;  // certificate for SEPARABLE
  double membership_residual = 0.0;
  std::string note;
};

/// Classical: conditioning writes c as a mixture of products and the hull
/// of the factor products is an invariant subset containing c.  Quantum:
/// separable_via_css, then the spectral criterion for entanglement.
ComVerdict com_separable(const RealVector& c, const TripleCompound& t,
                         const std::optional<SeparableDecomposition>& dec = std::nullopt,
                         const Tolerances& tol = default_tolerances());

/// Convenience conversions for the quantum compound.
RealVector state_coords(const DensityMatrix& rho);
DensityMatrix coords_state(const RealVector& x, int dim);

}  // namespace qlat
