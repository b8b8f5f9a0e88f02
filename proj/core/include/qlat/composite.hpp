#pragma once

#include "qlat/operator.hpp"

namespace qlat {

/// Factor dimensions of H1 (x) H2.  Composite index of (i, j) is i * d2 + j,
/// i.e. the first factor is the slow (row-block) index.
struct BipartiteDims {
  int d1 = 0;
  int d2 = 0;

  BipartiteDims() = default;
  BipartiteDims(int a, int b);
  int total() const { return d1 * d2; }
  int factor(int which) const { return which == 1 ? d1 : d2; }
  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

/// Which tensor factor an operation keeps or acts on.
enum class Subsystem { first = 1, second = 2 };

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);
PureStateVector kron(const PureStateVector& a, const PureStateVector& b);

/// Reduced operator on the kept factor; linear, so it applies to any
/// operator (not only states).
Matrix partial_trace(const Matrix& m, Subsystem keep, const BipartiteDims& dims);
HermitianOperator partial_trace(const HermitianOperator& h, Subsystem keep, const BipartiteDims& dims);
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep, const BipartiteDims& dims);

/// d1 x d2 coefficient matrix X with X(i, j) = x(i * d2 + j).
///
/// With this layout (v (x) w)^dagger x = v^dagger X conj(w), so
/// |<x, v (x) w>| <= sigma_1(X) with equality at the top singular pair.
ComplexMatrix reshape_to_matrix(const Vector& x, const BipartiteDims& dims);
ComplexMatrix reshape_to_matrix(const PureStateVector& x, const BipartiteDims& dims);

/// Singular values of the reshaped vector, descending (Schmidt coefficients).
RealVector schmidt_coefficients(const PureStateVector& x, const BipartiteDims& dims);

/// rho -> tr_2(rho) (x) tr_1(rho).
DensityMatrix omega(const DensityMatrix& rho, const BipartiteDims& dims);

/// Transpose on one factor (second by default).  The result is Hermitian
/// but not necessarily positive.
HermitianOperator partial_transpose(const HermitianOperator& h, const BipartiteDims& dims,
                                    Subsystem side = Subsystem::second);
HermitianOperator partial_transpose(const DensityMatrix& rho, const BipartiteDims& dims,
                                    Subsystem side = Subsystem::second);

/// Bell state (|00> + |11>)/sqrt(2) on 2 (x) 2.
PureStateVector bell_phi_plus();
/// p |Phi+><Phi+| + (1 - p) I/4.
DensityMatrix werner_state(double p);

}  // namespace qlat
