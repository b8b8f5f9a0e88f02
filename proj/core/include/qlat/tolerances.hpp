#pragma once

namespace qlat {

/// Every numerical threshold used by the library, in one place.
///
/// Functions take a `const Tolerances&` defaulting to `Tolerances{}`; the
/// CLI overrides individual fields from flags.
struct Tolerances {
  double hermitian = 1e-12;     // entrywise |A - A^dagger|
  double psd = 1e-10;           // smallest admissible eigenvalue is -psd
  double trace = 1e-10;         // |tr(rho) - 1|
  double vector_norm = 1e-12;   // | ||x|| - 1 |
  double projector = 1e-10;     // ||P^2 - P||_F
  double effect = 1e-10;        // spectrum inside [-effect, 1 + effect]
  double povm = 1e-10;          // ||sum E_i - I||_F
  double simplex = 1e-12;       // |sum w - 1|, w_i >= -simplex
  double spectral = 1e-9;       // reconstruction / orthonormality
  double degenerate_gap = 1e-9; // eigenvalues closer than this form a cluster
  double subspace = 1e-8;       // mutual projection residual for equality
  double rank = 1e-10;          // singular values below this are zero
  double membership = 1e-8;     // Frobenius residual for hull membership
  double criterion = 1e-9;      // strict-inequality margin for verdicts
  double ppt = 1e-10;           // min eigenvalue of the partial transpose
  double face = 1e-9;           // supporting-functional slack
  double interior = 1e-8;       // rel. interior: min eigenvalue on the support
  double empty = 1e-6;          // rel. interior: certified-empty margin
  double maxent_residual = 1e-8;
  double maxent_boundary = 1e-7;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace qlat
