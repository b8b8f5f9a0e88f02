#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qlat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Row-major complex matrix with finite entries.
using ComplexMatrix = Matrix;

bool all_finite(const Matrix& m);

/// Largest entrywise modulus of A - A^dagger.
double hermiticity_defect(const Matrix& m);

/// Orthonormal real coordinates of Hermitian matrices.
///
/// A d x d Hermitian matrix maps to d^2 reals: the diagonal, then
/// sqrt(2) Re and sqrt(2) Im of each strictly upper entry (row-major).
/// The Euclidean inner product of coordinates equals tr(AB).
RealVector hermitian_coords(const Matrix& h);
Matrix from_hermitian_coords(const RealVector& x, int dim);

/// Plain real vectorization (re and im of every entry).  The Euclidean
/// inner product is Re tr(A B^dagger) for arbitrary complex matrices.
RealVector complex_coords(const Matrix& m);

/// Orthonormal basis for the column span of `a` (rank decided by `rank_tol`
/// relative to the largest singular value, and absolutely by `abs_tol`).
RealMatrix orthonormal_columns(const RealMatrix& a, double rank_tol = 1e-10,
                               double abs_tol = 1e-12);

/// Orthonormal basis of the orthogonal complement of span(q) in R^n.
/// `q` must already have orthonormal columns.
RealMatrix orthogonal_complement(const RealMatrix& q, Eigen::Index n);

/// Orthonormal basis of the null space of `a` (columns).
RealMatrix null_space(const RealMatrix& a, double rank_tol = 1e-10);

}  // namespace qlat
