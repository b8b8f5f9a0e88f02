#include "qlat/composite.hpp"

#include <cmath>

#include "qlat/error.hpp"

namespace qlat {

namespace {

void require_dims(int n, const BipartiteDims& dims, const char* where) {
  if (n != dims.total()) {
    throw DimensionError(std::string(where) + ": operator dimension " + std::to_string(n) +
                         " does not equal " + std::to_string(dims.d1) + "*" + std::to_string(dims.d2));
  }
}

}  // namespace

BipartiteDims::BipartiteDims(int a, int b) : d1(a), d2(b) {
  if (a < 1 || b < 1) throw DimensionError("subsystem dimensions must be positive");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.op(), b.op()));
}

PureStateVector kron(const PureStateVector& a, const PureStateVector& b) {
  return PureStateVector::normalized(kron(a.amplitudes(), b.amplitudes()));
}

Matrix partial_trace(const Matrix& m, Subsystem keep, const BipartiteDims& dims) {
  require_dims(static_cast<int>(m.rows()), dims, "partial_trace");
  const int d1 = dims.d1;
  const int d2 = dims.d2;
  if (keep == Subsystem::first) {
    Matrix r = Matrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) r(i, j) += m(i * d2 + k, j * d2 + k);
    return r;
  }
  Matrix r = Matrix::Zero(d2, d2);
  for (int k = 0; k < d2; ++k)
    for (int l = 0; l < d2; ++l)
      for (int i = 0; i < d1; ++i) r(k, l) += m(i * d2 + k, i * d2 + l);
  return r;
}

HermitianOperator partial_trace(const HermitianOperator& h, Subsystem keep, const BipartiteDims& dims) {
  return HermitianOperator(partial_trace(h.matrix(), keep, dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep, const BipartiteDims& dims) {
  return DensityMatrix(partial_trace(rho.op(), keep, dims));
}

ComplexMatrix reshape_to_matrix(const Vector& x, const BipartiteDims& dims) {
  require_dims(static_cast<int>(x.size()), dims, "reshape_to_matrix");
  ComplexMatrix out(dims.d1, dims.d2);
  for (int i = 0; i < dims.d1; ++i)
    for (int j = 0; j < dims.d2; ++j) out(i, j) = x(i * dims.d2 + j);
  return out;
}

ComplexMatrix reshape_to_matrix(const PureStateVector& x, const BipartiteDims& dims) {
  return reshape_to_matrix(x.amplitudes(), dims);
}

RealVector schmidt_coefficients(const PureStateVector& x, const BipartiteDims& dims) {
  Eigen::JacobiSVD<Matrix> svd(reshape_to_matrix(x, dims));
  return svd.singularValues();
}

DensityMatrix omega(const DensityMatrix& rho, const BipartiteDims& dims) {
  require_dims(rho.dim(), dims, "omega");
  return kron(partial_trace(rho, Subsystem::first, dims), partial_trace(rho, Subsystem::second, dims));
}

HermitianOperator partial_transpose(const HermitianOperator& h, const BipartiteDims& dims, Subsystem side) {
  require_dims(h.dim(), dims, "partial_transpose");
  const int d1 = dims.d1;
  const int d2 = dims.d2;
  const Matrix& m = h.matrix();
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d2; ++k)
      for (int j = 0; j < d1; ++j)
        for (int l = 0; l < d2; ++l) {
          if (side == Subsystem::second) {
            out(i * d2 + k, j * d2 + l) = m(i * d2 + l, j * d2 + k);
          } else {
            out(i * d2 + k, j * d2 + l) = m(j * d2 + k, i * d2 + l);
          }
        }
  return HermitianOperator(out);
}

HermitianOperator partial_transpose(const DensityMatrix& rho, const BipartiteDims& dims, Subsystem side) {
  return partial_transpose(rho.op(), dims, side);
}

PureStateVector bell_phi_plus() {
  Vector x = Vector::Zero(4);
  x(0) = x(3) = 1.0 / std::sqrt(2.0);
  return PureStateVector::normalized(x);
}

DensityMatrix werner_state(double p) {
  if (p < 0.0 || p > 1.0) throw InvariantError("Werner parameter outside [0, 1]", p);
  const Matrix bell = bell_phi_plus().density().matrix();
  return DensityMatrix(Matrix(p * bell + (1.0 - p) * Matrix::Identity(4, 4) / 4.0));
}

}  // namespace qlat
