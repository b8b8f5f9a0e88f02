#include "qlat/linalg.hpp"

#include <cmath>

#include "qlat/random.hpp"

namespace qlat {

bool all_finite(const Matrix& m) { return m.allFinite(); }

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RealVector hermitian_coords(const Matrix& h) {
  const auto d = h.rows();
  RealVector x(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) x(k++) = h(i, i).real();
  const double s = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      // average the two triangles so a slightly non-Hermitian input maps to
      // its Hermitian part
      const Complex upper = 0.5 * (h(i, j) + std::conj(h(j, i)));
      x(k++) = s * upper.real();
      x(k++) = s * upper.imag();
    }
  }
  return x;
}

Matrix from_hermitian_coords(const RealVector& x, int dim) {
  Matrix h = Matrix::Zero(dim, dim);
  Eigen::Index k = 0;
  for (int i = 0; i < dim; ++i) h(i, i) = x(k++);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const Complex v(s * x(k), s * x(k + 1));
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

RealVector complex_coords(const Matrix& m) {
  RealVector x(2 * m.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      x(k++) = m(i, j).real();
      x(k++) = m(i, j).imag();
    }
  }
  return x;
}

RealMatrix orthonormal_columns(const RealMatrix& a, double rank_tol, double abs_tol) {
  if (a.cols() == 0 || a.rows() == 0) return RealMatrix(a.rows(), 0);
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cut = std::max(abs_tol, rank_tol * (s.size() ? s(0) : 0.0));
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

RealMatrix orthogonal_complement(const RealMatrix& q, Eigen::Index n) {
  if (q.cols() == 0) return RealMatrix::Identity(n, n);
  if (q.cols() >= n) return RealMatrix(n, 0);
  const RealMatrix proj = RealMatrix::Identity(n, n) - q * q.transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(proj);
  // eigenvalues are 0 (span q) or 1 (complement); take the top n - k
  const Eigen::Index k = n - q.cols();
  RealMatrix c = es.eigenvectors().rightCols(k);
  // re-orthogonalize against q to clean rounding
  c -= q * (q.transpose() * c);
  Eigen::HouseholderQR<RealMatrix> qr(c);
  return qr.householderQ() * RealMatrix::Identity(n, k);
}

RealMatrix null_space(const RealMatrix& a, double rank_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return RealMatrix::Identity(n, n);
  Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = rank_tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(n - r);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vector random_gaussian_vector(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

Matrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

Vector random_unit_vector(int n, Rng& rng) {
  Vector v = random_gaussian_vector(n, rng);
  while (v.norm() < 1e-300) v = random_gaussian_vector(n, rng);
  return v / v.norm();
}

Matrix random_hermitian_matrix(int n, Rng& rng) {
  const Matrix g = random_gaussian_matrix(n, n, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  return h / h.norm();
}

RealVector random_simplex(int n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  RealVector w(n);
  for (int i = 0; i < n; ++i) w(i) = e(rng);
  return w / w.sum();
}

}  // namespace qlat
