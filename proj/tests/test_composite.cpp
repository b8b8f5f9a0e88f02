#include <doctest.h>

#include "oracles.hpp"
#include "qlat/composite.hpp"
#include "qlat/error.hpp"
#include "qlat/random.hpp"

using namespace qlat;

namespace {

Matrix ket_bra(int d, int k) {
  Matrix m = Matrix::Zero(d, d);
  m(k, k) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("kron") {
  CHECK((kron(HermitianOperator::identity(2), HermitianOperator::identity(2)).matrix() - Matrix::Identity(4, 4)).norm() ==
        0.0);
  const HermitianOperator k01 = kron(HermitianOperator(ket_bra(2, 0)), HermitianOperator(ket_bra(2, 1)));
  CHECK((k01.matrix() - ket_bra(4, 1)).norm() == 0.0);

  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const HermitianOperator a(oracle::random_hermitian(2, rng)), b(oracle::random_hermitian(3, rng));
    const HermitianOperator c(oracle::random_hermitian(2, rng)), d(oracle::random_hermitian(3, rng));
    CHECK(std::abs(hs_inner(kron(a, b), kron(c, d)) - hs_inner(a, c) * hs_inner(b, d)) < 1e-10);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
  }
}

TEST_CASE("partial_trace") {
  const DensityMatrix r1 = random_density(2, 2, 5), r2 = random_density(3, 2, 6);
  const BipartiteDims dims(2, 3);
  CHECK((partial_trace(kron(r1, r2), Subsystem::first, dims).matrix() - r1.matrix()).norm() < 1e-12);
  CHECK((partial_trace(kron(r1, r2), Subsystem::second, dims).matrix() - r2.matrix()).norm() < 1e-12);

  const DensityMatrix bell = bell_phi_plus().density();
  CHECK((partial_trace(bell, Subsystem::first, BipartiteDims(2, 2)).matrix() - Matrix::Identity(2, 2) * 0.5).norm() <
        1e-15);

  Rng rng(2);
  const DensityMatrix rho(oracle::random_state(6, 6, rng));
  const DensityMatrix r_a = partial_trace(rho, Subsystem::first, dims);
  const DensityMatrix r_b = partial_trace(rho, Subsystem::second, dims);
  CHECK((r_a.matrix() - oracle::trace_out_second(rho.matrix(), 2, 3)).norm() < 1e-12);
  CHECK((r_b.matrix() - oracle::trace_out_first(rho.matrix(), 2, 3)).norm() < 1e-12);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_hermitian(2, rng);
    const Matrix b = oracle::random_hermitian(3, rng);
    const Complex lhs_a = (rho.matrix() * kron(a, Matrix(Matrix::Identity(3, 3)))).trace();
    CHECK(std::abs(lhs_a - (r_a.matrix() * a).trace()) <= 1e-10);
    const Complex lhs_b = (rho.matrix() * kron(Matrix(Matrix::Identity(2, 2)), b)).trace();
    CHECK(std::abs(lhs_b - (r_b.matrix() * b).trace()) <= 1e-10);
  }
  CHECK_THROWS_AS(partial_trace(rho, Subsystem::first, BipartiteDims(2, 2)), DimensionError);
}

TEST_CASE("partial_trace is linear") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const BipartiteDims dims(3, 2);
  for (int t = 0; t < 20; ++t) {
    const Matrix r = oracle::random_state(6, 3, rng), s = oracle::random_state(6, 2, rng);
    const double al = u(rng), be = u(rng);
    const Matrix lhs = partial_trace(Matrix(al * r + be * s), Subsystem::first, dims);
    const Matrix rhs = al * partial_trace(r, Subsystem::first, dims) + be * partial_trace(s, Subsystem::first, dims);
    CHECK((lhs - rhs).norm() <= 1e-12);
  }
}

TEST_CASE("reshape_to_matrix") {
  Rng rng(4);
  const BipartiteDims dims(2, 3);
  SUBCASE("product vector") {
    const Vector v = oracle::random_unit(2, rng), w = oracle::random_unit(3, rng);
    const Matrix x = reshape_to_matrix(PureStateVector(oracle::kron_vec(v, w)), dims);
    CHECK((x - v * w.transpose()).norm() < 1e-14);
    const auto s = schmidt_coefficients(PureStateVector(oracle::kron_vec(v, w)), dims);
    CHECK(s(0) == doctest::Approx(1.0));
    CHECK(std::abs(s(1)) < 1e-12);
  }
  SUBCASE("Bell vector") {
    const Matrix x = reshape_to_matrix(bell_phi_plus(), BipartiteDims(2, 2));
    CHECK((x - Matrix::Identity(2, 2) / std::sqrt(2.0)).norm() < 1e-15);
    CHECK(schmidt_coefficients(bell_phi_plus(), BipartiteDims(2, 2))(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  SUBCASE("bilinear identity on random vectors") {
    for (int t = 0; t < 10; ++t) {
      const Vector xv = oracle::random_unit(6, rng);
      const Matrix x = reshape_to_matrix(PureStateVector(xv), dims);
      CHECK(std::abs(x.norm() - 1.0) < 1e-12);
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const Vector v = oracle::random_unit(2, rng), w = oracle::random_unit(3, rng);
        const Complex lhs = oracle::kron_vec(v, w).dot(xv);  // (v (x) w)^dagger x
        const Complex rhs = v.dot(x * w.conjugate());
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      CHECK(worst < 1e-12);
    }
  }
  SUBCASE("sigma_1 squared bounds and product detection") {
    for (int t = 0; t < 30; ++t) {
      const Vector xv = oracle::random_unit(6, rng);
      const double s1 = schmidt_coefficients(PureStateVector(xv), dims)(0);
      CHECK(s1 * s1 <= 1.0 + 1e-12);
      CHECK(s1 * s1 == doctest::Approx(oracle::sigma1_squared(xv, 2, 3)).epsilon(1e-10));
      CHECK(s1 * s1 < 1.0 - 1e-9);  // generic vectors are entangled
      const Vector prod = oracle::kron_vec(oracle::random_unit(2, rng), oracle::random_unit(3, rng));
      const double p1 = schmidt_coefficients(PureStateVector(prod), dims)(0);
      CHECK(std::abs(p1 * p1 - 1.0) <= 1e-9);
    }
  }
  SUBCASE("index convention round trip") {
    Vector xv = Vector::Zero(6);
    xv(1 * 3 + 2) = 1.0;  // |1>|2>
    const Matrix x = reshape_to_matrix(PureStateVector(xv), dims);
    CHECK(x(1, 2) == Complex(1.0, 0.0));
    CHECK((kron(Vector(Vector::Unit(2, 1)), Vector(Vector::Unit(3, 2))) - xv).norm() == 0.0);
  }
  CHECK_THROWS_AS(reshape_to_matrix(PureStateVector::basis(5, 0), dims), DimensionError);
}

TEST_CASE("omega") {
  const BipartiteDims dims(2, 2);
  const DensityMatrix prod = kron(random_density(2, 2, 1), random_density(2, 1, 2));
  CHECK((omega(prod, dims).matrix() - prod.matrix()).norm() < 1e-12);
  CHECK((omega(bell_phi_plus().density(), dims).matrix() - Matrix::Identity(4, 4) * 0.25).norm() < 1e-15);
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho(oracle::random_state(6, 1 + t % 6, rng));
    const BipartiteDims d23(2, 3);
    const DensityMatrix o = omega(rho, d23);
    CHECK((omega(o, d23).matrix() - o.matrix()).norm() < 1e-10);
    const Matrix expected = kron(oracle::trace_out_second(rho.matrix(), 2, 3), oracle::trace_out_first(rho.matrix(), 2, 3));
    CHECK((o.matrix() - expected).norm() < 1e-12);
  }
}

TEST_CASE("partial_transpose") {
  const BipartiteDims dims(2, 2);
  const HermitianOperator pt = partial_transpose(bell_phi_plus().density(), dims);
  CHECK(min_eigenvalue(pt) == doctest::Approx(-0.5));
  CHECK(oracle::min_eig(oracle::partial_transpose_second(bell_phi_plus().density().matrix(), 2, 2)) ==
        doctest::Approx(-0.5));

  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    std::vector<DensityMatrix> terms;
    for (int k = 0; k < 4; ++k) terms.push_back(kron(random_density(2, 1, derive_seed(t, 2 * k)), random_density(3, 1, derive_seed(t, 2 * k + 1))));
    const RealVector w = random_simplex(4, rng);
    const DensityMatrix sep = mix(terms, std::span<const double>(w.data(), 4));
    const BipartiteDims d23(2, 3);
    CHECK(min_eigenvalue(partial_transpose(sep, d23)) >= -1e-10);
    CHECK(min_eigenvalue(partial_transpose(sep, d23, Subsystem::first)) >= -1e-10);
    const HermitianOperator once = partial_transpose(sep, d23);
    CHECK((once.matrix() - oracle::partial_transpose_second(sep.matrix(), 2, 3)).norm() < 1e-15);
    CHECK(std::abs(once.trace() - 1.0) < 1e-12);
    CHECK((partial_transpose(once, d23).matrix() - sep.matrix()).norm() == 0.0);
  }
}

TEST_CASE("werner family") {
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 1.0}) {
    const DensityMatrix w = werner_state(p);
    CHECK(min_eigenvalue(partial_transpose(w, BipartiteDims(2, 2))) == doctest::Approx((1 - 3 * p) / 4).epsilon(1e-12));
  }
}
