#include <doctest.h>

#include "oracles.hpp"
#include "qlat/random.hpp"
#include "qlat/separability.hpp"

using namespace qlat;

namespace {

const BipartiteDims k22(2, 2);
const BipartiteDims k23(2, 3);

DensityMatrix random_separable(const BipartiteDims& dims, int terms, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DensityMatrix> parts;
  for (int k = 0; k < terms; ++k)
    parts.push_back(kron(PureStateVector(random_unit_vector(dims.d1, rng)).density(),
                         PureStateVector(random_unit_vector(dims.d2, rng)).density()));
  const RealVector w = random_simplex(terms, rng);
  return mix(parts, std::span<const double>(w.data(), terms));
}

double product_value(const Matrix& op, const Vector& v, const Vector& w) {
  const Vector x = oracle::kron_vec(v, w);
  return x.dot(op * x).real();
}

}  // namespace

TEST_CASE("product_extrema examples") {
  const HermitianOperator quarter(Matrix(Matrix::Identity(4, 4) * 0.25));
  CHECK(product_extrema(quarter, k22, ExtremumMode::min).value == doctest::Approx(0.25));
  CHECK(product_extrema(quarter, k22, ExtremumMode::max).value == doctest::Approx(0.25));

  const HermitianOperator bell = bell_phi_plus().density().op();
  const auto mx = product_extrema(bell, k22, ExtremumMode::max);
  const double s1 = schmidt_coefficients(bell_phi_plus(), k22)(0);
  CHECK(mx.value == doctest::Approx(s1 * s1).epsilon(1e-10));
  CHECK(mx.value == doctest::Approx(0.5).epsilon(1e-10));
  const auto mn = product_extrema(bell, k22, ExtremumMode::min);
  CHECK(std::abs(mn.value) < 1e-10);
  CHECK(std::abs(product_value(bell.matrix(), Vector::Unit(2, 0), Vector::Unit(2, 1))) < 1e-15);
  CHECK(std::string(ProductOptimum::caveat).find("local") != std::string::npos);
}

TEST_CASE("product_extrema record recomputes and is monotone") {
  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const HermitianOperator op(oracle::random_hermitian(6, rng));
    const ExtremaOptions opt{.restarts = 10, .seed = static_cast<std::uint64_t>(t)};
    for (auto mode : {ExtremumMode::min, ExtremumMode::max}) {
      const auto r = product_extrema(op, k23, mode, opt);
      CHECK(std::abs(r.value - product_value(op.matrix(), r.v.amplitudes(), r.w.amplitudes())) <= 1e-10);
      for (size_t k = 1; k < r.history.size(); ++k) {
        if (mode == ExtremumMode::max) CHECK(r.history[k] >= r.history[k - 1] - 1e-12);
        else CHECK(r.history[k] <= r.history[k - 1] + 1e-12);
      }
    }
  }
}

TEST_CASE("product_extrema sandwich and sampling bounds") {
  Rng rng(52);
  for (int t = 0; t < 20; ++t) {
    const Matrix h = oracle::random_hermitian(6, rng);
    const HermitianOperator op(h);
    const auto [lo, hi] = state_extrema(op);
    const double m = product_extrema(op, k23, ExtremumMode::min).value;
    const double M = product_extrema(op, k23, ExtremumMode::max).value;
    CHECK(lo - 1e-9 <= m);
    CHECK(m <= M);
    CHECK(M <= hi + 1e-9);
    const auto [smin, smax] = oracle::product_range_by_sampling(h, 2, 3, 2000, rng);
    CHECK(m <= smin + 1e-9);
    CHECK(M >= smax - 1e-9);
  }
}

TEST_CASE("pure-direction maxima equal sigma_1 squared") {
  Rng rng(53);
  for (int t = 0; t < 30; ++t) {
    const Vector x = oracle::random_unit(6, rng);
    const auto r = product_extrema(HermitianOperator::outer(x), k23, ExtremumMode::max);
    CHECK(std::abs(r.value - oracle::sigma1_squared(x, 2, 3)) <= 1e-6);
  }
}

TEST_CASE("state_extrema") {
  const auto [lo, hi] = state_extrema(HermitianOperator(oracle::pauli_z()));
  CHECK(lo == doctest::Approx(-1.0));
  CHECK(hi == doctest::Approx(1.0));
  Rng rng(54);
  for (int t = 0; t < 10; ++t) CHECK(state_extrema(DensityMatrix(oracle::random_state(4, 2, rng)).op()).second <= 1.0 + 1e-12);
}

TEST_CASE("pure_witness_test") {
  const auto b = pure_witness_test(bell_phi_plus().density(), bell_phi_plus(), k22);
  CHECK(b.verdict == Verdict::entangled);
  CHECK(b.value == doctest::Approx(1.0));
  CHECK(b.bound == doctest::Approx(0.5));
  const auto mm = pure_witness_test(DensityMatrix::maximally_mixed(4), bell_phi_plus(), k22);
  CHECK(mm.verdict == Verdict::inconclusive);
  CHECK(mm.value == doctest::Approx(0.25));
  Rng rng(55);
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix rho = random_separable(k23, 1 + t % 4, derive_seed(55, t));
    const PureStateVector x(oracle::random_unit(6, rng));
    const auto r = pure_witness_test(rho, x, k23);
    CHECK(r.verdict == Verdict::inconclusive);
    CHECK(r.value <= r.bound + 1e-9);
  }
}

TEST_CASE("spectral_criterion") {
  const auto b = spectral_criterion(bell_phi_plus().density(), k22);
  CHECK(b.verdict == Verdict::entangled);
  CHECK(b.value == doctest::Approx(1.0));
  CHECK(b.bound == doctest::Approx(0.5));
  for (int k = 0; k <= 30; ++k) {
    const double p = k / 30.0;
    const bool ent = spectral_criterion(werner_state(p), k22).verdict == Verdict::entangled;
    const bool npt = !ppt_check(werner_state(p), k22).ppt;
    CHECK(ent == (p > 1.0 / 3.0 + 1e-9));
    CHECK(ent == npt);
  }
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix prod = kron(random_density(2, 1 + t % 2, derive_seed(57, t)), random_density(3, 1 + t % 3, derive_seed(58, t)));
    CHECK(spectral_criterion(prod, k23).verdict == Verdict::inconclusive);
  }
}

TEST_CASE("random_witness_search") {
  const WitnessSearchOptions fast{.samples = 20, .restarts = 5, .seed = 1};
  const auto b = random_witness_search(bell_phi_plus().density(), k22, fast);
  CHECK(b.verdict == Verdict::entangled);
  REQUIRE(b.best.has_value());
  CHECK(b.best->violation == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(b.best->m <= b.best->M);
  CHECK(b.best->certified(1e-9));
  CHECK(b.best->value > b.best->M + 1e-9);

  CHECK(random_witness_search(DensityMatrix::maximally_mixed(4), k22, fast).verdict == Verdict::inconclusive);
  for (int t = 0; t < 5; ++t) {
    const DensityMatrix rho = random_separable(k22, 3, derive_seed(59, t));
    REQUIRE(ppt_check(rho, k22).ppt);
    CHECK(random_witness_search(rho, k22, {.samples = 200, .restarts = 20, .seed = static_cast<std::uint64_t>(t)}).verdict ==
          Verdict::inconclusive);
  }
}

TEST_CASE("witness invariants") {
  const auto w = make_witness(bell_phi_plus().density().op(), bell_phi_plus().density(), k22, {}, "test");
  CHECK(w.op.frobenius_norm() == doctest::Approx(1.0));
  CHECK(w.m <= w.M);
  CHECK(w.violation > 0);
  CHECK((w.value < w.m - 1e-9 || w.value > w.M + 1e-9));
  const HermitianOperator shifted = w.shifted_upper();
  CHECK(hs_inner(shifted, w.target.op()) == doctest::Approx(w.value - w.M));
  CHECK(hs_inner(shifted, kron(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 0)).op()) <= 1e-9);
}

TEST_CASE("project_separable") {
  SUBCASE("explicit separable mixture") {
    const DensityMatrix rho = random_separable(k23, 4, 60);
    const auto r = project_separable(rho, k23);
    CHECK(r.approximation.distance < 1e-4);
    CHECK(r.approximation.iterations <= 2000);
    CHECK((r.approximation.reconstruct() - r.approximation.point.matrix()).norm() <= 1e-8);
    CHECK(static_cast<int>(r.approximation.weights.size()) <= 36 + 1);
    for (size_t k = 1; k < r.approximation.distances.size(); ++k)
      CHECK(r.approximation.distances[k] <= r.approximation.distances[k - 1] + 1e-12);
  }
  SUBCASE("Bell state") {
    const auto r = project_separable(bell_phi_plus().density(), k22);
    CHECK(r.approximation.distance > 0.1);
    CHECK(r.witness.value - r.witness.M > 0);
    CHECK(r.verdict == Verdict::entangled);
    CHECK_FALSE(ppt_check(bell_phi_plus().density(), k22).ppt);
    for (size_t k = 0; k < r.approximation.weights.size(); ++k) {
      const Vector g = oracle::kron_vec(r.approximation.factors_a[k].amplitudes(), r.approximation.factors_b[k].amplitudes());
      CHECK(g.dot(r.witness.op.matrix() * g).real() >= r.witness.m - 1e-9);
      CHECK(g.dot(r.witness.op.matrix() * g).real() <= r.witness.M + 1e-9);
    }
  }
  SUBCASE("point already in the hull") {
    const DensityMatrix rho = kron(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1));
    const auto r = project_separable(rho, k22);
    CHECK(r.approximation.distance < 1e-6);
    CHECK(r.approximation.iterations <= 2);
  }
  SUBCASE("Werner family") {
    CHECK(project_separable(werner_state(0.3), k22).approximation.distance < 1e-6);
    const auto ent = project_separable(werner_state(0.5), k22);
    CHECK(ent.verdict == Verdict::entangled);
  }
}

TEST_CASE("ppt_check") {
  const auto b = ppt_check(bell_phi_plus().density(), k22);
  CHECK_FALSE(b.ppt);
  CHECK(b.min_eigenvalue == doctest::Approx(-0.5));
  CHECK(b.exact);
  Rng rng(61);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix prod = kron(DensityMatrix(oracle::random_state(2, 2, rng)), DensityMatrix(oracle::random_state(3, 2, rng)));
    CHECK(ppt_check(prod, k23).ppt);
  }
  CHECK(std::abs(ppt_check(werner_state(1.0 / 3.0), k22).min_eigenvalue) <= 1e-10);
  CHECK_FALSE(ppt_check(DensityMatrix::maximally_mixed(9), BipartiteDims(3, 3)).exact);
}

TEST_CASE("soundness sweep against the PPT oracle") {
  Rng rng(62);
  int flagged = 0;
  for (const auto& dims : {k22, k23}) {
    for (int t = 0; t < 60; ++t) {
      const DensityMatrix rho(oracle::random_state(dims.total(), 1 + t % dims.total(), rng));
      const bool ppt = ppt_check(rho, dims).ppt;
      const bool spec = spectral_criterion(rho, dims).verdict == Verdict::entangled;
      const bool pw = pure_witness_test(rho, PureStateVector(oracle::random_unit(dims.total(), rng)), dims).verdict ==
                      Verdict::entangled;
      const bool ws =
          random_witness_search(rho, dims, {.samples = 10, .restarts = 5, .seed = static_cast<std::uint64_t>(t)}).verdict ==
          Verdict::entangled;
      if (spec || pw || ws) {
        ++flagged;
        CHECK_FALSE(ppt);
      }
    }
  }
  CHECK(flagged > 0);
}
