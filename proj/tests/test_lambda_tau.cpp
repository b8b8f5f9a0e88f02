#include <doctest.h>

#include "oracles.hpp"
#include "qlat/error.hpp"
#include "qlat/lambda_tau.hpp"

using namespace qlat;

namespace {

const BipartiteDims k22(2, 2);

StatePolytope random_polytope(int d, int n, Rng& rng) {
  std::vector<DensityMatrix> g;
  for (int k = 0; k < n; ++k) g.emplace_back(oracle::random_state(d, 1 + k % d, rng));
  return StatePolytope(g);
}

// Qubit catalogue: the six Pauli eigenstates.
StatePolytope qubit_catalogue() {
  std::vector<DensityMatrix> g;
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0, 1);
  for (const Vector& v : {Vector(Vector::Unit(2, 0)), Vector(Vector::Unit(2, 1)), Vector((Vector(2) << s, s).finished()),
                          Vector((Vector(2) << s, -s).finished()), Vector((Vector(2) << s, s * i).finished()),
                          Vector((Vector(2) << s, -s * i).finished())})
    g.push_back(PureStateVector(v).density());
  return StatePolytope(g);
}

}  // namespace

TEST_CASE("tau_polytope") {
  Rng rng(71);
  const DensityMatrix r1(oracle::random_state(2, 2, rng)), r2(oracle::random_state(2, 1, rng)),
      r2b(oracle::random_state(2, 2, rng));
  const auto t = tau_polytope(StatePolytope({kron(r1, r2)}), Subsystem::first, k22);
  REQUIRE(t.size() == 1);
  CHECK((t.generators()[0].matrix() - r1.matrix()).norm() < 1e-12);
  const auto two = tau_polytope(StatePolytope({kron(r1, r2), kron(r1, r2b)}), Subsystem::first, k22);
  CHECK(two.size() == 1);
  CHECK(set_equal(two, StatePolytope({r1})));

  for (int k = 0; k < 10; ++k) {
    const auto c = random_polytope(4, 2, rng), c2 = random_polytope(4, 3, rng);
    CHECK(set_equal(tau_polytope(join(c, c2), Subsystem::first, k22),
                    join(tau_polytope(c, Subsystem::first, k22), tau_polytope(c2, Subsystem::first, k22))));
  }
  CHECK_THROWS_AS(tau_polytope(StatePolytope({DensityMatrix::maximally_mixed(3)}), Subsystem::first, k22), DimensionError);
}

TEST_CASE("lambda") {
  Rng rng(72);
  const DensityMatrix r1(oracle::random_state(2, 2, rng)), r2(oracle::random_state(3, 2, rng));
  const auto l = lambda(StatePolytope({r1}), StatePolytope({r2}));
  REQUIRE(l.size() == 1);
  CHECK((l.generators()[0].matrix() - kron(r1.matrix(), r2.matrix())).norm() < 1e-14);

  const auto a = random_polytope(2, 3, rng), b = random_polytope(3, 4, rng);
  CHECK(lambda(a, b).size() == 12);

  const auto cat = lambda(qubit_catalogue(), qubit_catalogue());
  CHECK(cat.size() == 36);
  for (const auto& g : cat.generators()) CHECK(oracle::min_eig(oracle::partial_transpose_second(g.matrix(), 2, 2)) >= -1e-10);
}

TEST_CASE("lambda_tau") {
  Rng rng(73);
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho(oracle::random_state(4, 1 + k % 4, rng));
    const auto lt = lambda_tau(StatePolytope({rho}), k22);
    REQUIRE(lt.size() == 1);
    CHECK((lt.generators()[0].matrix() - omega(rho, k22).matrix()).norm() < 1e-10);
  }
  const auto bell = lambda_tau(StatePolytope({bell_phi_plus().density()}), k22);
  CHECK(set_equal(bell, StatePolytope({DensityMatrix::maximally_mixed(4)})));
  CHECK_FALSE(set_equal(bell, StatePolytope({bell_phi_plus().density()})));

  for (int k = 0; k < 100; ++k) {
    const auto c = random_polytope(4, 1 + k % 3, rng);
    const auto once = lambda_tau(c, k22);
    const auto twice = lambda_tau(once, k22);
    CHECK(mutual_membership_residual(once, twice) < 1e-8);
    if (k % 10 == 0)
      for (const auto& g : once.generators()) CHECK(oracle::min_eig(oracle::partial_transpose_second(g.matrix(), 2, 2)) >= -1e-10);
  }
}

TEST_CASE("tau of lambda is the identity") {
  Rng rng(74);
  const DensityMatrix r1(oracle::random_state(2, 2, rng)), r2(oracle::random_state(3, 2, rng));
  const auto single = check_tau_lambda_identity(StatePolytope({r1}), StatePolytope({r2}));
  CHECK(single.ok);
  CHECK(single.residual() < 1e-12);
  for (int k = 0; k < 20; ++k) {
    const auto rep = check_tau_lambda_identity(random_polytope(2, 3, rng), random_polytope(3, 3, rng));
    CHECK(rep.ok);
    CHECK(rep.residual() < 1e-8);
  }
  CHECK(check_tau_lambda_identity(qubit_catalogue(), qubit_catalogue()).ok);
}

TEST_CASE("meet inclusion under tau") {
  Rng rng(75);
  const DensityMatrix r1(oracle::random_state(2, 2, rng)), r2(oracle::random_state(2, 2, rng)),
      r2b(oracle::random_state(2, 2, rng));
  const StatePolytope c({kron(r1, r2)}), cp({kron(r1, r2b)});
  CHECK(meet(c, cp).is_empty());
  const auto taus = meet(tau_polytope(c, Subsystem::first, k22), tau_polytope(cp, Subsystem::first, k22));
  CHECK(taus.contains(r1));

  for (int k = 0; k < 5; ++k) {
    const auto base = random_polytope(4, 3, rng);
    const StatePolytope a = join(base, random_polytope(4, 2, rng));
    const StatePolytope b = join(base, random_polytope(4, 2, rng));
    const auto m = meet(a, b);
    const auto down = meet(tau_polytope(a, Subsystem::first, k22), tau_polytope(b, Subsystem::first, k22));
    for (const auto& s : m.sample(10, rng)) CHECK(down.contains(partial_trace(s, Subsystem::first, k22)));
  }
}

TEST_CASE("SeparableDecomposition") {
  Rng rng(76);
  const DensityMatrix a0(oracle::random_state(2, 1, rng)), a1(oracle::random_state(2, 2, rng));
  const DensityMatrix b0(oracle::random_state(2, 2, rng)), b1(oracle::random_state(2, 1, rng));
  const auto dec = SeparableDecomposition::diagonal({0.3, 0.7}, {a0, a1}, {b0, b1});
  CHECK_NOTHROW(dec.validate());
  const Matrix expected = 0.3 * kron(a0.matrix(), b0.matrix()) + 0.7 * kron(a1.matrix(), b1.matrix());
  CHECK((dec.assemble().matrix() - expected).norm() < 1e-14);
  CHECK(dec.marginal_weights_a()[1] == doctest::Approx(0.7));

  auto bad = dec;
  bad.weights = {0.5, 0.6};
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  bad = dec;
  bad.pairs = {{0, 0}, {0, 5}};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("css_for_decomposition and is_css") {
  Rng rng(77);
  const DensityMatrix r1(oracle::random_state(2, 2, rng)), r2(oracle::random_state(2, 2, rng));
  const auto single = css_for_decomposition(SeparableDecomposition::diagonal({1.0}, {r1}, {r2}));
  CHECK(single.size() == 1);
  CHECK(is_css(single, k22).css);

  const DensityMatrix a1(oracle::random_state(2, 1, rng)), b1(oracle::random_state(2, 1, rng));
  const auto dec = SeparableDecomposition::diagonal({0.4, 0.6}, {r1, a1}, {r2, b1});
  const auto css = css_for_decomposition(dec);
  CHECK(css.size() == 4);
  CHECK(member(css, dec.assemble()).member);
  const auto check = is_css(css, k22);
  CHECK(check.css);
  CHECK(check.residual < 1e-8);

  CHECK_FALSE(is_css(StatePolytope({bell_phi_plus().density()}), k22).css);
  CHECK(is_css(lambda(qubit_catalogue(), qubit_catalogue()), k22).css);
}

TEST_CASE("Werner CSS from a recovered decomposition") {
  const DensityMatrix w = werner_state(0.25);
  const auto pr = project_separable(w, k22);
  REQUIRE(pr.approximation.distance < 1e-6);
  const auto dec = SeparableDecomposition::from_approximation(pr.approximation);
  const auto css = css_for_decomposition(dec);
  CHECK(member(css, w).member);
  CHECK(ppt_check(w, k22).ppt);
  CHECK(is_css(css, k22).css);
}

TEST_CASE("separable_via_css") {
  Rng rng(78);
  SUBCASE("mixture of three products") {
    std::vector<DensityMatrix> a, b;
    for (int k = 0; k < 3; ++k) a.emplace_back(oracle::random_state(2, 1, rng)), b.emplace_back(oracle::random_state(3, 2, rng));
    const auto dec = SeparableDecomposition::diagonal({0.2, 0.3, 0.5}, a, b);
    const auto v = separable_via_css(dec.assemble(), dec, BipartiteDims(2, 3));
    CHECK(v.verdict == Verdict::separable);
    REQUIRE(v.css.has_value());
    CHECK(v.css->size() == 9);
    CHECK(v.membership_residual <= 1e-8);
    CHECK(v.invariance_residual <= 1e-8);
  }
  SUBCASE("Bell is inconclusive here") {
    const auto v = separable_via_css(bell_phi_plus().density(), std::nullopt, k22);
    CHECK(v.verdict == Verdict::inconclusive);
    CHECK(spectral_criterion(bell_phi_plus().density(), k22).verdict == Verdict::entangled);
  }
  SUBCASE("product state with singleton CSS and entropy") {
    const DensityMatrix r1(oracle::random_state(2, 2, rng)), r2(oracle::random_state(2, 2, rng));
    const auto v = separable_via_css(kron(r1, r2), SeparableDecomposition::diagonal({1.0}, {r1}, {r2}), k22);
    CHECK(v.verdict == Verdict::separable);
    REQUIRE(v.min_entropy.has_value());
    CHECK(*v.min_entropy == doctest::Approx(von_neumann_entropy(r1) + von_neumann_entropy(r2)).epsilon(1e-10));
    CHECK(*v.min_entropy > 1e-6);

    const auto p1 = DensityMatrix::basis_state(2, 0), p2 = DensityMatrix::basis_state(2, 1);
    const auto pure = separable_via_css(kron(p1, p2), SeparableDecomposition::diagonal({1.0}, {p1}, {p2}), k22);
    CHECK(*pure.min_entropy == doctest::Approx(0.0));
    CHECK(pure.note.find("pure") != std::string::npos);
  }
  SUBCASE("wrong decomposition is not accepted") {
    const DensityMatrix r1(oracle::random_state(2, 2, rng)), r2(oracle::random_state(2, 2, rng));
    const auto v = separable_via_css(bell_phi_plus().density(), SeparableDecomposition::diagonal({1.0}, {r1}, {r2}), k22);
    CHECK(v.verdict == Verdict::inconclusive);
  }
}

TEST_CASE("pure-state unification") {
  Rng rng(79);
  int products = 0;
  for (int k = 0; k < 200; ++k) {
    Vector x;
    if (k % 2 == 0) {
      x = oracle::kron_vec(oracle::random_unit(2, rng), oracle::random_unit(3, rng));
    } else {
      x = oracle::random_unit(6, rng);
    }
    const PureStateVector psi(x);
    const BipartiteDims dims(2, 3);
    const DensityMatrix rho = psi.density();
    const bool rank_one = schmidt_coefficients(psi, dims)(1) < 1e-9;
    const bool invariant = (omega(rho, dims).matrix() - rho.matrix()).norm() < 1e-9;
    const double ent = oracle::entropy_nats([&] {
      Eigen::SelfAdjointEigenSolver<Matrix> es(oracle::trace_out_second(rho.matrix(), 2, 3));
      return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + 2);
    }());
    const bool pure_marginal = ent < 1e-9;
    CHECK(rank_one == invariant);
    CHECK(rank_one == pure_marginal);
    products += rank_one;
  }
  CHECK(products == 100);
}
