#include <doctest.h>

#include "oracles.hpp"
#include "qlat/convex_set.hpp"
#include "qlat/error.hpp"

using namespace qlat;

namespace {

DensityMatrix pure(const Vector& v) { return PureStateVector::normalized(v).density(); }

DensityMatrix mix2(const DensityMatrix& a, const DensityMatrix& b, double lam) {
  const std::vector<DensityMatrix> st{a, b};
  const std::vector<double> w{lam, 1 - lam};
  return mix(st, w);
}

StatePolytope random_polytope(int d, int n, Rng& rng) {
  std::vector<DensityMatrix> g;
  for (int k = 0; k < n; ++k) g.emplace_back(oracle::random_state(d, 1 + k % d, rng));
  return StatePolytope(g);
}

// Independent membership oracle: projected-gradient on the simplex of weights.
double hull_distance_oracle(const StatePolytope& c, const DensityMatrix& rho) {
  const int n = static_cast<int>(c.size());
  std::vector<Matrix> g;
  for (const auto& x : c.generators()) g.push_back(x.matrix());
  std::vector<double> w(n, 1.0 / n);
  Matrix best;
  for (int it = 0; it < 20000; ++it) {
    Matrix cur = Matrix::Zero(rho.dim(), rho.dim());
    for (int k = 0; k < n; ++k) cur += w[k] * g[k];
    const Matrix r = cur - rho.matrix();
    // Frank-Wolfe step toward the best vertex
    int arg = 0;
    double low = 1e300;
    for (int k = 0; k < n; ++k) {
      const double v = (r * g[k]).trace().real();
      if (v < low) low = v, arg = k;
    }
    const double step = 2.0 / (it + 2.0);
    for (int k = 0; k < n; ++k) w[k] *= (1 - step);
    w[arg] += step;
    best = cur;
  }
  return (best - rho.matrix()).norm();
}

}  // namespace

TEST_CASE("member examples") {
  const DensityMatrix a = DensityMatrix::basis_state(3, 0), b = DensityMatrix::basis_state(3, 1);
  const StatePolytope c({a, b});
  const auto self = member(c, a);
  CHECK(self.member);
  CHECK(self.weights(0) == doctest::Approx(1.0));

  const auto outside = member(c, DensityMatrix::basis_state(3, 2));
  CHECK_FALSE(outside.member);
  REQUIRE(outside.separating.has_value());
  for (const auto& g : c.generators()) CHECK(hs_inner(g.op(), *outside.separating) <= outside.offset + 1e-12);
  CHECK(hs_inner(DensityMatrix::basis_state(3, 2).op(), *outside.separating) > outside.offset);

  const auto mid = member(c, mix2(a, b, 0.5));
  CHECK(mid.member);
  CHECK(mid.weights(0) == doctest::Approx(0.5));
  CHECK(mid.weights(1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(member(c, DensityMatrix::maximally_mixed(2)), DimensionError);
  CHECK_THROWS_AS(StatePolytope({}), DimensionError);
  CHECK_THROWS_AS(StatePolytope({a, DensityMatrix::maximally_mixed(2)}), DimensionError);
}

TEST_CASE("member agrees with an independent hull-distance oracle") {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const StatePolytope c = random_polytope(2, 3, rng);
    const DensityMatrix rho(oracle::random_state(2, 2, rng));
    const auto cert = member(c, rho);
    const double oracle_dist = hull_distance_oracle(c, rho);
    CHECK(cert.residual <= oracle_dist + 1e-9);
    CHECK(cert.residual == doctest::Approx(oracle_dist).epsilon(1e-3));
  }
}

TEST_CASE("join") {
  Rng rng(42);
  const StatePolytope c = random_polytope(3, 3, rng);
  CHECK(set_equal(join(c, c), c));
  const StatePolytope z({DensityMatrix::basis_state(2, 0)}), o({DensityMatrix::basis_state(2, 1)});
  CHECK(member(join(z, o), DensityMatrix::maximally_mixed(2)).member);
  const StatePolytope c2 = random_polytope(3, 2, rng);
  CHECK(leq(c, join(c, c2)));
  for (const auto& g : c2.generators()) CHECK(member(join(c, c2), g).member);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k)
    CHECK(member(join(c, c2), mix2(c.generators()[k % 3], c2.generators()[k % 2], u(rng))).member);
}

TEST_CASE("meet") {
  Rng rng(43);
  const StatePolytope c = random_polytope(2, 3, rng);
  const auto cc = meet(c, c);
  for (const auto& g : c.generators()) CHECK(cc.contains(g));
  CHECK(cc.provenance().find("^") != std::string::npos);

  const DensityMatrix r1(oracle::random_state(2, 1, rng)), r2(oracle::random_state(2, 2, rng)),
      r2b(oracle::random_state(2, 2, rng));
  const auto m = meet(StatePolytope({kron(r1, r2)}), StatePolytope({kron(r1, r2b)}));
  CHECK(m.is_empty());
  CHECK_FALSE(m.contains(kron(r1, r2)));

  const DensityMatrix shared(oracle::random_state(2, 2, rng));
  const auto sh = meet(StatePolytope({shared, DensityMatrix::basis_state(2, 0)}),
                       StatePolytope({shared, DensityMatrix::basis_state(2, 1)}));
  CHECK(sh.contains(shared));
  REQUIRE(sh.find_member().has_value());
}

TEST_CASE("neg") {
  SUBCASE("maximally mixed singleton") {
    for (int d : {2, 3}) {
      const auto n = neg(StatePolytope({DensityMatrix::maximally_mixed(d)}));
      Rng rng(1);
      CHECK(n.is_empty());
      CHECK(n.sample(5, rng).empty());
      const auto nn = neg(n);
      CHECK(nn.contains(DensityMatrix::maximally_mixed(d)));
      CHECK(nn.contains(DensityMatrix::basis_state(d, 0)));
      // {I/d} is strictly below the full set, so double negation fails
      CHECK_FALSE(set_equal(nn, ImplicitConvexSet::from(StatePolytope({DensityMatrix::maximally_mixed(d)})), rng, 50));
    }
  }
  SUBCASE("pure qubit state") {
    const auto n = neg(StatePolytope({DensityMatrix::basis_state(2, 0)}));
    CHECK(n.contains(DensityMatrix::basis_state(2, 1)));
    CHECK_FALSE(n.contains(DensityMatrix::maximally_mixed(2)));
    CHECK_FALSE(n.contains(DensityMatrix::basis_state(2, 0)));
    const auto mem = n.find_member();
    REQUIRE(mem.has_value());
    CHECK((mem->matrix() - DensityMatrix::basis_state(2, 1).matrix()).norm() < 1e-8);
  }
  SUBCASE("orthogonality to every generator") {
    Rng rng(44);
    const StatePolytope c({pure(Vector::Unit(3, 0)), pure(Vector(Vector::Unit(3, 0) + Vector::Unit(3, 1)))});
    const auto n = neg(c);
    for (const auto& s : n.sample(20, rng)) {
      for (const auto& g : c.generators()) CHECK(std::abs(hs_inner(s.op(), g.op())) < 1e-8);
    }
    CHECK(n.contains(DensityMatrix::basis_state(3, 2)));
  }
}

TEST_CASE("leq") {
  Rng rng(45);
  const StatePolytope c1 = random_polytope(2, 2, rng);
  CHECK(leq(c1, c1));
  const StatePolytope c2({DensityMatrix::basis_state(2, 0)});
  CHECK(leq(c1, join(c1, c2)));
  REQUIRE_FALSE(member(c1, DensityMatrix::basis_state(2, 0)).member);
  CHECK_FALSE(leq(join(c1, c2), c1));
  CHECK(leq(c1, ImplicitConvexSet::full(2)));
  CHECK(leq(ImplicitConvexSet::empty(2), ImplicitConvexSet::from(c1), rng));
}

TEST_CASE("meets are monotone under mixing") {
  Rng rng(46);
  const StatePolytope a = random_polytope(2, 4, rng);
  const StatePolytope b = join(StatePolytope({a.generators()[0], a.generators()[1]}), random_polytope(2, 2, rng));
  const auto m = meet(a, b);
  const auto pts = m.sample(10, rng);
  REQUIRE(pts.size() == 10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (size_t k = 0; k + 1 < pts.size(); ++k) CHECK(m.contains(mix2(pts[k], pts[k + 1], u(rng))));
}

TEST_CASE("slices and mixed expressions") {
  const auto diag = ImplicitConvexSet::slice(good_representative(
      span_subspace(std::vector<HermitianOperator>{DensityMatrix::basis_state(2, 0).op(), DensityMatrix::basis_state(2, 1).op()})));
  CHECK(diag.contains(DensityMatrix::maximally_mixed(2)));
  CHECK_FALSE(diag.contains(pure(Vector::Ones(2))));
  const auto m = meet(diag, ImplicitConvexSet::from(StatePolytope({pure(Vector::Ones(2)), DensityMatrix::basis_state(2, 0)})));
  REQUIRE(m.find_member().has_value());
  CHECK(m.contains(DensityMatrix::basis_state(2, 0)));
  const auto mem = *m.find_member();
  CHECK(std::abs(mem.matrix()(0, 1)) < 1e-8);
  const auto j = join(diag, ImplicitConvexSet::from(StatePolytope({pure(Vector::Ones(2))})));
  CHECK_THROWS_AS(j.find_member(), UnsupportedError);
}

TEST_CASE("bounded poset") {
  Rng rng(47);
  for (int t = 0; t < 5; ++t) {
    const StatePolytope c = random_polytope(3, 3, rng);
    CHECK(leq(c, ImplicitConvexSet::full(3)));
    CHECK(leq(ImplicitConvexSet::empty(3), ImplicitConvexSet::from(c), rng));
  }
}

TEST_CASE("lattice law suite on random overlapping triples") {
  Rng rng(48);
  for (int t = 0; t < 4; ++t) {
    const StatePolytope base = random_polytope(2, 3, rng);
    const DensityMatrix shared = mix(base.generators(), std::vector<double>{0.2, 0.3, 0.5});
    const auto c1 = ImplicitConvexSet::from(StatePolytope({shared, base.generators()[0]}), "C1");
    const auto c2 = ImplicitConvexSet::from(join(StatePolytope({shared}), base), "C2");
    const auto c3 = ImplicitConvexSet::from(join(StatePolytope({shared}), random_polytope(2, 2, rng)), "C3");
    const auto laws = lattice_law_suite(c1, c2, c3, rng, 30);
    CHECK(laws.size() >= 9);
    for (const auto& law : laws) {
      INFO(law.name);
      CHECK(law.holds);
    }
  }
}
