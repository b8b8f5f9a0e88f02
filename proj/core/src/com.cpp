#include "qlat/com.hpp"

#include <algorithm>
#include <cmath>

#include "qlat/error.hpp"
#include "qlat/hull.hpp"

namespace qlat {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::classical:
      return "classical";
    case ModelKind::quantum:
      return "quantum";
    case ModelKind::custom:
      return "custom";
  }
  return "custom";
}

bool ConvexModel::is_state(const RealVector& x, double tol) const {
  if (x.size() != ambient) return false;
  if (std::abs(u(x) - 1.0) > tol) return false;
  return state_test ? state_test(x, tol) : true;
}

InvariantReport ConvexModel::check(double tol) const {
  InvariantReport r;
  for (const auto& a : catalogue) {
    r.deviation = std::max(r.deviation, std::abs(u(a) - 1.0));
    for (const auto& f : effects) {
      const double v = f.dot(a);
      r.deviation = std::max({r.deviation, -v, v - 1.0});
    }
  }
  r.ok = r.deviation <= tol;
  return r;
}

namespace {

double hull_distance(const RealVector& x, const Generators& gens) {
  RealMatrix p(x.size(), static_cast<Eigen::Index>(gens.size()));
  for (std::size_t k = 0; k < gens.size(); ++k) p.col(static_cast<Eigen::Index>(k)) = gens[k];
  return project_onto_hull(p, x).distance;
}

double mutual_residual(const Generators& a, const Generators& b) {
  double worst = 0.0;
  for (const auto& x : a) worst = std::max(worst, hull_distance(x, b));
  for (const auto& x : b) worst = std::max(worst, hull_distance(x, a));
  return worst;
}

RealVector unit_vector(int n, int k) {
  RealVector e = RealVector::Zero(n);
  e(k) = 1.0;
  return e;
}

bool simplex_test(const RealVector& x, double tol) { return x.minCoeff() >= -tol; }

ConvexModel simplex_model(std::vector<int> dims) {
  int n = 1;
  for (int d : dims) n *= d;
  ConvexModel m;
  m.kind = ModelKind::classical;
  m.dims = std::move(dims);
  m.ambient = n;
  m.unit = RealVector::Ones(n);
  for (int k = 0; k < n; ++k) {
    m.effects.push_back(unit_vector(n, k));
    m.catalogue.push_back(unit_vector(n, k));
  }
  m.catalogue.push_back(RealVector::Constant(n, 1.0 / n));
  m.state_test = simplex_test;
  return m;
}

// Basis states and the real and imaginary two-level superpositions.
std::vector<Vector> pure_catalogue(int d) {
  std::vector<Vector> out;
  for (int k = 0; k < d; ++k) out.push_back(Vector::Unit(d, k));
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k) {
    for (int l = k + 1; l < d; ++l) {
      Vector p = Vector::Zero(d), q = Vector::Zero(d);
      p(k) = s;
      p(l) = s;
      q(k) = s;
      q(l) = Complex(0.0, s);
      out.push_back(p);
      out.push_back(q);
    }
  }
  return out;
}

Morphism linear_morphism(int in_dim, const std::function<RealVector(const RealVector&)>& f, std::string name) {
  const RealVector first = f(unit_vector(in_dim, 0));
  RealMatrix m(first.size(), in_dim);
  m.col(0) = first;
  for (int k = 1; k < in_dim; ++k) m.col(k) = f(unit_vector(in_dim, k));
  return Morphism{m, std::move(name)};
}

Generators outer_products(const Generators& a, const Generators& b) {
  Generators out;
  for (const auto& x : a)
    for (const auto& y : b) {
      RealVector z(x.size() * y.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) z.segment(i * y.size(), y.size()) = x(i) * y;
      out.push_back(z);
    }
  return out;
}

}  // namespace

ConvexModel classical_model(int n) {
  if (n < 2) throw DimensionError("classical model needs at least 2 outcomes");
  return simplex_model({n});
}

ConvexModel classical_model(int n1, int n2) {
  if (n1 < 2 || n2 < 2) throw DimensionError("classical model needs at least 2 outcomes per factor");
  ConvexModel m = simplex_model({n1, n2});
  // correlated diagonal distribution
  RealVector diag = RealVector::Zero(n1 * n2);
  for (int k = 0; k < std::min(n1, n2); ++k) diag(k * n2 + k) = 1.0 / std::min(n1, n2);
  m.catalogue.push_back(diag);
  return m;
}

RealVector state_coords(const DensityMatrix& rho) { return hermitian_coords(rho.matrix()); }

DensityMatrix coords_state(const RealVector& x, int dim) {
  if (x.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionError("coordinate vector has the wrong length");
  return DensityMatrix(HermitianOperator(from_hermitian_coords(x, dim)));
}

ConvexModel quantum_model(int d) {
  if (d < 2) throw DimensionError("quantum model needs dimension at least 2");
  ConvexModel m;
  m.kind = ModelKind::quantum;
  m.dims = {d};
  m.ambient = d * d;
  m.unit = hermitian_coords(Matrix::Identity(d, d));
  for (const auto& v : pure_catalogue(d)) {
    const Matrix p = v * v.adjoint();
    m.effects.push_back(hermitian_coords(p));
    m.catalogue.push_back(hermitian_coords(p));
  }
  m.catalogue.push_back(hermitian_coords(Matrix::Identity(d, d) / d));
  m.state_test = [d](const RealVector& x, double tol) {
    return DensityMatrix::check(HermitianOperator(from_hermitian_coords(x, d)),
                                Tolerances{.psd = tol, .trace = std::max(tol, 1e-10)})
        .ok;
  };
  return m;
}

InvariantReport check_morphism(const Morphism& phi, const ConvexModel& source, const ConvexModel& target) {
  InvariantReport r;
  for (const auto& a : source.catalogue) {
    const RealVector y = phi(a);
    const double uy = target.u(y);
    r.deviation = std::max(r.deviation, uy - 1.0 - 1e-10 > 0 ? uy - 1.0 : 0.0);
    if (uy > 1e-12) {
      if (!target.is_state(y / uy, 1e-9)) r.deviation = std::max(r.deviation, 1.0);
    } else {
      r.deviation = std::max(r.deviation, y.norm());
    }
  }
  r.ok = r.deviation <= 1e-9;
  return r;
}

TripleCompound build_compound(const std::string& kind, const BipartiteDims& dims) {
  TripleCompound t;
  t.kind = kind;
  const int d1 = dims.d1, d2 = dims.d2;
  if (kind == "classical") {
    t.component1 = classical_model(d1);
    t.component2 = classical_model(d2);
    t.composite = classical_model(d1, d2);
    t.phi1 = linear_morphism(d1 * d2, [=](const RealVector& x) {
      RealVector m = RealVector::Zero(d1);
      for (int i = 0; i < d1; ++i) m(i) = x.segment(i * d2, d2).sum();
      return m;
    }, "marginal_1");
    t.phi2 = linear_morphism(d1 * d2, [=](const RealVector& x) {
      RealVector m = RealVector::Zero(d2);
      for (int i = 0; i < d1; ++i) m += x.segment(i * d2, d2);
      return m;
    }, "marginal_2");
    t.psi = outer_products;
  } else if (kind == "quantum") {
    t.component1 = quantum_model(d1);
    t.component2 = quantum_model(d2);
    t.composite = quantum_model(d1 * d2);
    t.composite.dims = {d1, d2};
    // products of catalogue states and a maximally entangled state
    const auto c1 = pure_catalogue(d1), c2 = pure_catalogue(d2);
    t.composite.catalogue.clear();
    for (const auto& a : c1)
      for (const auto& b : c2) {
        const Vector x = kron(a, b);
        t.composite.catalogue.push_back(hermitian_coords(x * x.adjoint()));
      }
    Vector phi = Vector::Zero(d1 * d2);
    for (int k = 0; k < std::min(d1, d2); ++k) phi(k * d2 + k) = 1.0;
    phi.normalize();
    t.composite.catalogue.push_back(hermitian_coords(phi * phi.adjoint()));
    t.composite.catalogue.push_back(hermitian_coords(Matrix::Identity(d1 * d2, d1 * d2) / (d1 * d2)));
    const int n = d1 * d2;
    t.phi1 = linear_morphism(n * n, [=](const RealVector& x) {
      return hermitian_coords(partial_trace(from_hermitian_coords(x, n), Subsystem::first, dims));
    }, "partial_trace_2");
    t.phi2 = linear_morphism(n * n, [=](const RealVector& x) {
      return hermitian_coords(partial_trace(from_hermitian_coords(x, n), Subsystem::second, dims));
    }, "partial_trace_1");
    t.psi = [=](const Generators& a, const Generators& b) {
      Generators out;
      for (const auto& x : a)
        for (const auto& y : b)
          out.push_back(hermitian_coords(kron(from_hermitian_coords(x, d1), from_hermitian_coords(y, d2))));
      return out;
    };
  } else {
    throw UnsupportedError("unsupported compound kind '" + kind + "' (expected classical or quantum)");
  }
  t.strict = true;
  return t;
}

TripleCompound non_strict_compound() {
  TripleCompound t;
  t.kind = "classical-triple";
  t.component1 = classical_model(2);
  t.component2 = classical_model(2);
  t.composite = simplex_model({2, 2, 2});
  t.phi1 = linear_morphism(8, [](const RealVector& x) {
    RealVector m = RealVector::Zero(2);
    for (int i = 0; i < 8; ++i) m(i / 4) += x(i);
    return m;
  }, "marginal_first");
  t.phi2 = linear_morphism(8, [](const RealVector& x) {
    RealVector m = RealVector::Zero(2);
    for (int i = 0; i < 8; ++i) m(i % 2) += x(i);
    return m;
  }, "marginal_last");
  // the hidden middle outcome is unconstrained
  t.psi = [](const Generators& a, const Generators& b) {
    Generators out;
    for (int j = 0; j < 2; ++j) {
      const Generators mid{unit_vector(2, j)};
      for (const auto& ab : outer_products(outer_products(a, mid), b)) out.push_back(ab);
    }
    return out;
  };
  t.strict = false;
  return t;
}

bool CompoundReport::ok(double tol) const {
  return surjectivity <= tol && compatibility <= tol && morphisms <= tol && strict_singletons;
}

CompoundReport check_compound(const TripleCompound& t, int trials, Rng& rng) {
  CompoundReport r;
  const Morphism* phis[2] = {&t.phi1, &t.phi2};
  const ConvexModel* comps[2] = {&t.component1, &t.component2};
  for (int s = 0; s < 2; ++s) {
    r.morphisms = std::max(r.morphisms, check_morphism(*phis[s], t.composite, *comps[s]).deviation);
    for (const auto& a : comps[s]->catalogue) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : t.composite.catalogue) best = std::min(best, ((*phis[s])(c) - a).norm());
      r.surjectivity = std::max(r.surjectivity, best);
    }
  }
  auto random_polytope = [&](const ConvexModel& m) {
    std::uniform_int_distribution<int> count(1, 3);
    Generators g;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
      const RealVector w = random_simplex(static_cast<int>(m.catalogue.size()), rng);
      RealVector x = RealVector::Zero(m.ambient);
      for (std::size_t j = 0; j < m.catalogue.size(); ++j) x += w(static_cast<Eigen::Index>(j)) * m.catalogue[j];
      g.push_back(x);
    }
    return g;
  };
  for (int trial = 0; trial < trials; ++trial) {
    const Generators c1 = random_polytope(t.component1);
    const Generators c2 = random_polytope(t.component2);
    for (const auto& g : t.psi(c1, c2)) {
      r.compatibility = std::max(r.compatibility, hull_distance(t.phi1(g), c1));
      r.compatibility = std::max(r.compatibility, hull_distance(t.phi2(g), c2));
    }
    if (t.strict && t.psi({c1.front()}, {c2.front()}).size() != 1) r.strict_singletons = false;
  }
  return r;
}

bool com_is_product(const RealVector& c, const TripleCompound& t, double tol) {
  if (!t.strict) throw UnsupportedError("product states are only defined for strictly two-component compounds");
  const Generators g = t.psi({t.phi1(c)}, {t.phi2(c)});
  return g.size() == 1 && (g.front() - c).norm() <= tol;
}

bool com_is_invariant(const Generators& c, const TripleCompound& t, double tol) {
  if (c.empty()) throw Error("invariance check needs a nonempty generator list");
  Generators a, b;
  for (const auto& x : c) {
    a.push_back(t.phi1(x));
    b.push_back(t.phi2(x));
  }
  return mutual_residual(t.psi(a, b), c) <= tol;
}

ComVerdict com_separable(const RealVector& c, const TripleCompound& t, const std::optional<SeparableDecomposition>& dec,
                         const Tolerances& tol) {
  if (!t.strict) throw UnsupportedError("separability is only defined for strictly two-component compounds");
  if (!t.composite.is_state(c, 1e-9)) throw InvariantError("not a state of the composite model", t.composite.u(c) - 1.0);
  ComVerdict out;
  if (t.composite.kind == ModelKind::classical) {
    const int d1 = t.composite.dims.at(0), d2 = t.composite.dims.at(1);
    Generators as, bs;
    RealVector rebuilt = RealVector::Zero(c.size());
    for (int i = 0; i < d1; ++i) {
      const double pa = c.segment(i * d2, d2).sum();
      if (pa <= 0.0) continue;
      const RealVector q = c.segment(i * d2, d2) / pa;
      as.push_back(unit_vector(d1, i));
      bs.push_back(q);
      rebuilt.segment(i * d2, d2) += pa * q;
    }
    out.method = "conditioning";
    out.invariant_subset = t.psi(as, bs);
    out.membership_residual = std::max(hull_distance(c, out.invariant_subset), (rebuilt - c).norm());
    const bool inv = com_is_invariant(out.invariant_subset, t, tol.membership);
    out.verdict = inv && out.membership_residual <= tol.membership ? Verdict::separable : Verdict::inconclusive;
    out.note = std::to_string(as.size()) + "-term product mixture from conditioning on the first outcome";
    return out;
  }
  if (t.composite.kind == ModelKind::quantum) {
    const BipartiteDims dims{t.composite.dims.at(0), t.composite.dims.at(1)};
    const DensityMatrix rho = coords_state(c, dims.total());
    const CriterionResult sc = spectral_criterion(rho, dims, tol);
    if (sc.verdict == Verdict::entangled) {
      out.verdict = Verdict::entangled;
      out.method = "spectral";
      out.note = "eigenvalue " + std::to_string(sc.value) + " exceeds sigma_1^2 = " + std::to_string(sc.bound);
      return out;
    }
    const PptResult pt = ppt_check(rho, dims, tol);
    if (!pt.ppt) {
      out.verdict = Verdict::entangled;
      out.method = "ppt";
      out.note = "partial transpose has eigenvalue " + std::to_string(pt.min_eigenvalue);
      return out;
    }
    const CssVerdict cv = separable_via_css(rho, dec, dims, {}, tol);
    out.method = "css";
    out.note = cv.note;
    if (cv.verdict == Verdict::separable) {
      out.verdict = Verdict::separable;
      for (const auto& g : cv.css->generators()) out.invariant_subset.push_back(state_coords(g));
      out.membership_residual = cv.membership_residual;
    }
    return out;
  }
  throw UnsupportedError("com_separable supports classical and quantum compounds");
}

}  // namespace qlat
