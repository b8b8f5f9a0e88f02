#include "qlat/convex_set.hpp"

#include <algorithm>
#include <cmath>

#include "qlat/error.hpp"
#include "qlat/hull.hpp"

namespace qlat {

// ----------------------------------------------------------------- polytope

StatePolytope::StatePolytope(std::vector<DensityMatrix> generators, std::optional<BipartiteDims> dims)
    : generators_(std::move(generators)), dims_(dims) {
  if (generators_.empty()) throw DimensionError("polytope needs at least one generator");
  const int d = generators_.front().dim();
  for (const auto& g : generators_) {
    if (g.dim() != d) throw DimensionError("polytope generators differ in dimension");
  }
  if (dims_ && dims_->total() != d) throw DimensionError("polytope split does not match generator dimension");
  coords_.resize(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(generators_.size()));
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    coords_.col(static_cast<Eigen::Index>(i)) = hermitian_coords(generators_[i].matrix());
  }
}

StatePolytope StatePolytope::deduplicated(double tol) const {
  std::vector<DensityMatrix> kept;
  std::vector<Eigen::Index> kept_cols;
  for (Eigen::Index j = 0; j < coords_.cols(); ++j) {
    bool dup = false;
    for (auto k : kept_cols) {
      if ((coords_.col(j) - coords_.col(k)).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      kept_cols.push_back(j);
      kept.push_back(generators_[static_cast<std::size_t>(j)]);
    }
  }
  return StatePolytope(std::move(kept), dims_);
}

MembershipCertificate member(const StatePolytope& c, const DensityMatrix& rho, const Tolerances& tol) {
  if (c.dim() != rho.dim()) throw DimensionError("member: dimension mismatch");
  const HullProjection hp = project_onto_hull(c.coords(), hermitian_coords(rho.matrix()));
  if (!hp.converged) throw NumericalError("hull projection did not converge", hp.distance);
  MembershipCertificate cert;
  cert.residual = hp.distance;
  cert.weights = hp.weights;
  cert.iterations = hp.iterations;
  cert.member = hp.distance <= tol.membership;
  if (!cert.member) {
    cert.separating = HermitianOperator(from_hermitian_coords(hp.normal, c.dim()));
    cert.offset = hp.normal.dot(hp.nearest);
  }
  return cert;
}

StatePolytope join(const StatePolytope& c1, const StatePolytope& c2) {
  if (c1.dim() != c2.dim()) throw DimensionError("join: dimension mismatch");
  std::vector<DensityMatrix> g = c1.generators();
  g.insert(g.end(), c2.generators().begin(), c2.generators().end());
  return StatePolytope(std::move(g), c1.dims() ? c1.dims() : c2.dims());
}

// ------------------------------------------------------------ implicit sets

struct ImplicitConvexSet::Node {
  enum class Kind { polytope, slice, full, empty, meet, join };
  Kind kind = Kind::empty;
  int dim = 1;
  std::optional<StatePolytope> polytope;
  std::optional<LatticeElement> element;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  std::string provenance;
  std::vector<std::string> notes;
};

using Node = ImplicitConvexSet::Node;
using Kind = Node::Kind;

namespace {

std::shared_ptr<Node> make_node(Kind k, int dim, std::string prov) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->dim = dim;
  n->provenance = std::move(prov);
  return n;
}

// Lifted cone description: value = V z, constraints C z = 0, z >= 0.
struct Lifted {
  RealMatrix value;
  RealMatrix constraints;
};

Lifted stack_meet(const Lifted& a, const Lifted& b) {
  const Eigen::Index n = a.value.rows();
  const Eigen::Index za = a.value.cols();
  const Eigen::Index zb = b.value.cols();
  Lifted out;
  out.value = RealMatrix::Zero(n, za + zb);
  out.value.leftCols(za) = a.value;
  out.constraints = RealMatrix::Zero(a.constraints.rows() + b.constraints.rows() + n, za + zb);
  out.constraints.block(0, 0, a.constraints.rows(), za) = a.constraints;
  out.constraints.block(a.constraints.rows(), za, b.constraints.rows(), zb) = b.constraints;
  const Eigen::Index r = a.constraints.rows() + b.constraints.rows();
  out.constraints.block(r, 0, n, za) = a.value;
  out.constraints.block(r, za, n, zb) = -b.value;
  return out;
}

Lifted stack_join(const Lifted& a, const Lifted& b) {
  const Eigen::Index n = a.value.rows();
  const Eigen::Index za = a.value.cols();
  const Eigen::Index zb = b.value.cols();
  Lifted out;
  out.value.resize(n, za + zb);
  out.value << a.value, b.value;
  out.constraints = RealMatrix::Zero(a.constraints.rows() + b.constraints.rows(), za + zb);
  out.constraints.block(0, 0, a.constraints.rows(), za) = a.constraints;
  out.constraints.block(a.constraints.rows(), za, b.constraints.rows(), zb) = b.constraints;
  return out;
}

Lifted restrict_to_slice(const Lifted& a, const LatticeElement& slice) {
  const Eigen::Index n = a.value.rows();
  const RealMatrix comp = orthogonal_complement(slice.subspace().coords(), n);
  Lifted out = a;
  out.constraints.resize(a.constraints.rows() + comp.cols(), a.value.cols());
  out.constraints << a.constraints, comp.transpose() * a.value;
  return out;
}

std::optional<Lifted> compile(const Node& n) {
  switch (n.kind) {
    case Kind::polytope:
      return Lifted{n.polytope->coords(), RealMatrix(0, n.polytope->coords().cols())};
    case Kind::meet: {
      if (n.lhs->kind == Kind::slice) {
        const auto r = compile(*n.rhs);
        if (!r) return std::nullopt;
        return restrict_to_slice(*r, *n.lhs->element);
      }
      if (n.rhs->kind == Kind::slice) {
        const auto l = compile(*n.lhs);
        if (!l) return std::nullopt;
        return restrict_to_slice(*l, *n.rhs->element);
      }
      const auto l = compile(*n.lhs);
      const auto r = compile(*n.rhs);
      if (!l || !r) return std::nullopt;
      return stack_meet(*l, *r);
    }
    case Kind::join: {
      const auto l = compile(*n.lhs);
      const auto r = compile(*n.rhs);
      if (!l || !r) return std::nullopt;
      return stack_join(*l, *r);
    }
    default:
      return std::nullopt;
  }
}

Lifted compile_or_throw(const Node& n) {
  auto l = compile(n);
  if (!l) throw UnsupportedError("operation needs a polyhedral expression; '" + n.provenance + "' mixes subspace slices into a join");
  return *l;
}

DensityMatrix to_state(const RealVector& coords, int dim) {
  Matrix m = from_hermitian_coords(coords, dim);
  m /= m.trace().real();
  return DensityMatrix(HermitianOperator(m), Tolerances{.psd = 1e-8, .trace = 1e-8});
}

// Feasible point of the lifted system restricted to `columns` (others 0).
std::optional<RealVector> lifted_member(const Lifted& l, int dim, const std::vector<bool>& columns, double tol) {
  const RealVector tau = hermitian_coords(Matrix::Identity(dim, dim));
  const Eigen::Index nz = l.value.cols();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < nz; ++j)
    if (columns[static_cast<std::size_t>(j)]) idx.push_back(j);
  if (idx.empty()) return std::nullopt;
  RealMatrix a(l.constraints.rows() + 1, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto j = idx[k];
    a.block(0, static_cast<Eigen::Index>(k), l.constraints.rows(), 1) = l.constraints.col(j);
    a(l.constraints.rows(), static_cast<Eigen::Index>(k)) = tau.dot(l.value.col(j));
  }
  RealVector b = RealVector::Zero(a.rows());
  b(a.rows() - 1) = 1.0;
  const NnlsResult r = nnls(a, b);
  if (r.residual_norm > tol) return std::nullopt;
  RealVector z = RealVector::Zero(nz);
  for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = r.x(static_cast<Eigen::Index>(k));
  return RealVector(l.value * z);
}

bool node_contains(const Node& n, const DensityMatrix& rho, const Tolerances& tol) {
  switch (n.kind) {
    case Kind::polytope:
      return member(*n.polytope, rho, tol).member;
    case Kind::slice:
      return n.element->contains(rho, tol);
    case Kind::full:
      return true;
    case Kind::empty:
      return false;
    case Kind::meet:
      return node_contains(*n.lhs, rho, tol) && node_contains(*n.rhs, rho, tol);
    case Kind::join: {
      const Lifted l = compile_or_throw(n);
      RealMatrix a(l.constraints.rows() + l.value.rows(), l.value.cols());
      a << l.constraints, l.value;
      RealVector b = RealVector::Zero(a.rows());
      b.tail(l.value.rows()) = hermitian_coords(rho.matrix());
      return nnls(a, b).residual_norm <= tol.membership;
    }
  }
  return false;
}

std::optional<DensityMatrix> node_find_member(const Node& n, const Tolerances& tol) {
  switch (n.kind) {
    case Kind::polytope:
      return n.polytope->generators().front();
    case Kind::slice:
      return n.element->interior_point();
    case Kind::full:
      return DensityMatrix::maximally_mixed(n.dim);
    case Kind::empty:
      return std::nullopt;
    default: {
      const Lifted l = compile_or_throw(n);
      const std::vector<bool> all(static_cast<std::size_t>(l.value.cols()), true);
      const auto v = lifted_member(l, n.dim, all, tol.membership);
      if (!v) return std::nullopt;
      return to_state(*v, n.dim);
    }
  }
}

}  // namespace

ImplicitConvexSet ImplicitConvexSet::from(const StatePolytope& p, std::string label) {
  if (label.empty()) label = "conv[" + std::to_string(p.size()) + " generators]";
  auto n = make_node(Kind::polytope, p.dim(), std::move(label));
  n->polytope = p;
  return ImplicitConvexSet(n);
}

ImplicitConvexSet ImplicitConvexSet::slice(const LatticeElement& l, std::string label) {
  if (label.empty()) label = "slice[rank " + std::to_string(l.subspace().rank()) + "]";
  if (l.is_empty()) return ImplicitConvexSet(make_node(Kind::empty, l.dim(), label + " = 0"));
  auto n = make_node(Kind::slice, l.dim(), std::move(label));
  n->element = l;
  return ImplicitConvexSet(n);
}

ImplicitConvexSet ImplicitConvexSet::full(int dim) { return ImplicitConvexSet(make_node(Kind::full, dim, "1")); }
ImplicitConvexSet ImplicitConvexSet::empty(int dim) { return ImplicitConvexSet(make_node(Kind::empty, dim, "0")); }

int ImplicitConvexSet::dim() const { return node_->dim; }
const std::string& ImplicitConvexSet::provenance() const { return node_->provenance; }
const std::vector<std::string>& ImplicitConvexSet::notes() const { return node_->notes; }

ImplicitConvexSet ImplicitConvexSet::with_note(std::string note) const {
  auto n = std::make_shared<Node>(*node_);
  n->notes.push_back(std::move(note));
  return ImplicitConvexSet(n);
}

bool ImplicitConvexSet::contains(const DensityMatrix& rho, const Tolerances& tol) const {
  if (rho.dim() != dim()) throw DimensionError("membership: dimension mismatch");
  return node_contains(*node_, rho, tol);
}

std::optional<DensityMatrix> ImplicitConvexSet::find_member(const Tolerances& tol) const {
  return node_find_member(*node_, tol);
}

std::vector<DensityMatrix> ImplicitConvexSet::sample(int count, Rng& rng, const Tolerances& tol) const {
  std::vector<DensityMatrix> out;
  if (count <= 0) return out;
  const int d = dim();
  switch (node_->kind) {
    case Kind::empty:
      return out;
    case Kind::slice:
      return node_->element->sample(count, rng);
    case Kind::full: {
      std::uniform_int_distribution<int> rank(1, d);
      for (int i = 0; i < count; ++i) out.push_back(random_density(d, rank(rng), rng()));
      return out;
    }
    case Kind::polytope: {
      const auto& g = node_->polytope->generators();
      for (int i = 0; i < count; ++i) {
        const RealVector w = random_simplex(static_cast<int>(g.size()), rng);
        out.push_back(mix(g, std::span<const double>(w.data(), static_cast<std::size_t>(w.size())), Tolerances{.simplex = 1e-10}));
      }
      return out;
    }
    default:
      break;
  }
  // lifted expressions: collect base members from random column subsets,
  // then mix them
  const Lifted l = compile_or_throw(*node_);
  const auto nz = static_cast<std::size_t>(l.value.cols());
  std::vector<RealVector> base;
  std::vector<bool> cols(nz, true);
  if (auto v = lifted_member(l, d, cols, tol.membership)) base.push_back(*v);
  if (base.empty()) return out;
  std::bernoulli_distribution keep(0.6);
  for (int attempt = 0; attempt < 40 && base.size() < 8; ++attempt) {
    for (std::size_t j = 0; j < nz; ++j) cols[j] = keep(rng);
    if (auto v = lifted_member(l, d, cols, tol.membership)) base.push_back(*v);
  }
  for (int i = 0; i < count; ++i) {
    const RealVector w = random_simplex(static_cast<int>(base.size()), rng);
    RealVector x = RealVector::Zero(base.front().size());
    for (std::size_t k = 0; k < base.size(); ++k) x += w(static_cast<Eigen::Index>(k)) * base[k];
    out.push_back(to_state(x, d));
  }
  return out;
}

std::optional<LatticeElement> ImplicitConvexSet::as_slice() const {
  switch (node_->kind) {
    case Kind::slice:
      return node_->element;
    case Kind::full:
      return LatticeElement::full(node_->dim);
    case Kind::empty:
      return LatticeElement::empty(node_->dim);
    default:
      return std::nullopt;
  }
}

std::optional<StatePolytope> ImplicitConvexSet::as_polytope() const {
  if (node_->kind == Kind::polytope) return node_->polytope;
  return std::nullopt;
}

ImplicitConvexSet meet(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2, const Tolerances& tol) {
  if (c1.dim() != c2.dim()) throw DimensionError("meet: dimension mismatch");
  const std::string prov = "(" + c1.provenance() + " ^ " + c2.provenance() + ")";
  const auto& a = *c1.node();
  const auto& b = *c2.node();
  if (a.kind == Kind::empty || b.kind == Kind::empty) {
    return ImplicitConvexSet(make_node(Kind::empty, c1.dim(), prov));
  }
  if (a.kind == Kind::full) return c2;
  if (b.kind == Kind::full) return c1;
  if (a.kind == Kind::slice && b.kind == Kind::slice) {
    return ImplicitConvexSet::slice(lattice_meet(*a.element, *b.element, tol), prov);
  }
  auto n = make_node(Kind::meet, c1.dim(), prov);
  n->lhs = c1.node();
  n->rhs = c2.node();
  return ImplicitConvexSet(n);
}

ImplicitConvexSet meet(const StatePolytope& c1, const StatePolytope& c2, const Tolerances& tol) {
  return meet(ImplicitConvexSet::from(c1), ImplicitConvexSet::from(c2), tol);
}

ImplicitConvexSet join(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2) {
  if (c1.dim() != c2.dim()) throw DimensionError("join: dimension mismatch");
  const auto& a = *c1.node();
  const auto& b = *c2.node();
  if (a.kind == Kind::empty) return c2;
  if (b.kind == Kind::empty) return c1;
  const std::string prov = "(" + c1.provenance() + " v " + c2.provenance() + ")";
  if (a.kind == Kind::full || b.kind == Kind::full) return ImplicitConvexSet(make_node(Kind::full, c1.dim(), prov));
  if (a.kind == Kind::polytope && b.kind == Kind::polytope) {
    auto n = make_node(Kind::polytope, c1.dim(), prov);
    n->polytope = join(*a.polytope, *b.polytope);
    return ImplicitConvexSet(n);
  }
  auto n = make_node(Kind::join, c1.dim(), prov);
  n->lhs = c1.node();
  n->rhs = c2.node();
  return ImplicitConvexSet(n);
}

ImplicitConvexSet neg(const StatePolytope& c, const Tolerances& tol) {
  const std::vector<HermitianOperator> ops = [&] {
    std::vector<HermitianOperator> v;
    for (const auto& g : c.generators()) v.push_back(g.op());
    return v;
  }();
  const LatticeElement orth = good_representative(subspace_orth(span_subspace(ops)), tol);
  return ImplicitConvexSet::slice(orth, "~conv[" + std::to_string(c.size()) + " generators]");
}

ImplicitConvexSet neg(const ImplicitConvexSet& c, const Tolerances& tol) {
  const auto& n = *c.node();
  const std::string prov = "~" + c.provenance();
  switch (n.kind) {
    case Kind::polytope:
      return ImplicitConvexSet::slice(*neg(*n.polytope, tol).as_slice(), prov);
    case Kind::slice:
      return ImplicitConvexSet::slice(lattice_neg(*n.element, tol), prov);
    case Kind::full:
      return ImplicitConvexSet(make_node(Kind::empty, n.dim, prov));
    case Kind::empty:
      return ImplicitConvexSet(make_node(Kind::full, n.dim, prov));
    default:
      throw UnsupportedError("negation needs a polytope, slice, full or empty set; got '" + c.provenance() + "'");
  }
}

bool leq(const StatePolytope& c1, const StatePolytope& c2, const Tolerances& tol) {
  if (c1.dim() != c2.dim()) throw DimensionError("leq: dimension mismatch");
  for (const auto& g : c1.generators()) {
    if (!member(c2, g, tol).member) return false;
  }
  return true;
}

bool leq(const StatePolytope& c1, const ImplicitConvexSet& c2, const Tolerances& tol) {
  if (c1.dim() != c2.dim()) throw DimensionError("leq: dimension mismatch");
  for (const auto& g : c1.generators()) {
    if (!c2.contains(g, tol)) return false;
  }
  return true;
}

bool leq(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2, Rng& rng, int samples, const Tolerances& tol) {
  if (c1.dim() != c2.dim()) throw DimensionError("leq: dimension mismatch");
  if (auto p = c1.as_polytope()) return leq(*p, c2, tol);
  for (const auto& s : c1.sample(samples, rng, tol)) {
    if (!c2.contains(s, tol)) return false;
  }
  return true;
}

bool set_equal(const StatePolytope& a, const StatePolytope& b, const Tolerances& tol) {
  return leq(a, b, tol) && leq(b, a, tol);
}

double mutual_membership_residual(const StatePolytope& a, const StatePolytope& b) {
  double worst = 0.0;
  for (const auto& g : a.generators()) worst = std::max(worst, member(b, g).residual);
  for (const auto& g : b.generators()) worst = std::max(worst, member(a, g).residual);
  return worst;
}

bool set_equal(const ImplicitConvexSet& a, const ImplicitConvexSet& b, Rng& rng, int samples, const Tolerances& tol) {
  if (a.dim() != b.dim()) throw DimensionError("set_equal: dimension mismatch");
  const bool ea = a.is_empty(tol);
  const bool eb = b.is_empty(tol);
  if (ea || eb) return ea == eb;
  auto pool = a.sample(samples / 2, rng, tol);
  auto more = b.sample(samples - samples / 2, rng, tol);
  pool.insert(pool.end(), more.begin(), more.end());
  for (const auto& s : pool) {
    if (a.contains(s, tol) != b.contains(s, tol)) return false;
  }
  return true;
}

std::vector<LawCheck> lattice_law_suite(const ImplicitConvexSet& c1, const ImplicitConvexSet& c2,
                                        const ImplicitConvexSet& c3, Rng& rng, int samples, const Tolerances& tol) {
  auto eq = [&](const ImplicitConvexSet& a, const ImplicitConvexSet& b) { return set_equal(a, b, rng, samples, tol); };
  std::vector<LawCheck> out;
  out.push_back({"a: C1 ^ C1 = C1", eq(meet(c1, c1, tol), c1)});
  out.push_back({"b: C1 ^ C2 = C2 ^ C1", eq(meet(c1, c2, tol), meet(c2, c1, tol))});
  out.push_back({"c: C1 v C2 = C2 v C1", eq(join(c1, c2), join(c2, c1))});
  out.push_back({"d: C1 ^ (C2 ^ C3) = (C1 ^ C2) ^ C3", eq(meet(c1, meet(c2, c3, tol), tol), meet(meet(c1, c2, tol), c3, tol))});
  out.push_back({"e: C1 v (C2 v C3) = (C1 v C2) v C3", eq(join(c1, join(c2, c3)), join(join(c1, c2), c3))});
  out.push_back({"f: C1 ^ (C1 v C2) = C1", eq(meet(c1, join(c1, c2), tol), c1)});
  out.push_back({"g: C1 v (C1 ^ C2) = C1", eq(join(c1, meet(c1, c2, tol)), c1)});
  LawCheck contra{"contraposition: C1 <= C2 implies ~C2 <= ~C1"};
  if (leq(c1, c2, rng, samples, tol)) {
    contra.holds = leq(neg(c2, tol), neg(c1, tol), rng, samples, tol);
  } else {
    contra.holds = true;
    contra.vacuous = true;
  }
  out.push_back(contra);
  out.push_back({"non-contradiction: C1 ^ ~C1 = 0", meet(c1, neg(c1, tol), tol).is_empty(tol)});
  return out;
}

}  // namespace qlat
