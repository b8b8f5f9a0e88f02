#include "qlat/io.hpp"

#include <cstdio>

#include "qlat/error.hpp"

namespace qlat {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int get_int(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw InputError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double get_number(const Json& v, const char* what) {
  if (!v.is_number()) throw InputError(std::string(what) + " must be a number");
  return v.get<double>();
}

BipartiteDims dims_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw InputError("'dims' must be [d1, d2]");
  }
  const int a = j[0].get<int>(), b = j[1].get<int>();
  if (a < 1 || b < 1) throw InputError("'dims' entries must be positive");
  return {a, b};
}

template <class F>
auto wrap(F&& f) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw InputError("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = Complex(get_number(e[0], "real part"), get_number(e[1], "imaginary part"));
      } else {
        throw InputError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

Json to_json(const HermitianOperator& h) { return {{"dim", h.dim()}, {"matrix", matrix_to_json(h.matrix())}}; }

HermitianOperator hermitian_from_json(const Json& j, const Tolerances& tol) {
  return wrap([&] {
    const Json& mj = j.is_array() ? j : field(j, "matrix");
    const Matrix m = matrix_from_json(mj);
    if (j.is_object() && j.contains("dim") && get_int(j, "dim") != m.rows()) throw InputError("'dim' does not match the matrix");
    return HermitianOperator(m, tol);
  });
}

Json to_json(const DensityMatrix& rho, const std::optional<BipartiteDims>& dims) {
  Json j = to_json(rho.op());
  if (dims) j["dims"] = {dims->d1, dims->d2};
  return j;
}

DensityMatrix density_from_json(const Json& j, std::optional<BipartiteDims>* dims, const Tolerances& tol) {
  return wrap([&] {
    const HermitianOperator h = hermitian_from_json(j, tol);
    std::optional<BipartiteDims> d;
    if (j.is_object() && j.contains("dims")) {
      d = dims_from_json(j.at("dims"));
      if (d->total() != h.dim()) throw InputError("'dims' do not multiply to the matrix size");
    }
    if (dims) *dims = d;
    return DensityMatrix(h, tol);
  });
}

Json to_json(const StatePolytope& p) {
  Json j;
  if (p.dims()) j["dims"] = {p.dims()->d1, p.dims()->d2};
  j["generators"] = Json::array();
  for (const auto& g : p.generators()) j["generators"].push_back(to_json(g));
  return j;
}

StatePolytope polytope_from_json(const Json& j, const Tolerances& tol) {
  return wrap([&] {
    const Json& gens = field(j, "generators");
    if (!gens.is_array() || gens.empty()) throw InputError("'generators' must be a nonempty array");
    std::vector<DensityMatrix> g;
    for (const auto& x : gens) g.push_back(density_from_json(x, nullptr, tol));
    std::optional<BipartiteDims> d;
    if (j.contains("dims")) d = dims_from_json(j.at("dims"));
    return StatePolytope(std::move(g), d);
  });
}

Json to_json(const HermitianSubspace& s) {
  Json j{{"dim", s.dim()}, {"basis", Json::array()}};
  for (const auto& b : s.basis()) j["basis"].push_back(matrix_to_json(b.matrix()));
  return j;
}

HermitianSubspace subspace_from_json(const Json& j, const Tolerances& tol) {
  return wrap([&] {
    const int d = get_int(j, "dim");
    if (d < 1) throw InputError("'dim' must be positive");
    const Json& basis = field(j, "basis");
    if (!basis.is_array()) throw InputError("'basis' must be an array");
    std::vector<HermitianOperator> ops;
    for (const auto& b : basis) {
      ops.push_back(hermitian_from_json(b, tol));
      if (ops.back().dim() != d) throw InputError("basis element has the wrong dimension");
    }
    if (ops.empty()) return HermitianSubspace(d);
    return span_subspace(ops, tol.rank);
  });
}

Json to_json(const SeparableDecomposition& d) {
  Json j{{"weights", d.weights}, {"factorsA", Json::array()}, {"factorsB", Json::array()}, {"pairs", Json::array()}};
  for (const auto& a : d.factors_a) j["factorsA"].push_back(to_json(a));
  for (const auto& b : d.factors_b) j["factorsB"].push_back(to_json(b));
  for (const auto& [k, l] : d.pairs) j["pairs"].push_back({k, l});
  return j;
}

SeparableDecomposition decomposition_from_json(const Json& j, const Tolerances& tol) {
  return wrap([&] {
    SeparableDecomposition d;
    for (const auto& w : field(j, "weights")) d.weights.push_back(get_number(w, "weight"));
    for (const auto& a : field(j, "factorsA")) d.factors_a.push_back(density_from_json(a, nullptr, tol));
    for (const auto& b : field(j, "factorsB")) d.factors_b.push_back(density_from_json(b, nullptr, tol));
    if (j.contains("pairs")) {
      for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw InputError("'pairs' entries must be [k, l]");
        d.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
      }
    } else {
      for (int k = 0; k < static_cast<int>(d.weights.size()); ++k) d.pairs.emplace_back(k, k);
    }
    d.validate(tol);
    return d;
  });
}

Json constraints_to_json(const std::vector<MeanValueConstraint>& c) {
  Json j{{"observables", Json::array()}, {"targets", Json::array()}};
  for (const auto& x : c) {
    j["observables"].push_back(to_json(x.observable));
    j["targets"].push_back(x.target);
  }
  return j;
}

std::vector<MeanValueConstraint> constraints_from_json(const Json& j, const Tolerances& tol) {
  return wrap([&] {
    const Json& obs = field(j, "observables");
    const Json& tg = field(j, "targets");
    if (!obs.is_array() || !tg.is_array() || obs.size() != tg.size()) {
      throw InputError("'observables' and 'targets' must be arrays of equal length");
    }
    std::vector<MeanValueConstraint> out;
    for (std::size_t i = 0; i < obs.size(); ++i) out.push_back({hermitian_from_json(obs[i], tol), get_number(tg[i], "target")});
    return out;
  });
}

Json to_json(const MaxEntSolution& s) {
  return {{"rho", to_json(s.rho)},         {"multipliers", s.multipliers}, {"lambda0", s.lambda0},
          {"logZ", s.log_z},               {"residuals", s.residuals},     {"entropy", s.entropy},
          {"iterations", s.iterations},    {"gradient_steps", s.gradient_steps},
          {"reconstruction_error", s.reconstruction_error}};
}

Json to_json(const Witness& w) {
  return {{"operator", to_json(w.op)}, {"m", w.m},         {"M", w.M},
          {"value", w.value},          {"violation", w.violation}, {"source", w.source},
          {"shifted", to_json(w.shifted_upper())}};
}

Json to_json(const ProductOptimum& p) {
  return {{"v", matrix_to_json(p.v.amplitudes())}, {"w", matrix_to_json(p.w.amplitudes())},
          {"value", p.value}, {"mode", p.mode == ExtremumMode::max ? "max" : "min"},
          {"restarts", p.restarts_used}, {"iterations", p.iterations}, {"converged", p.converged},
          {"caveat", ProductOptimum::caveat}};
}

Json to_json(const ConvexModel& m) {
  Json j{{"kind", to_string(m.kind)}, {"dims", m.dims}, {"catalogue", Json::array()}};
  for (const auto& a : m.catalogue) j["catalogue"].push_back(std::vector<double>(a.data(), a.data() + a.size()));
  return j;
}

Json certificate(const std::string& method, Verdict v, std::uint64_t seed, int iterations,
                 const std::optional<Witness>& w) {
  Json j{{"verdict", to_string(v)}, {"method", method}, {"seed", seed}, {"iterations", iterations}};
  if (w) {
    j["witness"] = to_json(*w);
    j["violation"] = w->violation;
  } else {
    j["witness"] = nullptr;
    j["violation"] = nullptr;
  }
  return j;
}

Json to_json(const Tolerances& t) {
  return {{"hermitian", t.hermitian},   {"psd", t.psd},
          {"trace", t.trace},           {"vector_norm", t.vector_norm},
          {"projector", t.projector},   {"effect", t.effect},
          {"povm", t.povm},             {"simplex", t.simplex},
          {"spectral", t.spectral},     {"degenerate_gap", t.degenerate_gap},
          {"subspace", t.subspace},     {"rank", t.rank},
          {"membership", t.membership}, {"criterion", t.criterion},
          {"ppt", t.ppt},               {"face", t.face},
          {"interior", t.interior},     {"empty", t.empty},
          {"maxent_residual", t.maxent_residual}, {"maxent_boundary", t.maxent_boundary}};
}

Tolerances tolerances_from_json(const Json& j, Tolerances base) {
  const Json ref = to_json(base);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ref.contains(it.key())) throw InputError("unknown tolerance '" + it.key() + "'");
  }
  auto get = [&](const char* k, double& v) {
    if (j.contains(k)) v = get_number(j.at(k), k);
  };
  get("hermitian", base.hermitian);
  get("psd", base.psd);
  get("trace", base.trace);
  get("vector_norm", base.vector_norm);
  get("projector", base.projector);
  get("effect", base.effect);
  get("povm", base.povm);
  get("simplex", base.simplex);
  get("spectral", base.spectral);
  get("degenerate_gap", base.degenerate_gap);
  get("subspace", base.subspace);
  get("rank", base.rank);
  get("membership", base.membership);
  get("criterion", base.criterion);
  get("ppt", base.ppt);
  get("face", base.face);
  get("interior", base.interior);
  get("empty", base.empty);
  get("maxent_residual", base.maxent_residual);
  get("maxent_boundary", base.maxent_boundary);
  return base;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qlat
