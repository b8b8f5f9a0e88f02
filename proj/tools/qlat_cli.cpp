// qlat command-line front end.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "qlat/analysis.hpp"

using namespace qlat;

namespace {

enum Exit { ok = 0, input_error = 2, numerical_failure = 3, infeasible = 4 };

struct Common {
  double tol = -1.0;
  std::string tolerances_file;
  std::uint64_t seed = 0;
  int restarts = 20;
  int max_iters = 2000;
  std::string output = "json";
  std::string methods;
  bool no_timings = false;

  Tolerances tolerances() const {
    Tolerances t;
    if (!tolerances_file.empty()) t = tolerances_from_json(read_json(tolerances_file), t);
    if (tol > 0.0) {
      t.criterion = tol;
      t.membership = tol;
      t.maxent_residual = tol;
    }
    return t;
  }

  static Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
      return Json::parse(in);
    } catch (const Json::exception& e) {
      throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
  }
};

void add_common(CLI::App* sub, Common& c, bool analysis_flags) {
  sub->add_option("--tol", c.tol, "Override the criterion, membership and solver tolerances");
  sub->add_option("--tolerances", c.tolerances_file, "JSON file with per-field tolerance overrides");
  sub->add_option("--seed", c.seed, "Seed for all randomized steps");
  sub->add_option("--output", c.output, "Output format")->check(CLI::IsMember({"json", "text"}));
  if (analysis_flags) {
    sub->add_option("--restarts", c.restarts, "Restarts of the product-state optimizer")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", c.max_iters, "Iteration budget")->check(CLI::PositiveNumber);
    sub->add_option("--methods", c.methods, "Comma-separated subset of methods");
    sub->add_flag("--no-timings", c.no_timings, "Omit timing fields from the report");
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

BipartiteDims parse_dims(const std::string& s) {
  const auto parts = split_csv(s);
  if (parts.size() != 2) throw InputError("--dims expects d1,d2");
  try {
    return {std::stoi(parts[0]), std::stoi(parts[1])};
  } catch (const std::exception&) {
    throw InputError("--dims expects two integers");
  }
}

void emit(const Json& j, const std::string& text, const Common& c) {
  if (c.output == "text") {
    std::cout << text;
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

// ---------------------------------------------------------- subcommands

int cmd_check(const std::string& file, const std::string& dims_arg, const std::string& dec_file, int samples,
              const Common& c) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open '" + file + "'");
  std::stringstream raw;
  raw << in.rdbuf();
  Json j;
  try {
    j = Json::parse(raw.str());
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  const Tolerances tol = c.tolerances();
  std::optional<BipartiteDims> dims;
  const DensityMatrix rho = density_from_json(j, &dims, tol);
  if (!dims_arg.empty()) {
    const BipartiteDims given = parse_dims(dims_arg);
    if (dims && *dims != given) throw InputError("--dims disagrees with the dims in the state file");
    dims = given;
  }
  if (!dims) throw InputError("bipartite split unknown: pass --dims or include \"dims\" in the state file");
  if (dims->total() != rho.dim()) throw InputError("dims do not multiply to the state dimension");

  AnalysisOptions opt;
  if (!c.methods.empty()) opt.methods = split_csv(c.methods);
  for (const auto& m : opt.methods) {
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end()) {
      throw InputError("unknown method '" + m + "'");
    }
  }
  opt.seed = c.seed;
  opt.restarts = c.restarts;
  opt.max_iterations = c.max_iters;
  opt.samples = samples;
  opt.tol = tol;
  if (!dec_file.empty()) {
    opt.decomposition = decomposition_from_json(Common::read_json(dec_file), tol);
  } else if (j.contains("decomposition")) {
    opt.decomposition = decomposition_from_json(j.at("decomposition"), tol);
  }
  const AnalysisReport rep = check_separability(rho, *dims, opt, fnv1a_hex(raw.str()));

  std::ostringstream text;
  text << "verdict: " << to_string(rep.verdict) << "\n";
  for (const auto& r : rep.results) text << "  " << r.method << ": " << to_string(r.verdict) << "\n";
  if (rep.verdict == Verdict::inconclusive) text << "no method certified either answer\n";
  emit(rep.to_json(!c.no_timings), text.str(), c);
  return ok;
}

int cmd_maxent(const std::string& file, int dim_arg, const Common& c) {
  const Json j = Common::read_json(file);
  const Tolerances tol = c.tolerances();
  const auto cons = constraints_from_json(j, tol);
  int dim = dim_arg;
  if (dim <= 0 && j.contains("dim")) dim = j.at("dim").get<int>();
  if (dim <= 0 && !cons.empty()) dim = cons.front().observable.dim();
  if (dim <= 0) throw InputError("dimension unknown: pass --dim or include \"dim\"");
  MaxEntOptions mo;
  mo.tol = tol.maxent_residual;
  mo.max_iterations = c.max_iters;
  try {
    const MaxEntSolution s = solve_maxent(cons, dim, mo, tol);
    std::ostringstream text;
    text << "entropy: " << s.entropy << "\nlogZ: " << s.log_z << "\nmultipliers:";
    for (double l : s.multipliers) text << " " << l;
    text << "\n";
    emit(to_json(s), text.str(), c);
    return ok;
  } catch (const InfeasibleError& e) {
    const Json err{{"error", "infeasible"}, {"kind", e.kind()}, {"message", e.what()}, {"evidence", e.evidence()}};
    emit(err, std::string("infeasible (") + e.kind() + "): " + e.what() + "\n", c);
    return infeasible;
  }
}

// Lattice expressions over named sets.
class LatticeEnv {
 public:
  LatticeEnv(const Json& doc, const Tolerances& tol) : tol_(tol) {
    dim_ = doc.contains("dim") ? doc.at("dim").get<int>() : 0;
    if (!doc.contains("sets") || !doc.at("sets").is_object()) throw InputError("missing object 'sets'");
    for (auto it = doc.at("sets").begin(); it != doc.at("sets").end(); ++it) define(it.key(), it.value());
  }

  ImplicitConvexSet eval(const Json& e) const {
    if (e.is_string()) {
      const auto it = sets_.find(e.get<std::string>());
      if (it == sets_.end()) throw InputError("undefined reference '" + e.get<std::string>() + "'");
      return it->second;
    }
    if (e.is_object() && e.size() == 1) {
      const auto& [op, arg] = *e.items().begin();
      if (op == "neg") return neg(eval(arg), tol_);
      if ((op == "meet" || op == "join") && arg.is_array() && arg.size() >= 2) {
        ImplicitConvexSet acc = eval(arg[0]);
        for (std::size_t k = 1; k < arg.size(); ++k) acc = op == "meet" ? meet(acc, eval(arg[k]), tol_) : join(acc, eval(arg[k]));
        return acc;
      }
    }
    throw InputError("malformed expression: " + e.dump());
  }

  const StatePolytope& polytope(const std::string& name) const {
    const auto it = polytopes_.find(name);
    if (it == polytopes_.end()) throw InputError("'" + name + "' is not a polytope");
    return it->second;
  }

  int dim() const { return dim_; }

 private:
  void define(const std::string& name, const Json& s) {
    if (!s.is_object() || s.size() != 1) throw InputError("set '" + name + "' must have exactly one kind");
    const auto& [kind, v] = *s.items().begin();
    std::optional<ImplicitConvexSet> set;
    if (kind == "polytope") {
      const StatePolytope p = polytope_from_json(v, tol_);
      polytopes_.emplace(name, p);
      set = ImplicitConvexSet::from(p, name);
    } else if (kind == "subspace") {
      set = ImplicitConvexSet::slice(good_representative(subspace_from_json(v, tol_), tol_), name);
    } else if (kind == "face") {
      set = ImplicitConvexSet::slice(
          face_to_lattice_element({hermitian_from_json(v.at("normal"), tol_), v.at("offset").get<double>()}, tol_), name);
    } else if (kind == "effect") {
      set = ImplicitConvexSet::slice(
          effect_level_set(Effect(hermitian_from_json(v.at("effect"), tol_), tol_), v.at("value").get<double>(), tol_),
          name);
    } else if (kind == "constraint") {
      set = ImplicitConvexSet::slice(
          constraint_set({hermitian_from_json(v.at("observable"), tol_), v.at("target").get<double>()}, tol_), name);
    } else if (kind == "full") {
      set = ImplicitConvexSet::full(v.get<int>());
    } else if (kind == "empty") {
      set = ImplicitConvexSet::empty(v.get<int>());
    } else {
      throw InputError("unknown set kind '" + kind + "'");
    }
    if (dim_ == 0) dim_ = set->dim();
    if (set->dim() != dim_) throw InputError("set '" + name + "' has a different dimension");
    sets_.emplace(name, *set);
  }

  Tolerances tol_;
  int dim_ = 0;
  std::map<std::string, ImplicitConvexSet> sets_;
  std::map<std::string, StatePolytope> polytopes_;
};

int cmd_lattice(const std::string& file, const Common& c) {
  const Json doc = Common::read_json(file);
  const Tolerances tol = c.tolerances();
  Json results = Json::array();
  std::ostringstream text;
  try {
    const LatticeEnv env(doc, tol);
    Rng rng(c.seed);
    if (!doc.contains("queries") || !doc.at("queries").is_array()) throw InputError("missing array 'queries'");
    for (const auto& q : doc.at("queries")) {
      Json r{{"query", q}};
      if (q.contains("contains")) {
        const auto s = env.eval(q.at("contains"));
        r["result"] = s.contains(density_from_json(q.at("state"), nullptr, tol), tol);
      } else if (q.contains("leq")) {
        r["result"] = leq(env.eval(q.at("leq").at(0)), env.eval(q.at("leq").at(1)), rng, 100, tol);
      } else if (q.contains("equal")) {
        r["result"] = set_equal(env.eval(q.at("equal").at(0)), env.eval(q.at("equal").at(1)), rng, 200, tol);
      } else if (q.contains("empty")) {
        const auto s = env.eval(q.at("empty"));
        r["result"] = s.is_empty(tol);
        r["provenance"] = s.provenance();
      } else if (q.contains("member")) {
        const auto m = env.eval(q.at("member")).find_member(tol);
        r["result"] = m ? to_json(*m) : Json(nullptr);
      } else if (q.contains("laws")) {
        const auto& a = q.at("laws");
        if (!a.is_array() || a.size() != 3) throw InputError("'laws' expects three expressions");
        Json laws = Json::array();
        bool all = true;
        for (const auto& l : lattice_law_suite(env.eval(a[0]), env.eval(a[1]), env.eval(a[2]), rng, 200, tol)) {
          laws.push_back({{"law", l.name}, {"holds", l.holds}, {"vacuous", l.vacuous}});
          all = all && l.holds;
        }
        r["result"] = all;
        r["laws"] = laws;
      } else if (q.contains("css")) {
        const StatePolytope& p = env.polytope(q.at("css").get<std::string>());
        if (!p.dims()) throw InputError("css query needs a polytope with dims");
        const CssCheck cc = is_css(p, *p.dims(), tol);
        r["result"] = cc.css;
        r["residual"] = cc.residual;
      } else if (q.contains("lambda_tau")) {
        const StatePolytope& p = env.polytope(q.at("lambda_tau").get<std::string>());
        if (!p.dims()) throw InputError("lambda_tau query needs a polytope with dims");
        r["result"] = to_json(lambda_tau(p, *p.dims()));
      } else {
        throw InputError("unknown query: " + q.dump());
      }
      text << q.dump() << " -> " << r["result"].dump() << "\n";
      results.push_back(r);
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed lattice document: ") + e.what());
  } catch (const UnsupportedError& e) {
    throw InputError(e.what());
  }
  emit(Json{{"results", results}}, text.str(), c);
  return ok;
}

int cmd_gen(const std::string& kind, double p, const std::string& dims_arg, int rank, int terms, const Common& c) {
  const BipartiteDims dims = dims_arg.empty() ? BipartiteDims{2, 2} : parse_dims(dims_arg);
  Json out;
  if (kind == "bell") {
    if (dims != BipartiteDims{2, 2}) throw InputError("bell is defined on 2,2");
    out = to_json(bell_phi_plus().density(), dims);
  } else if (kind == "werner") {
    if (dims != BipartiteDims{2, 2}) throw InputError("werner is defined on 2,2");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("--p must lie in [0, 1]");
    out = to_json(werner_state(p), dims);
  } else if (kind == "product") {
    out = to_json(kron(random_density(dims.d1, rank > 0 ? std::min(rank, dims.d1) : dims.d1, derive_seed(c.seed, 1)),
                       random_density(dims.d2, rank > 0 ? std::min(rank, dims.d2) : dims.d2, derive_seed(c.seed, 2))),
                  dims);
  } else if (kind == "random") {
    out = to_json(random_density(dims.total(), rank > 0 ? rank : dims.total(), c.seed), dims);
  } else if (kind == "separable") {
    Rng rng(c.seed);
    const RealVector w = random_simplex(terms, rng);
    std::vector<DensityMatrix> a, b;
    for (int k = 0; k < terms; ++k) {
      a.push_back(random_density(dims.d1, rank > 0 ? std::min(rank, dims.d1) : 1, derive_seed(c.seed, 2 * k + 1)));
      b.push_back(random_density(dims.d2, rank > 0 ? std::min(rank, dims.d2) : 1, derive_seed(c.seed, 2 * k + 2)));
    }
    const auto dec = SeparableDecomposition::diagonal(std::vector<double>(w.data(), w.data() + w.size()), a, b);
    out = to_json(dec.assemble(), dims);
    out["decomposition"] = to_json(dec);
  } else {
    throw InputError("unknown --kind '" + kind + "'");
  }
  std::ostringstream text;
  text << matrix_from_json(out.at("matrix")) << "\n";
  emit(out, text.str(), c);
  return ok;
}

int cmd_com(const std::string& kind, int samples, const Common& c) {
  const Tolerances tol = c.tolerances();
  Rng rng(c.seed);
  Json out{{"kind", kind}, {"samples", samples}};
  std::ostringstream text;
  if (kind == "classical") {
    const TripleCompound t = build_compound("classical", {2, 2});
    int sep = 0;
    for (int k = 0; k < samples; ++k) {
      const RealVector joint = random_simplex(4, rng);
      if (com_separable(joint, t, std::nullopt, tol).verdict == Verdict::separable) ++sep;
    }
    const RealVector corr = (RealVector(4) << 0.5, 0.0, 0.0, 0.5).finished();
    out["separable"] = sep;
    out["all_separable"] = sep == samples;
    out["correlated_is_product"] = com_is_product(corr, t);
    out["correlated_verdict"] = to_string(com_separable(corr, t, std::nullopt, tol).verdict);
    text << "all sampled states separable: " << (sep == samples ? "true" : "false") << " (" << sep << "/" << samples
         << ")\n";
  } else if (kind == "quantum") {
    const TripleCompound t = build_compound("quantum", {2, 2});
    const DensityMatrix bell = bell_phi_plus().density();
    const ComVerdict v = com_separable(state_coords(bell), t, std::nullopt, tol);
    int sep = 0, ent = 0;
    for (int k = 0; k < samples; ++k) {
      const DensityMatrix r = random_density(4, 1 + k % 4, derive_seed(c.seed, k));
      const Verdict vk = com_separable(state_coords(r), t, std::nullopt, tol).verdict;
      sep += vk == Verdict::separable;
      ent += vk == Verdict::entangled;
    }
    out["bell_verdict"] = to_string(v.verdict);
    out["bell_method"] = v.method;
    out["bell_is_product"] = com_is_product(state_coords(bell), t);
    out["entangled_found"] = v.verdict == Verdict::entangled;
    out["sampled_separable"] = sep;
    out["sampled_entangled"] = ent;
    text << "certified entangled state found: " << (v.verdict == Verdict::entangled ? "true" : "false") << " (Bell, "
         << v.method << ")\n"
         << "sampled: " << sep << " separable, " << ent << " entangled, " << samples - sep - ent << " inconclusive\n";
  } else {
    throw InputError("unknown --kind '" + kind + "' (classical or quantum)");
  }
  emit(out, text.str(), c);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlat: convex-set quantum logic, entanglement detection and MaxEnt"};
  app.require_subcommand(1);
  Common common;

  std::string state_file, dims_arg, dec_file;
  int samples = 200;
  auto* check = app.add_subcommand("check-separability", "Run the separability criteria on a state");
  check->add_option("state", state_file, "State JSON")->required();
  check->add_option("--dims", dims_arg, "Bipartite split d1,d2");
  check->add_option("--decomposition", dec_file, "Decomposition JSON");
  check->add_option("--samples", samples, "Random witness directions")->check(CLI::NonNegativeNumber);
  add_common(check, common, true);

  std::string cons_file;
  int dim = 0;
  auto* maxent = app.add_subcommand("maxent", "Solve a MaxEnt problem");
  maxent->add_option("constraints", cons_file, "Constraints JSON")->required();
  maxent->add_option("--dim", dim, "Hilbert-space dimension (needed without observables)");
  add_common(maxent, common, true);

  std::string expr_file;
  auto* lattice = app.add_subcommand("lattice-eval", "Evaluate lattice queries over named sets");
  lattice->add_option("expressions", expr_file, "Expression JSON")->required();
  add_common(lattice, common, false);

  std::string kind;
  double p = 0.5;
  int rank = 0, terms = 3;
  auto* gen = app.add_subcommand("gen", "Generate a state");
  gen->add_option("--kind", kind, "bell, werner, product, random or separable")->required();
  gen->add_option("--p", p, "Werner mixing parameter");
  gen->add_option("--dims", dims_arg, "Bipartite split d1,d2 (default 2,2)");
  gen->add_option("--rank", rank, "Rank of random factors");
  gen->add_option("--terms", terms, "Terms of a separable mixture")->check(CLI::PositiveNumber);
  add_common(gen, common, false);

  std::string com_kind;
  int com_samples = 200;
  auto* com = app.add_subcommand("com-demo", "Classical versus quantum compound systems");
  com->add_option("--kind", com_kind, "classical or quantum")->required();
  com->add_option("--samples", com_samples, "Sampled states")->check(CLI::NonNegativeNumber);
  add_common(com, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_error;
  }

  try {
    if (*check) return cmd_check(state_file, dims_arg, dec_file, samples, common);
    if (*maxent) return cmd_maxent(cons_file, dim, common);
    if (*lattice) return cmd_lattice(expr_file, common);
    if (*gen) return cmd_gen(kind, p, dims_arg, rank, terms, common);
    if (*com) return cmd_com(com_kind, com_samples, common);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const InvariantError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return infeasible;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numerical_failure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical_failure;
  }
  return input_error;
}
