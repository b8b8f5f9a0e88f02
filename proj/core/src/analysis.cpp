#include "qlat/analysis.hpp"

#include <algorithm>
#include <chrono>

#include "qlat/error.hpp"

namespace qlat {

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> m{"spectral", "pure_witness", "witness_search", "projection", "ppt", "css"};
  return m;
}

Verdict merge_verdicts(const std::vector<MethodResult>& results) {
  const bool ent = std::any_of(results.begin(), results.end(), [](const auto& r) { return r.verdict == Verdict::entangled; });
  const bool sep = std::any_of(results.begin(), results.end(), [](const auto& r) { return r.verdict == Verdict::separable; });
  if (ent && sep) throw NumericalError("methods disagree: both ENTANGLED and SEPARABLE were certified", 0.0);
  if (ent) return Verdict::entangled;
  if (sep) return Verdict::separable;
  return Verdict::inconclusive;
}

Json AnalysisReport::to_json(bool with_timings) const {
  Json j;
  j["schema"] = 1;
  j["input_digest"] = input_digest;
  j["dims"] = {dims.d1, dims.d2};
  j["seed"] = seed;
  j["tolerances"] = qlat::to_json(tol);
  j["verdict"] = to_string(verdict);
  j["certificates"] = Json::array();
  for (const auto& r : results) j["certificates"].push_back(r.certificate);
  if (with_timings) {
    Json t = Json::object();
    for (const auto& r : results) t[r.method] = r.seconds;
    j["timings"] = t;
  }
  return j;
}

AnalysisReport check_separability(const DensityMatrix& rho, const BipartiteDims& dims, const AnalysisOptions& opt,
                                  const std::string& input_digest) {
  if (rho.dim() != dims.total()) throw DimensionError("state dimension does not match the split");
  for (const auto& m : opt.methods) {
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end()) {
      throw Error("unknown method '" + m + "'");
    }
  }
  auto selected = [&](const char* m) { return std::find(opt.methods.begin(), opt.methods.end(), m) != opt.methods.end(); };
  const Tolerances& tol = opt.tol;

  AnalysisReport rep;
  rep.input_digest = input_digest;
  rep.dims = dims;
  rep.seed = opt.seed;
  rep.tol = tol;

  auto timed = [&](const std::string& name, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    MethodResult r = body();
    r.method = name;
    r.certificate["method"] = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.results.push_back(std::move(r));
  };

  if (selected("spectral")) {
    timed("spectral", [&] {
      const CriterionResult c = spectral_criterion(rho, dims, tol);
      MethodResult r{.method = {}, .verdict = c.verdict, .certificate = certificate("spectral", c.verdict, opt.seed, 1)};
      r.certificate["detail"] = {{"index", c.index}, {"eigenvalue", c.value}, {"sigma1_squared", c.bound}};
      return r;
    });
  }
  if (selected("pure_witness")) {
    timed("pure_witness", [&] {
      const SpectralDecomposition sd = spectral_decompose(rho.op(), tol);
      CriterionResult best;
      double margin = -std::numeric_limits<double>::infinity();
      int idx = -1;
      for (std::size_t k = 0; k < sd.eigenvectors.size(); ++k) {
        const CriterionResult c = pure_witness_test(rho, sd.eigenvectors[k], dims, tol);
        if (c.value - c.bound > margin) {
          margin = c.value - c.bound;
          best = c;
          idx = static_cast<int>(k);
        }
      }
      MethodResult r{.method = {}, .verdict = best.verdict,
                     .certificate = certificate("pure_witness", best.verdict, opt.seed, static_cast<int>(sd.eigenvectors.size()))};
      r.certificate["detail"] = {{"eigenvector", idx}, {"t", best.value}, {"s", best.bound}};
      return r;
    });
  }
  if (selected("witness_search")) {
    timed("witness_search", [&] {
      const WitnessSearchResult w = random_witness_search(
          rho, dims, {.samples = opt.samples, .restarts = opt.restarts, .seed = derive_seed(opt.seed, 11)}, tol);
      MethodResult r{.method = {}, .verdict = w.verdict, .certificate = certificate("witness_search", w.verdict, opt.seed, w.directions, w.best)};
      return r;
    });
  }
  std::optional<ProjectionResult> proj;
  if (selected("projection")) {
    timed("projection", [&] {
      proj = project_separable(rho, dims,
                               {.max_iterations = opt.max_iterations, .seed = derive_seed(opt.seed, 13)}, tol);
      MethodResult r{.method = {}, .verdict = proj->verdict,
                     .certificate = certificate("projection", proj->verdict, opt.seed, proj->approximation.iterations,
                                                proj->witness)};
      r.certificate["detail"] = {{"distance", proj->approximation.distance},
                                 {"gap", proj->approximation.gap},
                                 {"terms", proj->approximation.weights.size()},
                                 {"converged", proj->approximation.converged}};
      return r;
    });
  }
  if (selected("ppt")) {
    timed("ppt", [&] {
      const PptResult p = ppt_check(rho, dims, tol);
      Verdict v = Verdict::inconclusive;
      if (!p.ppt) v = Verdict::entangled;
      else if (p.exact) v = Verdict::separable;
      MethodResult r{.method = {}, .verdict = v, .certificate = certificate("ppt", v, opt.seed, 1)};
      r.certificate["detail"] = {{"ppt", p.ppt}, {"min_eigenvalue", p.min_eigenvalue}, {"exact", p.exact}};
      return r;
    });
  }
  if (selected("css")) {
    timed("css", [&] {
      std::optional<SeparableDecomposition> dec = opt.decomposition;
      std::optional<double> recovered;
      if (!dec && proj && proj->approximation.distance < 1e-6) {
        dec = SeparableDecomposition::from_approximation(proj->approximation);
        recovered = proj->approximation.distance;
      }
      CssVerdict c;
      if (dec || !proj) {
        c = separable_via_css(rho, dec, dims, {.max_iterations = opt.max_iterations, .seed = derive_seed(opt.seed, 13)}, tol);
      } else {
        c.note = "no decomposition recovered (distance " + std::to_string(proj->approximation.distance) + ")";
        recovered = proj->approximation.distance;
      }
      if (!c.recovered_distance) c.recovered_distance = recovered;
      MethodResult r{.method = {}, .verdict = c.verdict, .certificate = certificate("css", c.verdict, opt.seed, 1)};
      Json d{{"note", c.note}, {"membership_residual", c.membership_residual}, {"invariance_residual", c.invariance_residual}};
      if (c.css) d["css_generators"] = c.css->size();
      if (c.recovered_distance) d["recovered_distance"] = *c.recovered_distance;
      if (c.min_entropy) d["min_entropy"] = *c.min_entropy;
      r.certificate["detail"] = d;
      return r;
    });
  }
  rep.verdict = merge_verdicts(rep.results);
  return rep;
}

}  // namespace qlat
