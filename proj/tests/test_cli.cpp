#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qlat/io.hpp"

#ifndef QLAT_CLI_PATH
#error "QLAT_CLI_PATH must name the qlat binary"
#endif

using namespace qlat;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

std::string fixture(const std::string& name) { return std::string(QLAT_FIXTURE_DIR) + "/" + name; }

Run run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / ("qlat_cli_test_" + std::to_string(::getpid()) + ".out");
  const std::string cmd = std::string(QLAT_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  fs::remove(out);
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / (std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << content;
  return p.string();
}

const char* fast = " --samples 20 --restarts 5";

}  // namespace

TEST_CASE("check-separability on bundled states") {
  const auto bell = run("check-separability " + fixture("bell.json") + fast);
  REQUIRE(bell.code == 0);
  const Json j = bell.json();
  CHECK(j.at("verdict") == "ENTANGLED");
  CHECK(j.at("schema") == 1);
  int ent = 0;
  for (const auto& c : j.at("certificates")) ent += c.at("verdict") == "ENTANGLED";
  CHECK(ent >= 2);

  CHECK(run("check-separability " + fixture("product.json") + fast).json().at("verdict") == "SEPARABLE");
  CHECK(run("check-separability " + fixture("werner_0.2.json") + fast).json().at("verdict") == "SEPARABLE");
  CHECK(run("check-separability " + fixture("werner_0.5.json") + fast).json().at("verdict") == "ENTANGLED");
  CHECK(run("check-separability " + fixture("separable_2x3.json") + fast).json().at("verdict") == "SEPARABLE");

  const auto big = run("check-separability " + fixture("random_3x3.json") + fast + " --methods spectral,pure_witness,ppt");
  REQUIRE(big.code == 0);
  CHECK(big.json().at("verdict") != "SEPARABLE");
  const auto text = run("check-separability " + fixture("random_3x3.json") + fast + " --methods spectral,ppt --output text");
  CHECK(text.out.find("INCONCLUSIVE") != std::string::npos);
}

TEST_CASE("reports are deterministic without timings") {
  const std::string args = "check-separability " + fixture("werner_0.5.json") + fast + " --seed 9 --no-timings";
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK_FALSE(a.json().contains("timings"));
  const auto other = run("check-separability " + fixture("werner_0.5.json") + fast + " --seed 9");
  CHECK(other.json().contains("timings"));
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("check-separability " + write_temp("bad.json", "{ not json")).code == 2);
  CHECK(run("check-separability /nonexistent/file.json").code == 2);
  CHECK(run("check-separability " + fixture("bell.json") + " --dims 2,3").code == 2);
  CHECK(run("check-separability " + fixture("bell.json") + " --methods tarot").code == 2);
  CHECK(run("frobnicate").code == 2);
  const auto nonherm = write_temp("nonherm.json", R"({"dim": 2, "matrix": [[1, 1], [0, 0]], "dims": [1, 2]})");
  CHECK(run("check-separability " + nonherm).code == 2);
  CHECK(run("lattice-eval " + write_temp("undef.json", R"({"sets": {}, "queries": [{"empty": "X"}]})")).code == 2);
}

TEST_CASE("maxent") {
  const auto e = run("maxent " + fixture("maxent_empty.json"));
  REQUIRE(e.code == 0);
  const Matrix rho = matrix_from_json(e.json().at("rho").at("matrix"));
  CHECK((rho - Matrix::Identity(2, 2) * 0.5).norm() < 1e-12);

  const auto s = run("maxent " + fixture("maxent_sz.json"));
  REQUIRE(s.code == 0);
  const Matrix r2 = matrix_from_json(s.json().at("rho").at("matrix"));
  CHECK(std::abs(r2(0, 0).real() - 0.75) < 1e-9);
  CHECK(std::abs(r2(1, 1).real() - 0.25) < 1e-9);
  CHECK(s.json().at("multipliers").at(0).get<double>() == doctest::Approx(-0.5 * std::log(3.0)));

  const auto c = run("maxent " + fixture("maxent_contradictory.json"));
  CHECK(c.code == 4);
  CHECK(c.json().at("error") == "infeasible");
}

TEST_CASE("lattice-eval") {
  const auto r = run("lattice-eval " + fixture("lattice_laws.json"));
  REQUIRE(r.code == 0);
  const Json res = r.json().at("results");
  for (const auto& law : res.at(0).at("laws")) {
    INFO(law.dump());
    CHECK(law.at("holds") == true);
  }
  CHECK(res.at(1).at("result") == true);   // neg{I/2} is empty
  CHECK(res.at(2).at("result") == true);   // its negation is everything
  CHECK(res.at(3).at("result") == false);  // so double negation fails

  const auto css = run("lattice-eval " + fixture("lattice_css.json"));
  REQUIRE(css.code == 0);
  CHECK(css.json().at("results").at(0).at("result") == true);
}

TEST_CASE("gen and com-demo") {
  const auto w = run("gen --kind werner --p 0.5");
  REQUIRE(w.code == 0);
  const Matrix m = matrix_from_json(w.json().at("matrix"));
  CHECK(std::abs(m.trace() - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(m(0, 0).real() - (0.5 * 0.5 + 0.5 * 0.25)) < 1e-12);
  CHECK(std::abs(m(0, 3).real() - 0.25) < 1e-12);

  const auto b = run("gen --kind bell");
  const Matrix bm = matrix_from_json(b.json().at("matrix"));
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 0.5;
  CHECK((bm - expect).norm() < 1e-15);

  const auto cl = run("com-demo --kind classical --output text");
  REQUIRE(cl.code == 0);
  CHECK(cl.out.find("all sampled states separable: true") != std::string::npos);
  const auto q = run("com-demo --kind quantum");
  REQUIRE(q.code == 0);
  CHECK(q.json().at("entangled_found") == true);
}
