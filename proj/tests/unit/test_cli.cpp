#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "toruskit/bundles.hpp"
#include "toruskit/cli.hpp"
#include "toruskit/fourier.hpp"
#include "toruskit/json_io.hpp"

using namespace toruskit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("toruskit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const Json& doc) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << doc.dump(2);
  return p.string();
}

Json strip(Json doc) {
  doc.erase("seed");
  doc.erase("exit_code");
  return doc;
}

}  // namespace

TEST_CASE("check-generic on the standard torus finds the e1, e4 subtorus") {
  const std::string t0 = write("t0.json", torus_to_json(standard_exact_torus(3)));
  const Run r = run({"check-generic", "--in", t0});
  CHECK(r.code == kExitNegative);
  const Json doc = r.json();
  CHECK(doc["verdict"] == "NonGeneric");
  CHECK(doc["exact"] == true);
  REQUIRE(doc["witness"]["kind"] == "subtorus");
  CHECK(doc["witness"]["basis"] == Json::parse("[[1,0,0,0,0,0],[0,0,0,1,0,0]]"));
}

TEST_CASE("check-generic on a random float torus finds nothing") {
  const Run s = run({"sample-torus", "--n", "3", "--seed", "11"});
  REQUIRE(s.code == 0);
  const Run r = run({"check-generic", "--in", write("rand.json", s.json()), "--bound", "3"});
  CHECK(r.code == kExitInconclusive);
  CHECK(r.json()["verdict"] == "NoObstructionFound");
}

TEST_CASE("section exit codes") {
  const std::string a = write("a.json", strip(run({"sample", "--kind", "structure", "--seed", "1", "--orientation", "1"}).json()));
  const std::string b = write("b.json", strip(run({"sample", "--kind", "structure", "--seed", "2", "--orientation", "-1"}).json()));
  const Run same = run({"section", "--i", a, "--j", a});
  CHECK(same.code == kExitNegative);
  CHECK(same.json()["error"] == "NotTransversal");
  const Run ok = run({"section", "--i", a, "--j", b, "--seed", "5"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.json()["residual"].get<double>() < 1e-10);
}

TEST_CASE("usage and input errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"no-such-command"}).code == kExitUsage);
  CHECK(run({"check-generic"}).code == kExitUsage);
  CHECK(run({"check-generic", "--in", (scratch() / "missing.json").string()}).code == kExitUsage);
  CHECK(run({"sample", "--kind", "banana"}).code == kExitUsage);
  CHECK(run({"sample", "--kind", "metric", "--out", (scratch() / "no/dir/x.json").string()}).code == kExitUsage);

  const std::string bad = (scratch() / "bad.json").string();
  std::ofstream(bad) << "{ not json";
  CHECK(run({"check-generic", "--in", bad}).code == kExitMalformed);
  const std::string wrong = write("wrong.json", Json{{"type", "metric"}, {"matrix", "oops"}});
  CHECK(run({"check-generic", "--in", wrong}).code == kExitMalformed);
  const std::string small = write("small.json", torus_to_json(standard_torus(2)));
  const Run r = run({"check-generic", "--in", small});
  CHECK(r.code == kExitMalformed);
  CHECK(r.json()["error"] == "DimensionTooSmall");

  ::setenv("TORUSKIT_SEED", "seven", 1);
  CHECK(run({"sample", "--kind", "metric"}).code == kExitUsage);
  ::setenv("TORUSKIT_SEED", "7", 1);
  const Run env = run({"sample", "--kind", "metric"});
  CHECK(env.code == 0);
  CHECK(env.json()["seed"] == 7);
  CHECK(run({"sample", "--kind", "metric", "--seed", "3"}).json()["seed"] == 3);
  ::unsetenv("TORUSKIT_SEED");
  CHECK(run({"sample", "--kind", "metric"}).json()["seed"] == 0);
}

TEST_CASE("outputs are byte-identical for a fixed seed") {
  for (const char* kind : {"torus", "structure", "twistor-point", "metric", "ext-class"}) {
    const Run a = run({"sample", "--kind", kind, "--seed", "42"});
    const Run b = run({"sample", "--kind", kind, "--seed", "42"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != run({"sample", "--kind", kind, "--seed", "43"}).out);
  }
  const std::string i = write("ci.json", strip(run({"sample", "--kind", "structure", "--seed", "3"}).json()));
  const std::string j = write("cj.json", strip(run({"sample", "--kind", "structure", "--seed", "4"}).json()));
  const Run c1 = run({"connect", "--i", i, "--j", j, "--seed", "9"});
  const Run c2 = run({"connect", "--i", i, "--j", j, "--seed", "9", "--threads", "4"});
  CHECK(c1.code == 0);
  CHECK(c1.out == c2.out);
  const Json chain = c1.json();
  CHECK(chain["hops"].get<int>() <= 3);
  CHECK(chain["residual"].get<double>() < 1e-8);

  const std::string path = (scratch() / "out.json").string();
  CHECK(run({"sample", "--kind", "metric", "--seed", "42", "--out", path}).code == 0);
  std::ifstream file(path);
  const std::string written((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  CHECK(written == run({"sample", "--kind", "metric", "--seed", "42"}).out);
}

TEST_CASE("emitted documents round trip") {
  const auto check = [](const Json& doc, auto parse, auto emit) { CHECK(emit(parse(doc)) == doc); };
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::string s = std::to_string(seed);
    check(strip(run({"sample-torus", "--seed", s}).json()), torus_from_json, [](const MarkedTorus& t) { return torus_to_json(t); });
    check(strip(run({"sample-torus", "--seed", s, "--backend", "rational"}).json()), torus_from_json,
          [](const MarkedTorus& t) { return torus_to_json(t); });
    check(strip(run({"sample", "--kind", "metric", "--seed", s}).json()), metric_from_json,
          [](const Metric& g) { return metric_to_json(g); });
    check(strip(run({"sample", "--kind", "structure", "--seed", s}).json()), structure_from_json,
          [](const ComplexStructure& j) { return structure_to_json(j); });
    check(strip(run({"sample", "--kind", "twistor-point", "--seed", s}).json()), twistor_point_from_json,
          [](const TwistorPoint& p) { return twistor_point_to_json(p); });
    check(strip(run({"sample", "--kind", "ext-class", "--ranks", "1,2,1", "--seed", s}).json()), ext_class_from_json,
          [](const ExtClass& e) { return ext_class_to_json(e); });
  }
  const std::string t0 = write("t0r.json", torus_to_json(standard_exact_torus(3)));
  check(strip(run({"check-generic", "--in", t0}).json()), genericity_report_from_json,
        [](const GenericityReport& r) { return genericity_report_to_json(r); });
  const std::string i = write("ri.json", strip(run({"sample", "--kind", "structure", "--seed", "5"}).json()));
  const std::string j = write("rj.json", strip(run({"sample", "--kind", "structure", "--seed", "6"}).json()));
  check(strip(run({"connect", "--i", i, "--j", j}).json()), chain_from_json, [](const Chain& c) { return chain_to_json(c); });
}

TEST_CASE("two-block ext-class samples are unobstructed") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Run r = run({"sample", "--kind", "ext-class", "--ranks", "1,1", "--seed", std::to_string(seed)});
    REQUIRE(r.code == 0);
    CHECK(mc_obstruction(ext_class_from_json(r.json())).norm() == 0.0);
  }
  const Run r = run({"sample", "--kind", "ext-class", "--ranks", "1,1,1", "--integrable", "--seed", "1"});
  CHECK(mc_obstruction(ext_class_from_json(r.json())).norm() < 1e-12);
}

TEST_CASE("sampled tori are valid for 1000 seeds") {
  int valid = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Run r = run({"sample-torus", "--n", "3", "--seed", std::to_string(seed)});
    if (r.code != 0) continue;
    try {
      const MarkedTorus t = torus_from_json(r.json());
      valid += t.n() == 3;
    } catch (const Error&) {
    }
  }
  CHECK(valid == 1000);
}

TEST_CASE("hodge-type") {
  const std::string j0 = write("j0.json", torus_to_json(standard_torus(3)));
  // e1 ^ e4 = (i/2) dz ^ dzbar-type: pure (1,1) for J0.
  const std::string pure = write("pure.json", multivector_to_json(MultiVector::basis(6, {0, 3})));
  const std::string mixed = write("mixed.json", multivector_to_json(MultiVector::basis(6, {0, 1})));
  const Run p = run({"hodge-type", "--structure", j0, "--form", pure});
  CHECK(p.code == kExitOk);
  CHECK(p.json()["p"] == 1);
  CHECK(p.json()["q"] == 1);
  const Run m = run({"hodge-type", "--structure", j0, "--form", mixed});
  CHECK(m.code == kExitNegative);
  CHECK(m.json()["pure"] == false);
  CHECK(m.json()["components"].size() == 3);
}

TEST_CASE("massey and curvature-scan") {
  const ComplexStructure j = standard_structure(3);
  const std::string js = write("js.json", structure_to_json(j));
  CMat a = CMat::Zero(2, 2), b = CMat::Zero(2, 2);
  a(0, 1) = 1.0;
  b(1, 0) = 1.0;
  FourierForm flat(3, 1, 2);
  flat.add({0, 0, 0, 0, 0, 0}, {0}, a);
  const Run ok = run({"massey", "--structure", js, "--theta0", write("flat.json", fourier_form_to_json(flat))});
  CHECK(ok.code == kExitOk);
  CHECK(ok.json()["converged"] == true);
  CHECK(ok.json()["mc_residual"].get<double>() < 1e-12);

  FourierForm obstructed = flat;
  obstructed.add({0, 0, 0, 0, 0, 0}, {1}, b);
  const Run bad = run({"massey", "--structure", js, "--theta0", write("obs.json", fourier_form_to_json(obstructed))});
  CHECK(bad.code == kExitNegative);
  CHECK(bad.json()["error"] == "Obstructed");

  FourierForm open(3, 1, 2);
  open.add({0, 1, 0, 0, 0, 0}, {0}, a);
  CHECK(run({"massey", "--structure", js, "--theta0", write("open.json", fourier_form_to_json(open))}).code ==
        kExitMalformed);

  const std::string p = write("p.json", strip(run({"sample", "--kind", "twistor-point", "--seed", "8"}).json()));
  const Run scan = run({"curvature-scan", "--point", p, "--samples", "40", "--seed", "2"});
  CHECK(scan.code == kExitOk);
  CHECK(scan.json()["violations"] == 0);
  CHECK(scan.json()["max_value"].get<double>() < 0);
}

TEST_CASE("bundle-extend and transport") {
  const std::string i = write("ti.json", strip(run({"sample", "--kind", "twistor-point", "--seed", "1", "--orientation", "1"}).json()));
  const std::string j = write("tj.json", strip(run({"sample", "--kind", "twistor-point", "--seed", "2", "--orientation", "-1"}).json()));
  const std::string l = write("tl.json", strip(run({"sample", "--kind", "twistor-point", "--seed", "3", "--orientation", "-1"}).json()));
  const std::string e = write("e.json", strip(run({"sample", "--kind", "ext-class", "--seed", "4"}).json()));
  const Run at_j = run({"bundle-extend", "--class", e, "--i", i, "--j", j, "--l", j});
  CHECK(at_j.code == kExitOk);
  CHECK(ext_class_from_json(at_j.json()).norm() > 0);
  const ExtClass back = ext_class_from_json(at_j.json());
  const ExtClass orig = ext_class_from_json(read_json_file(e));
  CHECK(std::abs(back.norm() - orig.norm()) < 1e-10 * orig.norm());
  CHECK(run({"bundle-extend", "--class", e, "--i", i, "--j", i, "--l", l}).code == kExitNegative);

  const Run t = run({"transport", "--i", i, "--l", l, "--lp", l, "--seed", "6"});
  CHECK(t.code == kExitOk);
  CHECK((cvec_from_json(t.json()["value"]) - cvec_from_json(t.json()["t"])).norm() < 1e-12);
}
