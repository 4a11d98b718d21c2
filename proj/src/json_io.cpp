#include "toruskit/json_io.hpp"

#include <fstream>
#include <sstream>

#include "toruskit/rational.hpp"

namespace toruskit {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

void expect_type(const Json& j, const char* type) {
  const std::string got = field(j, "type").get<std::string>();
  if (got != type) throw InvalidInput("expected a '" + std::string(type) + "' document, got '" + got + "'");
}

double real_entry(const Json& e) {
  if (e.is_number()) return e.get<double>();
  if (e.is_string()) return parse_rational(e.get<std::string>()).convert_to<double>();
  throw InvalidInput("matrix entry must be a number or a rational string");
}

cplx complex_entry(const Json& e) {
  if (!e.is_array() || e.size() != 2) throw InvalidInput("complex entry must be [re, im]");
  return {real_entry(e[0]), real_entry(e[1])};
}

const Json& rows_of(const Json& j, std::size_t& rows, std::size_t& cols) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InvalidInput("matrix must be a non-empty array of rows");
  rows = j.size();
  cols = j[0].size();
  for (const auto& r : j)
    if (!r.is_array() || r.size() != cols) throw InvalidInput("matrix rows have different lengths");
  return j;
}

std::vector<int> to_one_based(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v) out.push_back(x + 1);
  return out;
}

std::vector<int> to_zero_based(const Json& j) {
  std::vector<int> out;
  for (const auto& x : j) out.push_back(x.get<int>() - 1);
  return out;
}

std::string backend_name(Backend b) { return b == Backend::Rational ? "rational" : "f64"; }

}  // namespace

Json mat_to_json(const Mat& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Mat mat_from_json(const Json& j) {
  std::size_t rows, cols;
  rows_of(j, rows, cols);
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = real_entry(j[r][c]);
  return m;
}

Json cmat_to_json(const CMat& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(row);
  }
  return out;
}

CMat cmat_from_json(const Json& j) {
  std::size_t rows, cols;
  rows_of(j, rows, cols);
  CMat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_entry(j[r][c]);
  return m;
}

Json cvec_to_json(const CVec& v) {
  Json out = Json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

CVec cvec_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("complex vector must be a non-empty array");
  CVec v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v(k) = complex_entry(j[k]);
  return v;
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("vector must be a non-empty array");
  Vec v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v(k) = real_entry(j[k]);
  return v;
}

Json torus_to_json(const MarkedTorus& t) {
  Json out{{"type", "torus"}, {"backend", backend_name(t.backend())}, {"n", t.n()}};
  if (t.exact()) {
    Json rows = Json::array();
    for (int r = 0; r < t.n(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < 2 * t.n(); ++c)
        row.push_back({format_rational(t.exact()->re(r, c)), format_rational(t.exact()->im(r, c))});
      rows.push_back(row);
    }
    out["periods"] = rows;
  } else {
    out["periods"] = cmat_to_json(t.periods());
  }
  return out;
}

MarkedTorus torus_from_json(const Json& j) {
  expect_type(j, "torus");
  const std::string backend = j.value("backend", std::string("f64"));
  const Json& p = field(j, "periods");
  if (backend == "f64") return make_torus(cmat_from_json(p));
  if (backend != "rational") throw InvalidInput("backend must be 'f64' or 'rational'");
  std::size_t rows, cols;
  rows_of(p, rows, cols);
  RationalMatrix re(rows, cols), im(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = p[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw InvalidInput("rational periods are [\"p/q\", \"p/q\"] pairs");
      re(r, c) = parse_rational(e[0].get<std::string>());
      im(r, c) = parse_rational(e[1].get<std::string>());
    }
  return make_exact_torus(re, im);
}

Json metric_to_json(const Metric& g) {
  return Json{{"type", "metric"}, {"backend", "f64"}, {"matrix", mat_to_json(g.matrix())}};
}

Metric metric_from_json(const Json& j) {
  expect_type(j, "metric");
  return Metric(mat_from_json(field(j, "matrix")));
}

Json structure_to_json(const ComplexStructure& s) {
  return Json{{"type", "structure"}, {"backend", "f64"}, {"matrix", mat_to_json(s.matrix())}};
}

ComplexStructure structure_from_json(const Json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "torus") return torus_from_json(j).induced_structure();
  expect_type(j, "structure");
  return ComplexStructure(mat_from_json(field(j, "matrix")));
}

Json frame_to_json(const IsotropicFrame& f) { return Json{{"type", "frame"}, {"basis", cmat_to_json(f.basis())}}; }

IsotropicFrame frame_from_json(const Json& j) {
  expect_type(j, "frame");
  return IsotropicFrame(cmat_from_json(field(j, "basis")));
}

Json twistor_point_to_json(const TwistorPoint& p) {
  return Json{{"type", "twistor_point"},
              {"frame", cmat_to_json(p.frame().basis())},
              {"metric", mat_to_json(p.metric().matrix())}};
}

TwistorPoint twistor_point_from_json(const Json& j) {
  expect_type(j, "twistor_point");
  return TwistorPoint(IsotropicFrame(cmat_from_json(field(j, "frame"))), Metric(mat_from_json(field(j, "metric"))));
}

Json multivector_to_json(const MultiVector& w) {
  Json terms = Json::array();
  const auto subsets = k_subsets(w.dim(), w.degree());
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    const cplx c = w.coeffs()(static_cast<int>(k));
    if (c == cplx(0.0)) continue;
    terms.push_back(Json{{"indices", to_one_based(subsets[k])}, {"re", c.real()}, {"im", c.imag()}});
  }
  return Json{{"type", "multivector"}, {"dim", w.dim()}, {"degree", w.degree()}, {"terms", terms}};
}

MultiVector multivector_from_json(const Json& j) {
  expect_type(j, "multivector");
  const int dim = field(j, "dim").get<int>();
  const int degree = field(j, "degree").get<int>();
  if (dim < 1 || degree < 0 || degree > dim) throw InvalidInput("invalid multivector shape");
  MultiVector out(dim, degree);
  for (const auto& t : field(j, "terms")) {
    const std::vector<int> idx = to_zero_based(field(t, "indices"));
    if (static_cast<int>(idx.size()) != degree) throw InvalidInput("term has the wrong degree");
    for (int x : idx)
      if (x < 0 || x >= dim) throw InvalidInput("term index out of range");
    const cplx c(t.value("re", 0.0), t.value("im", 0.0));
    out = out + MultiVector::basis(dim, idx) * c;
  }
  return out;
}

Json genericity_report_to_json(const GenericityReport& r) {
  Json out{{"type", "genericity_report"},
           {"verdict", r.verdict == Verdict::NonGeneric ? "NonGeneric" : "NoObstructionFound"},
           {"exact", r.exact},
           {"bound", r.bound}};
  if (r.subtorus) {
    out["witness"] = Json{{"kind", "subtorus"}, {"basis", r.subtorus->basis}, {"l", r.subtorus->l}};
  } else if (r.pp_class) {
    out["witness"] = Json{{"kind", "pp_class"},
                          {"p", r.pp_class->p},
                          {"class", multivector_to_json(r.pp_class->cls)},
                          {"residual", r.pp_class->residual}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

GenericityReport genericity_report_from_json(const Json& j) {
  expect_type(j, "genericity_report");
  GenericityReport r;
  const std::string verdict = field(j, "verdict").get<std::string>();
  if (verdict != "NonGeneric" && verdict != "NoObstructionFound") throw InvalidInput("unknown verdict");
  r.verdict = verdict == "NonGeneric" ? Verdict::NonGeneric : Verdict::NoObstructionFound;
  r.exact = field(j, "exact").get<bool>();
  r.bound = field(j, "bound").get<int>();
  const Json& w = field(j, "witness");
  if (!w.is_null()) {
    const std::string kind = field(w, "kind").get<std::string>();
    if (kind == "subtorus") {
      r.subtorus = SubtorusCertificate{field(w, "basis").get<std::vector<std::vector<long long>>>(),
                                       field(w, "l").get<int>()};
    } else if (kind == "pp_class") {
      r.pp_class = PPCertificate{field(w, "p").get<int>(), multivector_from_json(field(w, "class")),
                                 field(w, "residual").get<double>()};
    } else {
      throw InvalidInput("unknown witness kind");
    }
  }
  return r;
}

Json chain_to_json(const Chain& c) {
  Json structures = Json::array(), metrics = Json::array();
  for (const auto& s : c.structures) structures.push_back(mat_to_json(s.matrix()));
  for (const auto& g : c.metrics) metrics.push_back(mat_to_json(g.matrix()));
  return Json{{"type", "chain"},
              {"strategy", c.strategy},
              {"hops", c.hops()},
              {"residual", verify_chain(c).max_residual},
              {"structures", structures},
              {"metrics", metrics}};
}

Chain chain_from_json(const Json& j) {
  expect_type(j, "chain");
  Chain c;
  c.strategy = j.value("strategy", std::string());
  for (const auto& s : field(j, "structures")) c.structures.emplace_back(mat_from_json(s));
  for (const auto& g : field(j, "metrics")) c.metrics.emplace_back(mat_from_json(g));
  if (c.structures.size() != c.metrics.size() + 1) throw InvalidInput("a chain has one metric per hop");
  return c;
}

Json ext_class_to_json(const ExtClass& nu) {
  Json blocks = Json::array();
  for (const auto& b : nu.base().blocks())
    blocks.push_back(Json{{"phases", vec_to_json(b.character.phases())}, {"rank", b.rank}});
  Json forms = Json::object();
  for (const auto& [ij, form] : nu.forms()) {
    Json mats = Json::array();
    for (const auto& m : form) mats.push_back(cmat_to_json(m));
    forms[std::to_string(ij.first + 1) + "," + std::to_string(ij.second + 1)] = mats;
  }
  return Json{{"type", "ext_class"}, {"n", nu.n()}, {"blocks", blocks}, {"forms", forms}};
}

ExtClass ext_class_from_json(const Json& j) {
  expect_type(j, "ext_class");
  std::vector<FlatBlock> blocks;
  for (const auto& b : field(j, "blocks")) blocks.push_back({Character(vec_from_json(field(b, "phases"))), field(b, "rank").get<int>()});
  ExtClass nu{GradedFlatBundle(blocks)};
  if (j.contains("n") && field(j, "n").get<int>() != nu.n()) throw InvalidInput("n does not match the characters");
  for (const auto& [key, mats] : field(j, "forms").items()) {
    int i = 0, k = 0;
    char comma = 0;
    std::istringstream in(key);
    if (!(in >> i >> comma >> k) || comma != ',' || !in.eof()) throw InvalidInput("form keys look like \"i,j\"");
    std::vector<CMat> form;
    for (const auto& m : mats) form.push_back(cmat_from_json(m));
    nu.set(i - 1, k - 1, std::move(form));
  }
  return nu;
}

Json fourier_form_to_json(const FourierForm& f) {
  Json modes = Json::array();
  const auto subsets = k_subsets(f.n, f.degree);
  for (const auto& [m, comps] : f.modes) {
    Json terms = Json::array();
    for (std::size_t k = 0; k < comps.size(); ++k) {
      if (comps[k].isZero(0.0)) continue;
      terms.push_back(Json{{"subset", to_one_based(subsets[k])}, {"matrix", cmat_to_json(comps[k])}});
    }
    if (!terms.empty()) modes.push_back(Json{{"m", m}, {"terms", terms}});
  }
  return Json{{"type", "fourier_form"}, {"n", f.n}, {"degree", f.degree}, {"rank", f.rank}, {"modes", modes}};
}

FourierForm fourier_form_from_json(const Json& j) {
  expect_type(j, "fourier_form");
  FourierForm f(field(j, "n").get<int>(), field(j, "degree").get<int>(), field(j, "rank").get<int>());
  if (f.n < 1 || f.degree < 0 || f.degree > f.n || f.rank < 1) throw InvalidInput("invalid form shape");
  for (const auto& mode : field(j, "modes")) {
    const Mode m = field(mode, "m").get<Mode>();
    if (static_cast<int>(m.size()) != 2 * f.n) throw InvalidInput("modes have 2n entries");
    for (const auto& t : field(mode, "terms")) {
      Subset s = to_zero_based(field(t, "subset"));
      if (static_cast<int>(s.size()) != f.degree || !std::is_sorted(s.begin(), s.end()) ||
          std::adjacent_find(s.begin(), s.end()) != s.end() || (!s.empty() && (s.front() < 0 || s.back() >= f.n)))
        throw InvalidInput("subset must be increasing indices in 1..n of the form degree");
      const CMat c = cmat_from_json(field(t, "matrix"));
      if (c.rows() != f.rank || c.cols() != f.rank) throw InvalidInput("coefficient has the wrong size");
      f.add(m, s, c);
    }
  }
  return f;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace toruskit
