#include "toruskit/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "toruskit/bundles.hpp"
#include "toruskit/fourier.hpp"
#include "toruskit/hodge.hpp"
#include "toruskit/json_io.hpp"
#include "toruskit/moduli_path.hpp"
#include "toruskit/random.hpp"
#include "toruskit/twistor.hpp"

namespace toruskit {

namespace {

struct Result {
  Json doc;
  int code = kExitOk;
};

struct Config {
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  int n = 3;
  std::string kind;
  std::string backend = "f64";
  std::string ranks = "1,1";
  int orientation = 0;
  bool integrable = false;
  std::string in, i, j, l, lp, form, structure, metric, wi, wj, t, cls, theta0, point;
  int bound = 10;
  double tol = 1e-7;
  int max_attempts = 8;
  bool certify_generic = false;
  int mode_bound = 4;
  double massey_tol = 1e-12;
  int max_terms = 50;
  int samples = 100;
};

int exit_code_for(Error::Kind kind) {
  switch (kind) {
    case Error::Kind::NotTransversal:
    case Error::Kind::NotPaired:
    case Error::Kind::Obstructed:
      return kExitNegative;
    case Error::Kind::FactorizationFailed:
    case Error::Kind::ChainNotFound:
    case Error::Kind::Diverged:
      return kExitInconclusive;
    default:
      return kExitMalformed;
  }
}

std::string error_name(Error::Kind kind) {
  static const char* names[] = {"InvalidInput",   "DegenerateLattice", "IllConditioned", "NotCompatible",
                                "BackendRequired", "DimensionTooSmall", "NotTransversal", "NotSkew",
                                "NotPaired",       "FactorizationFailed", "ChainNotFound", "IndexOrder",
                                "NotClosed",       "Obstructed",        "Diverged"};
  return names[static_cast<int>(kind)];
}

std::vector<int> parse_ranks(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InvalidInput("--ranks expects comma-separated integers");
    }
  }
  if (out.empty()) throw InvalidInput("--ranks is empty");
  return out;
}

TwistorPoint load_point(const std::string& path, const Config& cfg) {
  const Json doc = read_json_file(path);
  if (doc.value("type", std::string()) == "twistor_point") return twistor_point_from_json(doc);
  const Metric g = cfg.metric.empty() ? Metric::identity(structure_from_json(doc).dim())
                                      : metric_from_json(read_json_file(cfg.metric));
  return TwistorPoint::from_structure(structure_from_json(doc), g);
}

CVec load_or_draw(const std::string& path, int n, Rng& rng) {
  if (path.empty()) return rng.complex_normal_vector(n);
  const CVec v = cvec_from_json(read_json_file(path));
  if (v.size() != n) throw InvalidInput("vector in '" + path + "' must have " + std::to_string(n) + " entries");
  return v;
}

Result cmd_sample(const Config& cfg, std::uint64_t seed, const std::string& kind) {
  if (cfg.n < 1) throw InvalidInput("--n must be positive");
  Rng rng(seed);
  Result r;
  if (kind == "torus") {
    if (cfg.backend == "rational") {
      r.doc = torus_to_json(random_exact_torus(cfg.n, seed));
    } else if (cfg.backend == "f64") {
      r.doc = torus_to_json(random_torus(cfg.n, seed));
    } else {
      throw InvalidInput("--backend must be 'f64' or 'rational'");
    }
  } else if (kind == "metric") {
    r.doc = metric_to_json(Metric(random_spd(2 * cfg.n, 10.0, rng)));
  } else if (kind == "structure" || kind == "twistor-point") {
    const Metric g = cfg.metric.empty() ? Metric::identity(2 * cfg.n) : metric_from_json(read_json_file(cfg.metric));
    if (g.dim() != 2 * cfg.n) throw InvalidInput("--metric has the wrong dimension for --n");
    ComplexStructure j = random_structure(g, rng.next());
    if (cfg.orientation != 0 && orientation(j) != cfg.orientation) j = j.negated();
    r.doc = kind == "structure" ? structure_to_json(j) : twistor_point_to_json(TwistorPoint::from_structure(j, g));
  } else if (kind == "ext-class") {
    std::vector<FlatBlock> blocks;
    for (int rank : parse_ranks(cfg.ranks)) blocks.push_back({Character::trivial(cfg.n), rank});
    r.doc = ext_class_to_json(random_ext_class(GradedFlatBundle(blocks), rng, cfg.integrable));
  } else {
    throw InvalidInput("unknown kind '" + kind + "'");
  }
  return r;
}

Result cmd_check_generic(const Config& cfg) {
  const MarkedTorus t = torus_from_json(read_json_file(cfg.in));
  const GenericityReport report = is_generic(t, {cfg.bound, cfg.tol});
  return {genericity_report_to_json(report), report.verdict == Verdict::NonGeneric ? kExitNegative : kExitInconclusive};
}

Result cmd_hodge_type(const Config& cfg) {
  const ComplexStructure j = structure_from_json(read_json_file(cfg.structure));
  const MultiVector w = multivector_from_json(read_json_file(cfg.form));
  if (w.dim() != j.dim()) throw InvalidInput("form and structure have different dimensions");
  Json components = Json::array();
  for (const auto& [pq, part] : pq_decompose(w, j))
    components.push_back(Json{{"p", pq.first}, {"q", pq.second}, {"norm", part.norm()}});
  const auto type = hodge_type(w, j, cfg.tol);
  Json doc{{"type", "hodge_type"}, {"pure", type.has_value()}};
  doc["p"] = type ? Json(type->first) : Json(nullptr);
  doc["q"] = type ? Json(type->second) : Json(nullptr);
  doc["components"] = components;
  return {doc, type ? kExitOk : kExitNegative};
}

Result cmd_connect(const Config& cfg, std::uint64_t seed) {
  const ComplexStructure a = structure_from_json(read_json_file(cfg.i));
  const ComplexStructure b = structure_from_json(read_json_file(cfg.j));
  ConnectOptions opts;
  opts.seed = seed;
  opts.max_attempts = cfg.max_attempts;
  opts.factorize.threads = cfg.threads;
  opts.certify_generic = cfg.certify_generic;
  opts.generic_bound = cfg.bound;
  return {chain_to_json(connect(a, b, opts)), kExitOk};
}

Result cmd_section(const Config& cfg, std::uint64_t seed) {
  const TwistorPoint i = load_point(cfg.i, cfg);
  const TwistorPoint j = load_point(cfg.j, cfg);
  Rng rng(seed);
  const CVec wi = load_or_draw(cfg.wi, i.n(), rng);
  const CVec wj = load_or_draw(cfg.wj, j.n(), rng);
  const CVec v = section_solve(i, j, wi, wj);
  const double residual = std::max((kappa(v, i) - wi).norm(), (kappa(v, j) - wj).norm());
  return {Json{{"type", "section"},
               {"v", cvec_to_json(v)},
               {"w_i", cvec_to_json(wi)},
               {"w_j", cvec_to_json(wj)},
               {"residual", residual}},
          kExitOk};
}

Result cmd_transport(const Config& cfg, std::uint64_t seed) {
  const TwistorPoint i = load_point(cfg.i, cfg);
  const TwistorPoint l = load_point(cfg.l, cfg);
  const TwistorPoint lp = load_point(cfg.lp, cfg);
  Rng rng(seed);
  const CVec t = load_or_draw(cfg.t, i.n(), rng);
  return {Json{{"type", "transport"}, {"t", cvec_to_json(t)}, {"value", cvec_to_json(psi_transport(i, l, lp, t))}},
          kExitOk};
}

Result cmd_bundle_extend(const Config& cfg) {
  const ExtClass nu = ext_class_from_json(read_json_file(cfg.cls));
  const TwistorPoint i = load_point(cfg.i, cfg);
  const TwistorPoint j = load_point(cfg.j, cfg);
  const TwistorPoint l = load_point(cfg.l, cfg);
  return {ext_class_to_json(twistor_extend(nu, i, j, l)), kExitOk};
}

Result cmd_massey(const Config& cfg) {
  const ComplexStructure j = structure_from_json(read_json_file(cfg.structure));
  const FourierForm theta0 = fourier_form_from_json(read_json_file(cfg.theta0));
  const FourierFormSpace space(j, cfg.mode_bound);
  const MasseyResult r = massey_solve(space, theta0, {cfg.massey_tol, cfg.max_terms});
  return {Json{{"type", "massey_result"},
               {"converged", r.converged},
               {"terms", r.terms.size()},
               {"mc_residual", r.mc_residual},
               {"theta", fourier_form_to_json(r.theta)}},
          r.converged ? kExitOk : kExitInconclusive};
}

Result cmd_curvature_scan(const Config& cfg, std::uint64_t seed) {
  const TwistorPoint s = load_point(cfg.point, cfg);
  if (cfg.samples < 1) throw InvalidInput("--samples must be positive");
  Rng rng(seed);
  const CMat h = s.gram();
  double max_value = -std::numeric_limits<double>::infinity(), max_error = 0.0;
  int violations = 0;
  for (int k = 0; k < cfg.samples; ++k) {
    const CMat a = rng.complex_normal_matrix(s.n(), s.n());
    const CMat xi = h.ldlt().solve(CMat(a - a.transpose()));
    const CVec b = rng.complex_normal_vector(s.n());
    const double value = b_minus_curvature(s, xi, b);
    const CVec xb = xi * b;
    const double oracle = -(xb.adjoint() * h * xb)(0, 0).real();
    max_value = std::max(max_value, value);
    max_error = std::max(max_error, std::abs(value - oracle) / std::max(1.0, std::abs(oracle)));
    if (xb.norm() > 1e-12 * xi.norm() * b.norm() && !(value < 0)) ++violations;
  }
  const bool ok = violations == 0 && max_error < 1e-12;
  return {Json{{"type", "curvature_scan"},
               {"samples", cfg.samples},
               {"max_value", max_value},
               {"max_oracle_error", max_error},
               {"violations", violations}},
          ok ? kExitOk : kExitNegative};
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("TORUSKIT_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || raw[0] == '-') throw CLI::ValidationError("TORUSKIT_SEED", "not an unsigned integer");
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"toruskit: complex tori, twistor sections and extension classes"};
  app.name("toruskit");
  app.require_subcommand(1, 1);
  Config cfg;

  auto common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--out", cfg.out, "Write the JSON result here instead of standard output");
    if (seeded) sub->add_option("--seed", cfg.seed, "Random seed (default: TORUSKIT_SEED, else 0)");
  };
  auto existing = [&](CLI::App* sub, const char* name, std::string& target, const char* help, bool required) {
    auto* opt = sub->add_option(name, target, help)->check(CLI::ExistingFile);
    if (required) opt->required();
  };

  auto* sample = app.add_subcommand("sample", "Draw a random torus, structure, metric or extension class");
  common(sample, true);
  sample->add_option("--kind", cfg.kind, "torus | structure | twistor-point | metric | ext-class")
      ->required()
      ->check(CLI::IsMember({"torus", "structure", "twistor-point", "metric", "ext-class"}));
  sample->add_option("--n", cfg.n, "Complex dimension");
  sample->add_option("--backend", cfg.backend, "f64 | rational (tori only)")->check(CLI::IsMember({"f64", "rational"}));
  sample->add_option("--ranks", cfg.ranks, "Block ranks for ext-class, e.g. 1,2,1");
  sample->add_flag("--integrable", cfg.integrable, "Draw an unobstructed ext-class");
  existing(sample, "--metric", cfg.metric, "Metric for structures and twistor points (default identity)", false);
  sample->add_option("--orientation", cfg.orientation, "Force the orientation of a structure (1 or -1)")
      ->check(CLI::IsMember({-1, 1}));

  auto* sample_torus = app.add_subcommand("sample-torus", "Draw a random marked torus");
  common(sample_torus, true);
  sample_torus->add_option("--n", cfg.n, "Complex dimension");
  sample_torus->add_option("--backend", cfg.backend, "f64 | rational")->check(CLI::IsMember({"f64", "rational"}));

  auto* check_generic = app.add_subcommand("check-generic", "Search for a subtorus or an integral (p,p) class");
  common(check_generic, true);
  existing(check_generic, "--in", cfg.in, "Torus JSON", true);
  check_generic->add_option("--bound", cfg.bound, "Coefficient bound B");
  check_generic->add_option("--tol", cfg.tol, "Verification tolerance");

  auto* hodge = app.add_subcommand("hodge-type", "Hodge decomposition of a multivector");
  common(hodge, true);
  existing(hodge, "--structure", cfg.structure, "Structure or torus JSON", true);
  existing(hodge, "--form", cfg.form, "Multivector JSON", true);
  hodge->add_option("--tol", cfg.tol, "Purity tolerance");

  auto* conn = app.add_subcommand("connect", "Chain of shared-metric hops between two structures");
  common(conn, true);
  existing(conn, "--i", cfg.i, "Structure or torus JSON", true);
  existing(conn, "--j", cfg.j, "Structure or torus JSON", true);
  conn->add_option("--max-attempts", cfg.max_attempts, "Random middles for the 6-hop fallback");
  conn->add_option("--threads", cfg.threads, "Threads for factorization restarts");
  conn->add_flag("--certify-generic", cfg.certify_generic, "Reject chains with non-generic intermediates");
  conn->add_option("--bound", cfg.bound, "Coefficient bound for --certify-generic");

  auto* section = app.add_subcommand("section", "Section with prescribed values at two twistor points");
  common(section, true);
  existing(section, "--i", cfg.i, "Twistor point or structure JSON", true);
  existing(section, "--j", cfg.j, "Twistor point or structure JSON", true);
  existing(section, "--metric", cfg.metric, "Metric for structure inputs (default identity)", false);
  existing(section, "--wi", cfg.wi, "Value at I (default random)", false);
  existing(section, "--wj", cfg.wj, "Value at J (default random)", false);

  auto* transport = app.add_subcommand("transport", "psi transport from L' to L along sections vanishing at I");
  common(transport, true);
  existing(transport, "--i", cfg.i, "Twistor point or structure JSON", true);
  existing(transport, "--l", cfg.l, "Twistor point or structure JSON", true);
  existing(transport, "--lp", cfg.lp, "Twistor point or structure JSON", true);
  existing(transport, "--metric", cfg.metric, "Metric for structure inputs (default identity)", false);
  existing(transport, "--t", cfg.t, "Value at L' (default random)", false);

  auto* extend = app.add_subcommand("bundle-extend", "Twistor extension of an extension class");
  common(extend, true);
  existing(extend, "--class", cfg.cls, "ExtClass JSON in the frame of J", true);
  existing(extend, "--i", cfg.i, "Twistor point or structure JSON", true);
  existing(extend, "--j", cfg.j, "Twistor point or structure JSON", true);
  existing(extend, "--l", cfg.l, "Twistor point or structure JSON", true);
  existing(extend, "--metric", cfg.metric, "Metric for structure inputs (default identity)", false);

  auto* massey = app.add_subcommand("massey", "Massey iteration for a (0,1)-form");
  common(massey, true);
  existing(massey, "--structure", cfg.structure, "Structure or torus JSON", true);
  existing(massey, "--theta0", cfg.theta0, "Fourier form JSON", true);
  massey->add_option("--mode-bound", cfg.mode_bound, "Fourier truncation M");
  massey->add_option("--tol", cfg.massey_tol, "Stopping and obstruction tolerance");
  massey->add_option("--max-terms", cfg.max_terms, "Maximum number of terms");

  auto* scan = app.add_subcommand("curvature-scan", "Sample the B- curvature form at a twistor point");
  common(scan, true);
  existing(scan, "--point", cfg.point, "Twistor point or structure JSON", true);
  existing(scan, "--metric", cfg.metric, "Metric for structure inputs (default identity)", false);
  scan->add_option("--samples", cfg.samples, "Number of random (xi, b)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "toruskit: " << e.what() << "\n";
    return kExitUsage;
  }

  std::uint64_t seed = 0;
  try {
    if (cfg.seed) {
      seed = *cfg.seed;
    } else if (const auto s = env_seed()) {
      seed = *s;
    }
  } catch (const CLI::ValidationError& e) {
    err << "toruskit: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!cfg.out.empty()) {
    const auto parent = std::filesystem::path(cfg.out).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
      err << "toruskit: output directory '" << parent.string() << "' does not exist\n";
      return kExitUsage;
    }
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Result result;
  try {
    if (name == "sample") result = cmd_sample(cfg, seed, cfg.kind);
    else if (name == "sample-torus") result = cmd_sample(cfg, seed, "torus");
    else if (name == "check-generic") result = cmd_check_generic(cfg);
    else if (name == "hodge-type") result = cmd_hodge_type(cfg);
    else if (name == "connect") result = cmd_connect(cfg, seed);
    else if (name == "section") result = cmd_section(cfg, seed);
    else if (name == "transport") result = cmd_transport(cfg, seed);
    else if (name == "bundle-extend") result = cmd_bundle_extend(cfg);
    else if (name == "massey") result = cmd_massey(cfg);
    else result = cmd_curvature_scan(cfg, seed);
  } catch (const Error& e) {
    err << "toruskit: " << e.what() << "\n";
    result.code = exit_code_for(e.kind());
    result.doc = Json{{"type", "error"}, {"error", error_name(e.kind())}, {"message", e.what()}};
  } catch (const nlohmann::json::exception& e) {
    err << "toruskit: malformed input: " << e.what() << "\n";
    result.code = kExitMalformed;
    result.doc = Json{{"type", "error"}, {"error", "InvalidInput"}, {"message", e.what()}};
  }
  result.doc["seed"] = seed;
  result.doc["exit_code"] = result.code;

  const std::string text = result.doc.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "toruskit: cannot write '" << cfg.out << "'\n";
      return kExitUsage;
    }
    file << text;
  }
  return result.code;
}

}  // namespace toruskit
