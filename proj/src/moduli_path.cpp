#include "toruskit/moduli_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "toruskit/hodge.hpp"
#include "toruskit/optimize.hpp"
#include "toruskit/random.hpp"

namespace toruskit {

namespace {

Mat cayley(const Mat& s) {
  const int d = static_cast<int>(s.rows());
  const Mat id = Mat::Identity(d, d);
  return (id - 0.5 * s).partialPivLu().solve(id + 0.5 * s);
}

Mat skew_from_params(const Vec& params, int d) {
  Mat s = Mat::Zero(d, d);
  int k = 0;
  for (int p = 0; p < d; ++p)
    for (int q = p + 1; q < d; ++q, ++k) {
      s(p, q) = params(k);
      s(q, p) = -params(k);
    }
  return s;
}

// Diagonal of the paired matrix diag(a1, a1, ..., an, an).
Vec doubled(const Vec& a) {
  Vec out(2 * a.size());
  for (int k = 0; k < a.size(); ++k) out(2 * k) = out(2 * k + 1) = a(k);
  return out;
}

// Scale-free objective: the absolute defect can be driven down by shrinking
// one pair toward zero, which degenerates X.
double log_defect(const Mat& x, const Mat& h) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(h, x, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Vec& lambda = es.eigenvalues();
  if (!(lambda(0) > 0)) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (int k = 0; k + 1 < lambda.size(); k += 2) {
    const double r = std::log(lambda(k + 1) / lambda(k));
    s += r * r;
  }
  return s;
}

struct Candidate {
  Mat w;  // orthogonal
  Vec a;  // a(0) = 1
  Mat x() const { return w * doubled(a).asDiagonal() * w.transpose(); }
};

// Gauss-Newton on the smooth 2x2-block residuals of each eigenvalue pair,
// retracting onto orthogonal W through the Cayley map.
Candidate polish(Candidate c, const Mat& h, int max_iter) {
  const int d = static_cast<int>(h.rows());
  const int n = d / 2;
  const int n_skew = d * (d - 1) / 2;
  const int n_params = n_skew + n - 1;
  double current = log_defect(c.x(), h);
  double mu = 1e-10;
  for (int iter = 0; iter < max_iter && current > 1e-30; ++iter) {
    const Mat x = c.x();
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(h, x);
    const Vec lambda = es.eigenvalues();
    const Mat u = c.w.transpose() * es.eigenvectors();
    const Vec dd = doubled(c.a);

    Mat jac(2 * n, n_params);
    Vec r(2 * n);
    for (int i = 0; i < n; ++i) {
      const int a = 2 * i, b = 2 * i + 1;
      r(2 * i) = std::log(lambda(a) / lambda(b));
      r(2 * i + 1) = 0.0;
      int k = 0;
      for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q, ++k) {
          const double f = dd(q) - dd(p);
          const double daa = 2 * f * u(p, a) * u(q, a);
          const double dbb = 2 * f * u(p, b) * u(q, b);
          const double dab = f * (u(p, a) * u(q, b) + u(q, a) * u(p, b));
          jac(2 * i, k) = dbb - daa;
          jac(2 * i + 1, k) = -2 * dab;
        }
      for (int m = 1; m < n; ++m) {
        const int p = 2 * m, q = 2 * m + 1;
        const double am = c.a(m);
        const double daa = am * (u(p, a) * u(p, a) + u(q, a) * u(q, a));
        const double dbb = am * (u(p, b) * u(p, b) + u(q, b) * u(q, b));
        const double dab = am * (u(p, a) * u(p, b) + u(q, a) * u(q, b));
        jac(2 * i, n_skew + m - 1) = dbb - daa;
        jac(2 * i + 1, n_skew + m - 1) = -2 * dab;
      }
    }
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      const Mat jjt = jac * jac.transpose() + mu * Mat::Identity(2 * n, 2 * n);
      const Vec step = -jac.transpose() * jjt.ldlt().solve(r);
      Candidate next{c.w * cayley(skew_from_params(step.head(n_skew), d)), c.a};
      for (int m = 1; m < n; ++m) next.a(m) *= std::exp(step(n_skew + m - 1));
      const double value = log_defect(next.x(), h);
      if (std::isfinite(value) && value < current) {
        c = next;
        current = value;
        mu = std::max(mu * 0.1, 1e-16);
        improved = true;
      } else {
        mu *= 10;
      }
    }
    if (!improved) break;
  }
  return c;
}

struct RestartOutcome {
  Mat x;
  double score = std::numeric_limits<double>::infinity();  // log_defect
  double defect = std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

RestartOutcome run_restart(const Mat& h, const FactorizeOptions& opts, int r) {
  const int d = static_cast<int>(h.rows());
  const int n = d / 2;
  Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
  const Mat q0 = haar_orthogonal(d, rng);
  const int n_skew = d * (d - 1) / 2;
  Vec x0 = Vec::Zero(n_skew + n - 1);
  // Start the free scales near the spread of h's spectrum.
  Eigen::SelfAdjointEigenSolver<Mat> hs(h, Eigen::EigenvaluesOnly);
  const double spread = 0.5 * std::log(hs.eigenvalues()(d - 1) / hs.eigenvalues()(0));
  for (int m = 1; m < n; ++m) x0(n_skew + m - 1) = rng.uniform(-spread, spread);

  auto build = [&](const Vec& theta) {
    Candidate c{q0 * cayley(skew_from_params(theta.head(n_skew), d)), Vec::Ones(n)};
    for (int m = 1; m < n; ++m) c.a(m) = std::exp(theta(n_skew + m - 1));
    return c;
  };
  const int budget = std::max(1, opts.max_evaluations / std::max(1, opts.restarts));
  const SimplexResult simplex = nelder_mead(
      [&](const Vec& theta) { return log_defect(build(theta).x(), h); }, x0, 0.3, budget,
      1e-30);
  Candidate best = build(simplex.x);
  if (opts.polish) best = polish(best, h, 100);
  RestartOutcome out;
  out.x = best.x();
  out.score = log_defect(out.x, h);
  out.defect = pairing_defect(out.x, h);
  out.evaluations = simplex.evaluations;
  return out;
}

void orient_pair(Mat& p, int a, int b) {
  // Flip the second vector so that the 2x2 minor of largest magnitude is positive.
  const int d = static_cast<int>(p.rows());
  double best = 0.0, sign = 1.0;
  for (int r1 = 0; r1 < d; ++r1)
    for (int r2 = r1 + 1; r2 < d; ++r2) {
      const double m = p(r1, a) * p(r2, b) - p(r2, a) * p(r1, b);
      if (std::abs(m) > best + 1e-12) {
        best = std::abs(m);
        sign = m > 0 ? 1.0 : -1.0;
      }
    }
  if (sign < 0) p.col(b) *= -1.0;
}

double chain_hop_residual(const ComplexStructure& a, const ComplexStructure& b, const Metric& g) {
  const Mat& m = g.matrix();
  const double gn = m.norm();
  auto compat = [&](const Mat& j) { return (j.transpose() * m * j - m).norm() / gn; };
  auto square = [](const Mat& j) {
    const int d = static_cast<int>(j.rows());
    return (j * j + Mat::Identity(d, d)).norm() / std::sqrt(static_cast<double>(d));
  };
  if (g.min_eigenvalue() <= 0) return std::numeric_limits<double>::infinity();
  return std::max({compat(a.matrix()), compat(b.matrix()), square(a.matrix()), square(b.matrix())});
}

// A random metric compatible with j: the j-average of a random SPD matrix.
Metric random_compatible_metric(const ComplexStructure& j, Rng& rng) {
  const Mat m = random_spd(j.dim(), 10.0, rng);
  return Metric(symmetrize(0.5 * (m + j.matrix().transpose() * m * j.matrix())));
}

// Strategy (b). The metrics compatible with each endpoint are not unique and
// pair factorization is not always solvable, so later attempts draw them at random.
std::optional<Chain> three_hop(const ComplexStructure& i, const ComplexStructure& j,
                               const FactorizeOptions& fopts, int metric_attempts) {
  Rng rng(derive_seed(fopts.seed, 17));
  for (int attempt = 0; attempt < metric_attempts; ++attempt) {
    const Metric g = attempt == 0 ? compatible_metric(i) : random_compatible_metric(i, rng);
    const Metric h = attempt == 0 ? compatible_metric(j) : random_compatible_metric(j, rng);
    FactorizeOptions o = fopts;
    o.seed = derive_seed(fopts.seed, static_cast<std::uint64_t>(attempt));
    try {
      const FactorizationResult fr = pair_factorize(g, h, o);
      const Metric g1(symmetrize(fr.g1));
      Chain c;
      c.structures = {i, common_structure_from_metrics(g, g1), common_structure_from_metrics(g1, h), j};
      c.metrics = {g, g1, h};
      c.strategy = "three-hop";
      if (verify_chain(c).pass) return c;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

bool intermediates_generic(const Chain& c, int bound) {
  for (std::size_t k = 1; k + 1 < c.structures.size(); ++k) {
    const GenericityReport r = is_generic(torus_from_structure(c.structures[k]), {bound, 1e-7});
    if (r.verdict == Verdict::NonGeneric) return false;
  }
  return true;
}

}  // namespace

std::optional<Pairing> paired_eigenvalues(const Metric& g, const Metric& g1, double tol) {
  if (g.dim() != g1.dim() || g.dim() % 2 != 0) throw InvalidInput("metrics must share an even dimension");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(g1.matrix(), g.matrix());
  const Vec lambda = es.eigenvalues();
  Pairing out;
  for (int k = 0; k + 1 < lambda.size(); k += 2) {
    const double gap = std::abs(lambda(k + 1) - lambda(k));
    if (gap > tol * std::max(std::abs(lambda(k)), std::abs(lambda(k + 1)))) return std::nullopt;
    out.matching.emplace_back(k + 1, k + 2);
  }
  out.eigenvalues = lambda;
  out.basis = es.eigenvectors();
  return out;
}

ComplexStructure common_structure_from_metrics(const Metric& g, const Metric& g1, double tol) {
  const auto pairing = paired_eigenvalues(g, g1, tol);
  if (!pairing) throw NotPaired("eigenvalues of the metric ratio do not occur in pairs");
  Mat p = pairing->basis;
  const int d = static_cast<int>(p.rows());
  Mat block = Mat::Zero(d, d);
  for (const auto& [a, b] : pairing->matching) {
    orient_pair(p, a - 1, b - 1);
    block(a - 1, b - 1) = 1;
    block(b - 1, a - 1) = -1;
  }
  // P^T g P = Id, so P^{-1} = P^T g.
  return ComplexStructure(p * block * p.transpose() * g.matrix());
}

std::optional<Metric> common_metric(const ComplexStructure& i, const ComplexStructure& j,
                                    const CommonMetricOptions& opts) {
  const int d = i.dim();
  if (j.dim() != d) throw InvalidInput("structures have different dimensions");
  std::vector<Mat> sym;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Mat e = Mat::Zero(d, d);
      if (a == b) {
        e(a, a) = 1;
      } else {
        e(a, b) = e(b, a) = 1.0 / std::sqrt(2.0);
      }
      sym.push_back(e);
    }
  const int m = static_cast<int>(sym.size());
  Mat constraint(2 * d * d, m);
  for (int k = 0; k < m; ++k) {
    const Mat ci = i.matrix().transpose() * sym[k] * i.matrix() - sym[k];
    const Mat cj = j.matrix().transpose() * sym[k] * j.matrix() - sym[k];
    constraint.col(k) << Eigen::Map<const Vec>(ci.data(), d * d), Eigen::Map<const Vec>(cj.data(), d * d);
  }
  const Mat kernel = null_space(constraint, 1e-10);
  if (kernel.cols() == 0) return std::nullopt;

  std::vector<Mat> basis;
  for (int c = 0; c < kernel.cols(); ++c) {
    Mat b = Mat::Zero(d, d);
    for (int k = 0; k < m; ++k) b += kernel(k, c) * sym[k];
    basis.push_back(b);
  }
  auto project_subspace = [&](const Mat& x) {
    Mat out = Mat::Zero(d, d);
    for (const auto& b : basis) out += (x.cwiseProduct(b)).sum() * b;
    return out;
  };
  const Mat t = project_subspace(Mat::Identity(d, d));
  const double t2 = t.squaredNorm();
  if (t2 < 1e-14) return std::nullopt;
  auto project_affine = [&](const Mat& x) {
    const Mat s = project_subspace(x);
    return Mat(s + (1.0 - s.trace()) / t2 * t);
  };
  auto min_eig = [](const Mat& x) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };

  Mat x = project_affine(Mat::Identity(d, d) / d);
  if (min_eig(x) > opts.min_eigenvalue) return Metric(symmetrize(x * d));
  const double levels[] = {0.5, 0.1, 0.02, 0.005, 0.001};
  const int per_level = std::max(1, opts.max_iterations / 5);
  for (double level : levels) {
    const double floor_value = level / d;
    Mat p = Mat::Zero(d, d), q = Mat::Zero(d, d);
    for (int it = 0; it < per_level; ++it) {
      Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(x + p));
      const Vec clamped = es.eigenvalues().cwiseMax(floor_value);
      const Mat y = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
      p = x + p - y;
      const Mat next = project_affine(y + q);
      q = y + q - next;
      x = next;
      if (min_eig(x) > opts.min_eigenvalue) return Metric(symmetrize(x * d));
    }
  }
  return std::nullopt;
}

double pairing_defect(const Mat& x, const Mat& h) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(h, x, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Vec& lambda = es.eigenvalues();
  double s = 0.0;
  for (int k = 0; k + 1 < lambda.size(); k += 2) s += (lambda(k) - lambda(k + 1)) * (lambda(k) - lambda(k + 1));
  return s;
}

std::optional<Vec> cyclic_closed_form(const Vec& d, double rel_tol) {
  const int n = static_cast<int>(d.size()) / 2;
  if (n == 0 || d.size() != 2 * n) throw InvalidInput("diagonal must have even length");
  // Ratios d_{2k}/a_k = d_{2k+1}/a_{k+1} chain the pairs; closing the cycle
  // requires d_{2n}/a_n = d_1/a_1.
  Vec a(n);
  a(0) = 1.0;
  for (int k = 0; k + 1 < n; ++k) a(k + 1) = a(k) * d(2 * k + 2) / d(2 * k + 1);
  const double closing = d(2 * n - 1) / a(n - 1);
  if (std::abs(closing - d(0)) > rel_tol * std::abs(d(0))) return std::nullopt;
  return a;
}

FactorizationResult pair_factorize(const Metric& g, const Metric& h, const FactorizeOptions& opts) {
  const int d = g.dim();
  if (h.dim() != d || d % 2 != 0) throw InvalidInput("metrics must share an even dimension");
  const Mat l = Eigen::LLT<Mat>(g.matrix()).matrixL();
  const Mat l_inv = l.triangularView<Eigen::Lower>().solve(Mat::Identity(d, d));
  const Mat ht = symmetrize(l_inv * h.matrix() * l_inv.transpose());
  auto finish = [&](const Mat& x, double defect, int evals, int restart) {
    FactorizationResult r;
    r.g1 = symmetrize(l * x * l.transpose());
    r.defect = defect;
    r.evaluations = evals;
    r.restart = restart;
    return r;
  };

  const Mat off = ht - Mat(ht.diagonal().asDiagonal());
  if (opts.closed_form && off.norm() <= 1e-12 * ht.norm()) {
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Vec dp(d);
      for (int k = 0; k < d; ++k) dp(k) = ht(perm[k], perm[k]);
      if (const auto a = cyclic_closed_form(dp)) {
        const Vec x_diag = doubled(*a);
        Mat x = Mat::Zero(d, d);
        for (int k = 0; k < d; ++k) x(perm[k], perm[k]) = x_diag(k);
        const double defect = pairing_defect(x, ht);
        if (defect <= opts.tol) return finish(x, defect, 0, -1);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  const int restarts = std::max(1, opts.restarts);
  std::vector<RestartOutcome> outcomes(restarts);
  const int threads = std::max(1, std::min(opts.threads, restarts));
  if (threads == 1) {
    for (int r = 0; r < restarts; ++r) outcomes[r] = run_restart(ht, opts, r);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int r = t; r < restarts; r += threads) outcomes[r] = run_restart(ht, opts, r);
      });
    for (auto& th : pool) th.join();
  }
  int best = 0, evals = 0;
  for (int r = 0; r < restarts; ++r) {
    evals += outcomes[r].evaluations;
    if (outcomes[r].score < outcomes[best].score) best = r;
  }
  const RestartOutcome& win = outcomes[best];
  const Mat g1 = symmetrize(l * win.x * l.transpose());
  const bool paired = win.defect <= opts.tol && paired_eigenvalues(g, Metric(g1)) && paired_eigenvalues(Metric(g1), h);
  if (!paired) {
    throw FactorizationFailed("best pairing defect " + std::to_string(win.defect) + " after " +
                                  std::to_string(evals) + " evaluations",
                              g1, win.defect);
  }
  return finish(win.x, win.defect, evals, best);
}

ChainReport verify_chain(const Chain& c, double tol) {
  ChainReport report;
  if (c.structures.size() != c.metrics.size() + 1) {
    report.max_residual = std::numeric_limits<double>::infinity();
    return report;
  }
  for (std::size_t k = 0; k < c.metrics.size(); ++k) {
    const double r = chain_hop_residual(c.structures[k], c.structures[k + 1], c.metrics[k]);
    report.hop_residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  report.pass = report.max_residual < tol;
  return report;
}

Chain connect(const ComplexStructure& i, const ComplexStructure& j, const ConnectOptions& opts) {
  if (i.dim() != j.dim()) throw InvalidInput("structures have different dimensions");
  auto accept = [&](const Chain& c) {
    return verify_chain(c).pass && (!opts.certify_generic || intermediates_generic(c, opts.generic_bound));
  };
  if ((i.matrix() - j.matrix()).norm() <= 1e-12 * i.matrix().norm()) {
    Chain c;
    c.structures = {i};
    c.strategy = "identical";
    return c;
  }
  if (const auto g = common_metric(i, j)) {
    Chain c;
    c.structures = {i, j};
    c.metrics = {*g};
    c.strategy = "direct";
    if (verify_chain(c).pass) return c;
  }
  FactorizeOptions fopts = opts.factorize;
  fopts.seed = derive_seed(opts.seed, 0);
  if (const auto c = three_hop(i, j, fopts, opts.metric_attempts); c && accept(*c)) return *c;

  const int d = i.dim();
  for (int attempt = 1; attempt <= opts.max_attempts; ++attempt) {
    Rng rng(derive_seed(opts.seed, 100 + static_cast<std::uint64_t>(attempt)));
    const Metric gm(random_spd(d, 10.0, rng));
    const ComplexStructure middle = random_structure(gm, rng.next());
    fopts.seed = derive_seed(opts.seed, 200 + static_cast<std::uint64_t>(attempt));
    const auto first = three_hop(i, middle, fopts, opts.metric_attempts);
    if (!first) continue;
    fopts.seed = derive_seed(opts.seed, 300 + static_cast<std::uint64_t>(attempt));
    const auto second = three_hop(middle, j, fopts, opts.metric_attempts);
    if (!second) continue;
    Chain c = *first;
    c.structures.insert(c.structures.end(), second->structures.begin() + 1, second->structures.end());
    c.metrics.insert(c.metrics.end(), second->metrics.begin(), second->metrics.end());
    c.strategy = "six-hop";
    if (accept(c)) return c;
  }
  throw ChainNotFound("no chain of at most 6 hops after " + std::to_string(opts.max_attempts) +
                      " random middles");
}

}  // namespace toruskit
