#include "homc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "homc/parallel.hpp"
#include "homc/rng.hpp"

namespace homc {

std::string case_label(QuadraticCase c) {
  switch (c) {
    case QuadraticCase::case1: return "1";
    case QuadraticCase::case2: return "2";
    case QuadraticCase::case3: return "3";
    case QuadraticCase::case4a: return "4a";
    case QuadraticCase::case4b: return "4b";
  }
  return "?";
}

namespace {

void check_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string("solve_quadratic_2x2: ") + name + " outside [0, 1]");
  }
}

SolutionSet finite_set(std::vector<double> roots, QuadraticCase c) {
  for (double& r : roots) {
    if (std::abs(r) <= 5e-13) r = 0.0;
    if (std::abs(r - 1.0) <= 5e-13) r = 1.0;
    if (r < 0.0) r = 0.0;
    if (r > 1.0) r = 1.0;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
              roots.end());
  SolutionSet s;
  s.kind = SolutionSet::Kind::finite;
  s.roots = std::move(roots);
  s.case_label = c;
  return s;
}

SolutionSet interval_set() {
  SolutionSet s;
  s.kind = SolutionSet::Kind::interval_all;
  s.case_label = QuadraticCase::case1;
  return s;
}

/// [0,1]-root of A x^2 + B x + C picked by the case-4 formula
/// (2b2+1-a2-b1-sqrt(D)) / (2A), evaluated cancellation-free.
double quadratic_case4_root(double A, double neg_b, double C, double disc) {
  const double sqrt_d = std::sqrt(disc > 0.0 ? disc : 0.0);
  if (neg_b >= 0.0) {
    const double den = neg_b + sqrt_d;
    return den == 0.0 ? 0.0 : 2.0 * C / den;
  }
  return (neg_b - sqrt_d) / (2.0 * A);
}

}  // namespace

SolutionSet solve_quadratic_2x2(double a1, double a2, double b1, double b2, double eq_tol) {
  check_unit_interval(a1, "a1");
  check_unit_interval(a2, "a2");
  check_unit_interval(b1, "b1");
  check_unit_interval(b2, "b2");

  const double A = a1 - a2 - b1 + b2;
  const double neg_b = 2.0 * b2 + 1.0 - a2 - b1;  // -(linear coefficient)
  const double sum = a2 + b1;

  const bool a1_is_one = std::abs(a1 - 1.0) <= eq_tol;
  const bool b2_is_zero = std::abs(b2) <= eq_tol;

  if (a1_is_one && std::abs(sum - 1.0) <= eq_tol && b2_is_zero) return interval_set();
  if (a1_is_one && sum < 1.0 - eq_tol) {
    return finite_set({b2 / (b2 + 1.0 - sum), 1.0}, QuadraticCase::case2);
  }
  if (b2_is_zero && sum >= 1.0 - eq_tol && a1 < 1.0 - eq_tol) {
    return finite_set({0.0, (sum - 1.0 > 0.0 ? sum - 1.0 : 0.0) / (sum - a1)},
                      QuadraticCase::case3);
  }
  // g(0) = b2 and g(1) = a1 - 1, so those endpoint roots exist whenever the
  // parameter equalities hold, even in the residual branch: at the corner
  // a1 = 1, b2 = 0, a2 + b1 > 1 both endpoints solve and the generic
  // single-root formula would miss one.
  std::vector<double> roots;
  if (b2_is_zero) roots.push_back(0.0);
  if (a1_is_one) roots.push_back(1.0);
  if (std::abs(A) <= eq_tol) {
    if (std::abs(neg_b) <= eq_tol) return interval_set();  // g collapses entirely
    roots.push_back(b2 / neg_b);
    return finite_set(std::move(roots), QuadraticCase::case4a);
  }
  const double disc = (1.0 - sum) * (1.0 - sum) + 4.0 * b2 * (1.0 - a1);
  roots.push_back(quadratic_case4_root(A, neg_b, b2, disc));
  return finite_set(std::move(roots), QuadraticCase::case4b);
}

SolutionSet solve_quadratic_2x2(const Rational& a1, const Rational& a2, const Rational& b1,
                                const Rational& b2) {
  const Rational zero(0);
  const Rational one(1);
  for (const Rational* p : {&a1, &a2, &b1, &b2}) {
    if (*p < zero || one < *p) {
      throw std::invalid_argument("solve_quadratic_2x2: parameter outside [0, 1]");
    }
  }
  const Rational A = a1 - a2 - b1 + b2;
  const Rational sum = a2 + b1;
  const Rational neg_b = Rational(2) * b2 + one - sum;

  if (a1 == one && sum == one && b2 == zero) return interval_set();
  if (a1 == one && sum < one) {
    return finite_set({(b2 / (b2 + one - sum)).to_double(), 1.0}, QuadraticCase::case2);
  }
  if (b2 == zero && !(sum < one) && a1 < one) {
    return finite_set({0.0, ((sum - one) / (sum - a1)).to_double()}, QuadraticCase::case3);
  }
  std::vector<double> roots;
  if (b2 == zero) roots.push_back(0.0);
  if (a1 == one) roots.push_back(1.0);
  if (A == zero) {
    if (neg_b == zero) return interval_set();
    roots.push_back((b2 / neg_b).to_double());
    return finite_set(std::move(roots), QuadraticCase::case4a);
  }
  const Rational disc = (one - sum) * (one - sum) + Rational(4) * b2 * (one - a1);
  roots.push_back(
      quadratic_case4_root(A.to_double(), neg_b.to_double(), b2.to_double(), disc.to_double()));
  return finite_set(std::move(roots), QuadraticCase::case4b);
}

namespace {

void renormalize(std::vector<double>& x) {
  double sum = 0.0;
  for (double& v : x) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(x.size()));
    return;
  }
  for (double& v : x) v /= sum;
}

double residual_of(std::span<const double> out, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(out[i] - x[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

IterateResult iterate_raw(const TransitionTensor<double>& P, std::vector<double> x,
                          const IterateOptions& opts, ApplyWorkspace& ws) {
  IterateResult result;
  apply_into(P, x, ws);
  double res = residual_of(ws.out, x);
  int it = 0;
  while (res > opts.tol && it < opts.max_iter) {
    ++it;
    const double d = opts.damping;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = (1.0 - d) * ws.out[i] + d * x[i];
    }
    renormalize(x);
    apply_into(P, x, ws);
    res = residual_of(ws.out, x);
  }
  result.point = std::move(x);
  result.residual = res;
  result.iterations = it;
  result.converged = res <= opts.tol;
  return result;
}

/// Jacobian of x -> P x^(m), row-major n x n.
void jacobian_into(const TransitionTensor<double>& P, std::span<const double> x,
                   std::vector<double>& J, std::vector<int>& digits, std::vector<double>& pre,
                   std::vector<double>& suf) {
  const int n = P.states();
  const int m = P.order();
  J.assign(static_cast<std::size_t>(n) * n, 0.0);
  digits.resize(static_cast<std::size_t>(m));
  pre.resize(static_cast<std::size_t>(m) + 1);
  suf.resize(static_cast<std::size_t>(m) + 1);
  const double* data = P.data().data();
  for (std::int64_t c = 0; c < P.columns(); ++c) {
    decode_column(c, n, m, digits);
    pre[0] = 1.0;
    for (int t = 0; t < m; ++t) pre[static_cast<std::size_t>(t) + 1] = pre[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(digits[static_cast<std::size_t>(t)])];
    suf[static_cast<std::size_t>(m)] = 1.0;
    for (int t = m - 1; t >= 0; --t) suf[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(digits[static_cast<std::size_t>(t)])] * suf[static_cast<std::size_t>(t) + 1];
    const double* col = data + c * n;
    for (int s = 0; s < m; ++s) {
      const double w = pre[static_cast<std::size_t>(s)] * suf[static_cast<std::size_t>(s) + 1];
      if (w == 0.0) continue;
      const int j = digits[static_cast<std::size_t>(s)];
      double* Jrow = J.data() + j;  // column j, strided writes
      for (int r = 0; r < n; ++r) Jrow[static_cast<std::size_t>(r) * n] += col[r] * w;
    }
  }
}

/// Solves M d = rhs in place by Gaussian elimination with partial pivoting.
/// Returns false when a pivot is negligible (singular system).
bool solve_linear(std::vector<double>& M, std::vector<double>& rhs, int n) {
  double scale = 0.0;
  for (double v : M) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  const double tiny = 1e-12 * scale;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(M[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)]) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(M[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]) * n + k]);
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best <= tiny) return false;
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pivot)]);
    const int pk = perm[static_cast<std::size_t>(k)];
    const double pivval = M[static_cast<std::size_t>(pk) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const int pi = perm[static_cast<std::size_t>(i)];
      const double f = M[static_cast<std::size_t>(pi) * n + k] / pivval;
      if (f == 0.0) continue;
      M[static_cast<std::size_t>(pi) * n + k] = 0.0;
      for (int j = k + 1; j < n; ++j) M[static_cast<std::size_t>(pi) * n + j] -= f * M[static_cast<std::size_t>(pk) * n + j];
      rhs[static_cast<std::size_t>(pi)] -= f * rhs[static_cast<std::size_t>(pk)];
    }
  }
  std::vector<double> sol(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    const int pk = perm[static_cast<std::size_t>(k)];
    double v = rhs[static_cast<std::size_t>(pk)];
    for (int j = k + 1; j < n; ++j) v -= M[static_cast<std::size_t>(pk) * n + j] * sol[static_cast<std::size_t>(j)];
    sol[static_cast<std::size_t>(k)] = v / M[static_cast<std::size_t>(pk) * n + k];
  }
  rhs = std::move(sol);
  return true;
}

}  // namespace

IterateResult fixed_point_iterate(const TransitionTensor<double>& P,
                                  const ProbabilityVector<double>& x0,
                                  const IterateOptions& opts) {
  if (x0.size() != P.states()) throw std::invalid_argument("fixed_point_iterate: dimension mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("fixed_point_iterate: need tol > 0");
  if (!(opts.damping >= 0.0 && opts.damping < 1.0)) {
    throw std::invalid_argument("fixed_point_iterate: damping outside [0, 1)");
  }
  ApplyWorkspace ws;
  return iterate_raw(P, x0.entries(), opts, ws);
}

bool newton_polish(const TransitionTensor<double>& P, std::vector<double>& x, double tol,
                   int max_steps) {
  const int n = P.states();
  ApplyWorkspace ws;
  std::vector<double> J, pre, suf, M, rhs;
  std::vector<int> digits;
  double res = residual_into(P, x, ws);
  std::vector<double> best = x;
  double best_res = res;
  for (int step = 0; step < max_steps && res > tol; ++step) {
    jacobian_into(P, x, J, digits, pre, suf);
    M = J;
    for (int i = 0; i < n; ++i) M[static_cast<std::size_t>(i) * n + i] -= 1.0;
    rhs.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) rhs[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - ws.out[static_cast<std::size_t>(i)];
    if (!solve_linear(M, rhs, n)) break;  // singular: fixed point not isolated
    bool left_simplex = false;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] += rhs[static_cast<std::size_t>(i)];
      if (x[static_cast<std::size_t>(i)] < -1e-6) left_simplex = true;
    }
    if (left_simplex) break;
    renormalize(x);
    res = residual_into(P, x, ws);
    if (res < best_res) {
      best = x;
      best_res = res;
    } else if (res > 10.0 * best_res + tol) {
      break;  // diverging
    }
  }
  x = best;
  return best_res <= tol;
}

SolveReport multi_start_solve(const TransitionTensor<double>& P, const SolveOptions& opts) {
  if (opts.restarts < 1) throw std::invalid_argument("multi_start_solve: need restarts >= 1");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("multi_start_solve: need tol > 0");
  const int n = P.states();
  const IterateOptions iopts{opts.tol, opts.max_iter, opts.damping};

  struct StartOutcome {
    std::vector<double> point;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
  };
  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));

  parallel_chunks(0, opts.restarts, 0, [&](unsigned, std::int64_t lo, std::int64_t hi) {
    ApplyWorkspace ws;
    for (std::int64_t s = lo; s < hi; ++s) {
      std::vector<double> x0;
      if (s < n) {
        x0.assign(static_cast<std::size_t>(n), 0.0);
        x0[static_cast<std::size_t>(s)] = 1.0;
      } else if (s == n) {
        x0.assign(static_cast<std::size_t>(n), 1.0 / n);
      } else {
        Rng rng = Rng::derive(opts.seed, static_cast<std::uint64_t>(s));
        x0 = sample_simplex(rng, n);
      }
      IterateResult r = iterate_raw(P, std::move(x0), iopts, ws);
      outcomes[static_cast<std::size_t>(s)] = {std::move(r.point), r.residual, r.iterations,
                                               r.converged};
    }
  });

  SolveReport report;
  report.seed = opts.seed;
  report.total_starts = opts.restarts;
  report.iterations.reserve(static_cast<std::size_t>(opts.restarts));

  struct Cluster {
    std::vector<double> rep;
    double res;
  };
  std::vector<Cluster> clusters;
  for (const StartOutcome& o : outcomes) {
    report.iterations.push_back(o.iterations);
    if (!o.converged) continue;
    ++report.converged_starts;
    bool joined = false;
    for (Cluster& cl : clusters) {
      if (residual_of(cl.rep, o.point) <= opts.cluster_radius) {
        if (o.residual < cl.res) {
          cl.rep = o.point;
          cl.res = o.residual;
        }
        joined = true;
        break;
      }
    }
    if (!joined) clusters.push_back({o.point, o.residual});
  }
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    return std::lexicographical_compare(a.rep.begin(), a.rep.end(), b.rep.begin(), b.rep.end());
  });
  ApplyWorkspace ws;
  for (Cluster& cl : clusters) {
    report.residuals.push_back(residual_into(P, cl.rep, ws));
    report.points.emplace_back(std::move(cl.rep), 1e-9);
  }
  return report;
}

std::int64_t simplex_lattice_size(int n, int resolution) {
  if (n < 1 || resolution < 1) {
    throw std::invalid_argument("simplex_lattice_size: need n >= 1 and resolution >= 1");
  }
  // C(resolution + n - 1, n - 1)
  __int128 acc = 1;
  for (int i = 1; i <= n - 1; ++i) {
    acc = acc * (resolution + i) / i;  // exact: product of i consecutive integers / i!
    if (acc > static_cast<__int128>(4e18)) {
      throw std::invalid_argument("simplex_lattice_size: grid too large");
    }
  }
  return static_cast<std::int64_t>(acc);
}

namespace {

/// Lexicographically ascending enumeration of compositions of r into n parts.
bool next_composition(std::vector<int>& c) {
  const int n = static_cast<int>(c.size());
  int tail = 0;
  for (int i = n - 1; i >= 1; --i) {
    tail += c[static_cast<std::size_t>(i)];
    if (tail > 0) {
      c[static_cast<std::size_t>(i - 1)] += 1;
      for (int j = i; j < n; ++j) c[static_cast<std::size_t>(j)] = 0;
      c[static_cast<std::size_t>(n - 1)] = tail - 1;
      return true;
    }
  }
  return false;
}

std::int64_t compositions_count(int r, int parts) {
  // C(r + parts - 1, parts - 1), defined for r >= 0
  if (parts == 0) return r == 0 ? 1 : 0;
  __int128 acc = 1;
  for (int i = 1; i <= parts - 1; ++i) acc = acc * (r + i) / i;
  return static_cast<std::int64_t>(acc);
}

void composition_unrank(std::int64_t t, int r, int n, std::vector<int>& out) {
  out.assign(static_cast<std::size_t>(n), 0);
  int rem = r;
  for (int pos = 0; pos < n - 1; ++pos) {
    for (int v = 0; v <= rem; ++v) {
      const std::int64_t cnt = compositions_count(rem - v, n - pos - 1);
      if (t < cnt) {
        out[static_cast<std::size_t>(pos)] = v;
        rem -= v;
        break;
      }
      t -= cnt;
    }
  }
  out[static_cast<std::size_t>(n - 1)] = rem;
}

/// Rounds y*r onto the integer lattice preserving the total (largest
/// remainder method).
void lattice_round(std::span<const double> y, int r, std::vector<int>& out) {
  const int n = static_cast<int>(y.size());
  out.resize(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> frac(static_cast<std::size_t>(n));
  int total = 0;
  for (int i = 0; i < n; ++i) {
    double t = y[static_cast<std::size_t>(i)] * r;
    if (t < 0.0) t = 0.0;
    const double fl = std::floor(t);
    out[static_cast<std::size_t>(i)] = static_cast<int>(fl);
    total += static_cast<int>(fl);
    frac[static_cast<std::size_t>(i)] = {t - fl, i};
  }
  int missing = r - total;
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int i = 0; missing > 0 && i < n; ++i, --missing) {
    ++out[static_cast<std::size_t>(frac[static_cast<std::size_t>(i)].second)];
  }
}

}  // namespace

std::vector<ProbabilityVector<double>> enumerate_stationary_grid(
    const TransitionTensor<double>& P, const GridOptions& opts) {
  if (opts.resolution < 1) {
    throw std::invalid_argument("enumerate_stationary_grid: need resolution >= 1");
  }
  const int n = P.states();
  const int m = P.order();
  const int r = opts.resolution;
  const std::int64_t total = simplex_lattice_size(n, r);
  if (total > 200'000'000) {
    throw std::invalid_argument("enumerate_stationary_grid: lattice of " + std::to_string(total) +
                                " points exceeds capacity");
  }
  // The chain map moves max-norm by at most (m n + 1) times a lattice step
  // (its l1 Lipschitz constant on the simplex is m), so any stationary
  // point leaves a lattice neighbor under this residual threshold: the
  // candidate stage provably cannot miss one.
  const double coarse = opts.coarse_threshold > 0.0
                            ? opts.coarse_threshold
                            : std::max((m * n + 2.0) / r, 1e3 * opts.refine_tol);

  const unsigned threads =
      opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  struct ChunkOut {
    std::vector<int> exact;      // concatenated lattice coordinates
    std::vector<int> candidate;  // concatenated lattice coordinates
  };
  std::vector<ChunkOut> chunk_out(threads);

  parallel_chunks(0, total, threads, [&](unsigned chunk, std::int64_t lo, std::int64_t hi) {
    ChunkOut& out = chunk_out[chunk];
    ApplyWorkspace ws;
    std::vector<int> coords;
    composition_unrank(lo, r, n, coords);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::int64_t t = lo; t < hi; ++t) {
      for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>(coords[static_cast<std::size_t>(i)]) / r;
      const double res = residual_into(P, x, ws);
      if (res <= opts.refine_tol) {
        out.exact.insert(out.exact.end(), coords.begin(), coords.end());
      } else if (res <= coarse) {
        out.candidate.insert(out.candidate.end(), coords.begin(), coords.end());
      }
      if (t + 1 < hi) next_composition(coords);
    }
  });

  std::map<std::vector<int>, double> exact_points;  // coords -> residual placeholder
  std::vector<std::vector<int>> candidates;
  for (const ChunkOut& out : chunk_out) {
    for (std::size_t i = 0; i + n <= out.exact.size(); i += static_cast<std::size_t>(n)) {
      exact_points.emplace(std::vector<int>(out.exact.begin() + static_cast<std::ptrdiff_t>(i),
                                            out.exact.begin() + static_cast<std::ptrdiff_t>(i) + n),
                           0.0);
    }
    for (std::size_t i = 0; i + n <= out.candidate.size(); i += static_cast<std::size_t>(n)) {
      candidates.emplace_back(out.candidate.begin() + static_cast<std::ptrdiff_t>(i),
                              out.candidate.begin() + static_cast<std::ptrdiff_t>(i) + n);
    }
  }

  // refine candidates; each slot is independent, so parallel refinement
  // stays deterministic
  struct Refined {
    bool kept = false;
    bool snapped = false;
    std::vector<int> lattice;
    std::vector<double> point;
  };
  std::vector<Refined> refined(candidates.size());
  const IterateOptions iter_opts{opts.refine_tol, opts.refine_iterations, opts.damping};
  parallel_chunks(0, static_cast<std::int64_t>(candidates.size()), threads,
                  [&](unsigned, std::int64_t lo, std::int64_t hi) {
                    ApplyWorkspace ws;
                    for (std::int64_t idx = lo; idx < hi; ++idx) {
                      const std::vector<int>& coords = candidates[static_cast<std::size_t>(idx)];
                      std::vector<double> x(static_cast<std::size_t>(n));
                      for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>(coords[static_cast<std::size_t>(i)]) / r;
                      IterateResult it = iterate_raw(P, std::move(x), iter_opts, ws);
                      std::vector<double> y = std::move(it.point);
                      if (!it.converged && !newton_polish(P, y, opts.refine_tol)) continue;
                      if (residual_into(P, y, ws) > opts.refine_tol) continue;
                      Refined& slot = refined[static_cast<std::size_t>(idx)];
                      // snap onto an adjacent stationary lattice point when
                      // possible so continuum sets enumerate canonically
                      std::vector<int> z;
                      lattice_round(y, r, z);
                      std::vector<double> zx(static_cast<std::size_t>(n));
                      double dist = 0.0;
                      for (int i = 0; i < n; ++i) {
                        zx[static_cast<std::size_t>(i)] = static_cast<double>(z[static_cast<std::size_t>(i)]) / r;
                        dist = std::max(dist, std::abs(zx[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]));
                      }
                      if (dist <= 1.5 / r && residual_into(P, zx, ws) <= opts.refine_tol) {
                        slot.kept = true;
                        slot.snapped = true;
                        slot.lattice = std::move(z);
                      } else {
                        slot.kept = true;
                        slot.point = std::move(y);
                      }
                    }
                  });

  for (const Refined& slot : refined) {
    if (slot.kept && slot.snapped) exact_points.emplace(slot.lattice, 0.0);
  }

  // free (non-lattice) points: drop duplicates of lattice survivors, then
  // cluster among themselves
  std::vector<std::vector<double>> free_points;
  for (Refined& slot : refined) {
    if (!slot.kept || slot.snapped) continue;
    std::vector<int> z;
    lattice_round(slot.point, r, z);
    auto it = exact_points.find(z);
    if (it != exact_points.end()) {
      double dist = 0.0;
      for (int i = 0; i < n; ++i) {
        dist = std::max(dist, std::abs(static_cast<double>(z[static_cast<std::size_t>(i)]) / r - slot.point[static_cast<std::size_t>(i)]));
      }
      if (dist <= opts.dedupe_radius) continue;
    }
    free_points.push_back(std::move(slot.point));
  }
  std::sort(free_points.begin(), free_points.end());
  std::vector<std::vector<double>> kept_free;
  for (std::vector<double>& p : free_points) {
    bool dup = false;
    for (const std::vector<double>& q : kept_free) {
      if (residual_of(q, p) <= opts.dedupe_radius) {
        dup = true;
        break;
      }
    }
    if (!dup) kept_free.push_back(std::move(p));
  }

  std::vector<std::vector<double>> all;
  all.reserve(exact_points.size() + kept_free.size());
  for (const auto& [coords, unused] : exact_points) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>(coords[static_cast<std::size_t>(i)]) / r;
    all.push_back(std::move(x));
  }
  all.insert(all.end(), kept_free.begin(), kept_free.end());
  std::sort(all.begin(), all.end());
  std::vector<ProbabilityVector<double>> result;
  result.reserve(all.size());
  for (std::vector<double>& p : all) result.emplace_back(std::move(p), 1e-9);
  return result;
}

}  // namespace homc
