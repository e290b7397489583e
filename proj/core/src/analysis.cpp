#include "homc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "homc/rng.hpp"

namespace homc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void StationaryDescription::validate(int n) const {
  switch (kind) {
    case Kind::single_point:
      if (points.size() != 1) throw std::invalid_argument("description: single_point needs exactly one point");
      break;
    case Kind::finite_set:
      if (points.empty()) throw std::invalid_argument("description: finite_set needs points");
      break;
    case Kind::face:
    case Kind::face_plus_barycenter: {
      if (face_indices.empty()) throw std::invalid_argument("description: face needs indices");
      std::vector<int> sorted = face_indices;
      std::sort(sorted.begin(), sorted.end());
      if (sorted.front() < 1 || sorted.back() > n) {
        throw std::invalid_argument("description: face index outside [1, n]");
      }
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("description: duplicate face index");
      }
      break;
    }
    case Kind::full_simplex:
      break;
  }
  for (const auto& p : points) {
    if (p.size() != n) throw std::invalid_argument("description: point dimension mismatch");
  }
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      double d = 0.0;
      for (int i = 0; i < points[a].size(); ++i) {
        d = std::max(d, std::abs(points[a][static_cast<int>(i)] - points[b][static_cast<int>(i)]));
      }
      if (d == 0.0) throw std::invalid_argument("description: duplicate points");
    }
  }
}

const char* description_kind_name(StationaryDescription::Kind k) {
  switch (k) {
    case StationaryDescription::Kind::single_point: return "single_point";
    case StationaryDescription::Kind::finite_set: return "finite_set";
    case StationaryDescription::Kind::face: return "face";
    case StationaryDescription::Kind::face_plus_barycenter: return "face_plus_barycenter";
    case StationaryDescription::Kind::full_simplex: return "full_simplex";
  }
  return "?";
}

StationaryDescription::Kind description_kind_from_name(std::string_view name) {
  std::string canon(name);
  std::replace(canon.begin(), canon.end(), '-', '_');
  if (canon == "single_point") return StationaryDescription::Kind::single_point;
  if (canon == "finite_set") return StationaryDescription::Kind::finite_set;
  if (canon == "face") return StationaryDescription::Kind::face;
  if (canon == "face_plus_barycenter") return StationaryDescription::Kind::face_plus_barycenter;
  if (canon == "full_simplex") return StationaryDescription::Kind::full_simplex;
  throw std::invalid_argument("unknown description kind '" + std::string(name) + "'");
}

namespace {

double max_norm_dist(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Max-norm distance from x to the face conv{e_i : i in F}: off-face mass
/// must vanish and the missing on-face mass beta spreads optimally as
/// beta/|F|.
double dist_to_face(std::span<const double> x, const std::vector<int>& face) {
  std::vector<char> on(x.size(), 0);
  for (int i : face) on[static_cast<std::size_t>(i - 1)] = 1;
  double off_max = 0.0;
  double beta = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!on[i]) {
      off_max = std::max(off_max, x[i]);
      beta += x[i];
    }
  }
  return std::max(off_max, beta / static_cast<double>(face.size()));
}

std::vector<double> embed_face_point(int n, const std::vector<int>& face,
                                     std::span<const double> face_coords) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (std::size_t t = 0; t < face.size(); ++t) {
    x[static_cast<std::size_t>(face[t] - 1)] = face_coords[t];
  }
  return x;
}

}  // namespace

VerificationReport verify_description(const TransitionTensor<double>& P,
                                      const StationaryDescription& desc,
                                      const VerifyOptions& opts) {
  const int n = P.states();
  desc.validate(n);
  VerificationReport report;
  report.exclusion_min_residual = kInf;
  report.midpoint_min_residual = kInf;
  ApplyWorkspace ws;
  std::ostringstream detail;

  const std::vector<double> barycenter(static_cast<std::size_t>(n), 1.0 / n);
  const bool has_face = desc.kind == StationaryDescription::Kind::face ||
                        desc.kind == StationaryDescription::Kind::face_plus_barycenter;

  // membership evidence
  std::vector<std::vector<double>> members;
  for (const auto& p : desc.points) members.push_back(p.entries());
  if (has_face) {
    for (int i : desc.face_indices) {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(i - 1)] = 1.0;
      members.push_back(std::move(e));
    }
    std::vector<double> fb(static_cast<std::size_t>(n), 0.0);
    for (int i : desc.face_indices) fb[static_cast<std::size_t>(i - 1)] = 1.0 / desc.face_indices.size();
    members.push_back(std::move(fb));
    Rng rng = Rng::derive(opts.seed, 1);
    for (int s = 0; s < opts.samples; ++s) {
      std::vector<double> coords = sample_simplex(rng, static_cast<int>(desc.face_indices.size()));
      members.push_back(embed_face_point(n, desc.face_indices, coords));
    }
  }
  if (desc.kind == StationaryDescription::Kind::face_plus_barycenter) members.push_back(barycenter);
  if (desc.kind == StationaryDescription::Kind::full_simplex) {
    Rng rng = Rng::derive(opts.seed, 1);
    for (int s = 0; s < opts.samples; ++s) members.push_back(sample_simplex(rng, n));
  }
  bool membership_ok = true;
  for (const auto& p : members) {
    const double res = residual_into(P, p, ws);
    report.membership_max_residual = std::max(report.membership_max_residual, res);
    if (res > opts.membership_tol) {
      membership_ok = false;
      if (report.witnesses.size() < 8) report.witnesses.emplace_back(p, 1e-9);
    }
  }
  if (!membership_ok) detail << "membership failed (max residual " << report.membership_max_residual << "); ";

  // distance from a point to the described set
  auto dist_to_set = [&](std::span<const double> x) -> double {
    switch (desc.kind) {
      case StationaryDescription::Kind::single_point:
      case StationaryDescription::Kind::finite_set: {
        double best = kInf;
        for (const auto& p : desc.points) best = std::min(best, max_norm_dist(x, p.entries()));
        return best;
      }
      case StationaryDescription::Kind::face:
        return dist_to_face(x, desc.face_indices);
      case StationaryDescription::Kind::face_plus_barycenter:
        return std::min(dist_to_face(x, desc.face_indices), max_norm_dist(x, barycenter));
      case StationaryDescription::Kind::full_simplex:
        return 0.0;
    }
    return 0.0;
  };

  // exclusion evidence: rejection-sample points separated from the set
  bool exclusion_ok = true;
  if (desc.kind != StationaryDescription::Kind::full_simplex) {
    Rng rng = Rng::derive(opts.seed, 2);
    int accepted = 0;
    int attempts = 0;
    const int max_attempts = opts.samples * 1000 + 1000;
    while (accepted < opts.samples && attempts < max_attempts) {
      ++attempts;
      std::vector<double> x = sample_simplex(rng, n);
      if (dist_to_set(x) < opts.separation) continue;
      ++accepted;
      const double res = residual_into(P, x, ws);
      report.exclusion_min_residual = std::min(report.exclusion_min_residual, res);
      if (res <= opts.membership_tol) {
        exclusion_ok = false;
        if (report.witnesses.size() < 8) report.witnesses.emplace_back(std::move(x), 1e-9);
      }
    }
    if (accepted < opts.samples) {
      detail << "only " << accepted << "/" << opts.samples << " exclusion samples found; ";
    }
    if (!exclusion_ok) {
      detail << "exclusion failed (stationary point off the described set); ";
    }
  }

  // disconnectedness evidence: the open segment between the barycenter and
  // the face must contain no stationary points
  bool midpoints_ok = true;
  if (desc.kind == StationaryDescription::Kind::face_plus_barycenter) {
    Rng rng = Rng::derive(opts.seed, 3);
    for (int s = 0; s < opts.samples; ++s) {
      std::vector<double> coords = sample_simplex(rng, static_cast<int>(desc.face_indices.size()));
      std::vector<double> y = embed_face_point(n, desc.face_indices, coords);
      for (int t = 1; t <= 9; ++t) {
        const double w = 0.1 * t;
        std::vector<double> mid(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          mid[static_cast<std::size_t>(i)] = w * barycenter[static_cast<std::size_t>(i)] + (1.0 - w) * y[static_cast<std::size_t>(i)];
        }
        const double res = residual_into(P, mid, ws);
        report.midpoint_min_residual = std::min(report.midpoint_min_residual, res);
        if (res <= opts.membership_tol) {
          midpoints_ok = false;
          if (report.witnesses.size() < 8) report.witnesses.emplace_back(std::move(mid), 1e-9);
          break;
        }
      }
      if (!midpoints_ok) break;
    }
    if (!midpoints_ok) detail << "segment to the barycenter contains stationary points; ";
  }

  report.pass = membership_ok && exclusion_ok && midpoints_ok;
  report.detail = report.pass ? "ok" : detail.str();
  return report;
}

template <class S>
EdgeRestriction<S> restrict_to_edge(const TransitionTensor<S>& P, int i, int j) {
  if (P.order() != 2) throw std::invalid_argument("restrict_to_edge: defined for order 2 only");
  if (i == j) throw std::invalid_argument("restrict_to_edge: need distinct states");
  if (!(i >= 1 && j <= P.states() && i < j)) {
    throw std::invalid_argument("restrict_to_edge: need 1 <= i < j <= n");
  }
  const int n = P.states();
  const int i0 = i - 1;
  const int j0 = j - 1;
  auto col = [&](int slice, int second) { return static_cast<std::int64_t>(slice) * n + second; };
  EdgeRestriction<S> er;
  er.a1 = P.at(i0, col(i0, i0));
  er.b1 = P.at(i0, col(i0, j0));
  er.a2 = P.at(i0, col(j0, i0));
  er.b2 = P.at(i0, col(j0, j0));
  const std::array<std::int64_t, 4> edge_cols = {col(i0, i0), col(i0, j0), col(j0, i0),
                                                 col(j0, j0)};
  for (std::size_t c = 0; c < 4; ++c) {
    S leak{};
    std::span<const S> column = P.column(edge_cols[c]);
    for (int r = 0; r < n; ++r) {
      if (r == i0 || r == j0) continue;
      leak += column[static_cast<std::size_t>(r)];
    }
    er.column_leakage[c] = leak;
    if (er.max_leakage < leak) er.max_leakage = leak;
  }
  return er;
}

EdgeDichotomyReport edge_dichotomy_check(const TransitionTensor<double>& P, int i, int j,
                                         double tol, double interior_margin,
                                         int interval_samples) {
  EdgeDichotomyReport report;
  report.i = i;
  report.j = j;
  const int n = P.states();
  EdgeRestriction<double> er = restrict_to_edge(P, i, j);
  report.restriction = solve_quadratic_2x2(er.a1, er.a2, er.b1, er.b2);
  ApplyWorkspace ws;

  auto edge_point = [&](double x) {
    std::vector<double> p(static_cast<std::size_t>(n), 0.0);
    p[static_cast<std::size_t>(i - 1)] = x;
    p[static_cast<std::size_t>(j - 1)] = 1.0 - x;
    return p;
  };
  auto full_residual = [&](double x) { return residual_into(P, edge_point(x), ws); };

  // interior stationary points of the full chain on this edge
  if (report.restriction.is_interval()) {
    for (double x : {0.25, 0.5, 0.75}) {
      if (full_residual(x) <= tol) report.interior_stationary.push_back(x);
    }
  } else {
    for (double x : report.restriction.roots) {
      if (x > interior_margin && x < 1.0 - interior_margin && full_residual(x) <= tol) {
        report.interior_stationary.push_back(x);
      }
    }
  }

  if (report.interior_stationary.size() >= 2) {
    // the dichotomy demands the whole edge: exact case-1 parameters plus
    // sampled stationarity of the edge (all rows, not just the restriction)
    const double eq_tol = 1e-12;
    const bool case1_params = std::abs(er.a1 - 1.0) <= eq_tol &&
                              std::abs(er.a2 + er.b1 - 1.0) <= eq_tol &&
                              std::abs(er.b2) <= eq_tol;
    double worst = 0.0;
    for (int s = 0; s < interval_samples; ++s) {
      const double x = static_cast<double>(s + 1) / (interval_samples + 1);
      worst = std::max(worst, full_residual(x));
    }
    report.sampled_max_residual = worst;
    report.interval_verified = case1_params && worst <= tol;
    report.dichotomy_holds = report.interval_verified;
  } else {
    report.dichotomy_holds = true;  // vacuous
  }
  return report;
}

namespace {

/// Affine rank of a point set: rank of differences against the first point.
int affine_rank(const std::vector<std::vector<double>>& pts, double tol = 1e-8) {
  if (pts.size() < 2) return 0;
  const std::size_t n = pts[0].size();
  std::vector<std::vector<double>> rows;
  for (std::size_t t = 1; t < pts.size(); ++t) {
    std::vector<double> d(n);
    for (std::size_t c = 0; c < n; ++c) d[c] = pts[t][c] - pts[0][c];
    rows.push_back(std::move(d));
  }
  int rank = 0;
  for (std::size_t col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    for (std::size_t r = pivot + 1; r < rows.size(); ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
    }
    if (std::abs(rows[pivot][col]) <= tol) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank)) continue;
      const double f = rows[r][col] / rows[static_cast<std::size_t>(rank)][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= f * rows[static_cast<std::size_t>(rank)][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

ConjectureProbeReport conjecture_probe(const TransitionTensor<double>& P,
                                       const std::vector<int>& face_indices,
                                       const ConjectureProbeOptions& opts) {
  const int n = P.states();
  const int k = static_cast<int>(face_indices.size());
  if (k < 3) throw std::invalid_argument("conjecture_probe: need a face on k >= 3 vertices");
  StationaryDescription guard;
  guard.kind = StationaryDescription::Kind::face;
  guard.face_indices = face_indices;
  guard.validate(n);

  ConjectureProbeReport report;
  ApplyWorkspace ws;
  const IterateOptions iopts{opts.tol, opts.max_iter, opts.damping};

  std::vector<std::vector<double>> found;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = Rng::derive(opts.seed, static_cast<std::uint64_t>(trial));
    std::vector<double> coords = sample_simplex(rng, k);
    std::vector<double> x0 = embed_face_point(n, face_indices, coords);
    IterateResult it = fixed_point_iterate(P, ProbabilityVector<double>(x0, 1e-9), iopts);
    if (!it.converged) continue;
    // interior of the face only: off-face mass gone, face coords away from
    // the boundary
    bool interior = true;
    std::vector<char> on(static_cast<std::size_t>(n), 0);
    for (int idx : face_indices) on[static_cast<std::size_t>(idx - 1)] = 1;
    for (int c = 0; c < n; ++c) {
      const double v = it.point[static_cast<std::size_t>(c)];
      const bool bad = on[static_cast<std::size_t>(c)] ? (v < opts.interior_margin) : (v > 1e-9);
      if (bad) {
        interior = false;
        break;
      }
    }
    if (!interior) continue;
    bool fresh = true;
    for (const auto& q : found) {
      if (max_norm_dist(q, it.point) <= 1e-6) {
        fresh = false;
        break;
      }
    }
    if (fresh) found.push_back(it.point);
  }

  report.found_k_affinely_independent =
      static_cast<int>(found.size()) >= k && affine_rank(found) >= k - 1;
  for (const auto& p : found) report.interior_points.emplace_back(p, 1e-9);

  std::ostringstream summary;
  summary << "found " << found.size() << " distinct interior stationary points of the face";
  if (report.found_k_affinely_independent) {
    Rng rng = Rng::derive(opts.seed, 0xFACE);
    double worst = 0.0;
    for (int s = 0; s < opts.dense_samples; ++s) {
      std::vector<double> coords = sample_simplex(rng, k);
      std::vector<double> x = embed_face_point(n, face_indices, coords);
      worst = std::max(worst, residual_into(P, x, ws));
    }
    report.dense_max_residual = worst;
    report.face_sampled_fully_stationary = worst <= opts.tol;
    summary << "; " << k << " affinely independent; dense sampling "
            << (report.face_sampled_fully_stationary ? "finds the whole face stationary"
                                                     : "finds non-stationary face points")
            << " (max residual " << worst << ")";
  } else {
    summary << "; fewer than k=" << k << " affinely independent points -- probe inconclusive";
  }
  summary << "; evidence only, not a proof";
  report.summary = summary.str();
  return report;
}

// explicit instantiations
template EdgeRestriction<double> restrict_to_edge(const TransitionTensor<double>&, int, int);
template EdgeRestriction<Rational> restrict_to_edge(const TransitionTensor<Rational>&, int, int);

}  // namespace homc
