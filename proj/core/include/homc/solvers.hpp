#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homc/rational.hpp"
#include "homc/tensor.hpp"

namespace homc {

/// Branch of the two-state order-2 stationarity equation that produced a
/// solution set. Labels follow the case analysis of
///   g(x) = (a1-a2-b1+b2) x^2 + (a2+b1-2b2-1) x + b2 = 0 on [0,1]:
///   case1      a1 = 1, a2+b1 = 1, b2 = 0          -> every x in [0,1]
///   case2      a2+b1 < 1 = a1                     -> {1, b2/(b2+1-a2-b1)}
///   case3      a2+b1-a1 > a2+b1-1 >= 0 = b2       -> {0, (a2+b1-1)/(a2+b1-a1)}
///   case4a     otherwise, degenerate linear        -> unique root
///   case4b     otherwise, quadratic                -> unique root via sqrt
enum class QuadraticCase { case1, case2, case3, case4a, case4b };

std::string case_label(QuadraticCase c);  // "1", "2", "3", "4a", "4b"

/// Solution set of the two-state equation: either the whole interval [0,1]
/// or one/two isolated roots (strictly increasing).
struct SolutionSet {
  enum class Kind { interval_all, finite };
  Kind kind = Kind::finite;
  std::vector<double> roots;
  QuadraticCase case_label = QuadraticCase::case4b;

  bool is_interval() const { return kind == Kind::interval_all; }
};

/// Closed-form solution of the two-state stationarity equation. Branch
/// conditions are evaluated with equality-within-eq_tol; branches are tried
/// in the order 1, 2, 3, 4 so the overlapping measure-zero boundaries
/// resolve the same way as the case analysis above.
SolutionSet solve_quadratic_2x2(double a1, double a2, double b1, double b2,
                                double eq_tol = 1e-14);

/// Same solver with exact branch selection on rational parameters. Roots
/// are still reported as doubles (case 4b involves a square root).
SolutionSet solve_quadratic_2x2(const Rational& a1, const Rational& a2, const Rational& b1,
                                const Rational& b2);

// -- damped fixed-point iteration --------------------------------------------

struct IterateOptions {
  double tol = 1e-12;
  int max_iter = 5000;
  double damping = 0.2;  // x <- (1-d) P x^(m) + d x
};

struct IterateResult {
  std::vector<double> point;  // simplex point (renormalized every step)
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Iterates the damped chain map from x0 until the stationarity residual
/// drops to tol or max_iter is reached. Non-convergence is a flagged
/// outcome, not an error. A point already stationary returns 0 iterations.
IterateResult fixed_point_iterate(const TransitionTensor<double>& P,
                                  const ProbabilityVector<double>& x0,
                                  const IterateOptions& opts = {});

/// Newton refinement of x as a root of P x^(m) - x, using the analytic
/// Jacobian of the multilinear map restricted (implicitly) to the simplex
/// hyperplane. Returns true when the residual reaches tol. A singular
/// Jacobian -- e.g. anywhere inside a stationary face, where fixed points
/// are not isolated -- aborts the polish and leaves the best point seen.
bool newton_polish(const TransitionTensor<double>& P, std::vector<double>& x, double tol,
                   int max_steps = 25);

// -- multi-start solve --------------------------------------------------------

struct SolveOptions {
  int restarts = 256;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  int max_iter = 5000;
  double damping = 0.2;
  double cluster_radius = 1e-6;  // max-norm
};

struct SolveReport {
  std::vector<ProbabilityVector<double>> points;  // distinct converged limits
  std::vector<double> residuals;                  // per point, re-measured
  std::vector<int> iterations;                    // per start
  int converged_starts = 0;
  int total_starts = 0;
  std::uint64_t seed = 0;
};

/// Runs fixed_point_iterate from `restarts` starts: the vertices e_i, the
/// barycenter f_n, then uniform random simplex points. Start s draws from
/// its own stream derived from (seed, s), so the report is identical for a
/// fixed seed no matter how starts are scheduled. Converged limits are
/// clustered by cluster_radius; points come out sorted lexicographically.
SolveReport multi_start_solve(const TransitionTensor<double>& P, const SolveOptions& opts = {});

// -- exhaustive simplex-grid search ------------------------------------------

struct GridOptions {
  int resolution = 100;       // lattice {(k_1,...,k_n)/r : sum k_i = r}
  double refine_tol = 1e-12;  // residual bound for a reported point
  double coarse_threshold = 0.0;  // 0 -> (m n + 2) / resolution, which no
                                  // stationary point's lattice neighbor can
                                  // exceed
  int refine_iterations = 400;
  double damping = 0.2;
  double dedupe_radius = 1e-6;
  unsigned threads = 0;  // 0 -> hardware concurrency
};

/// Independent brute-force enumeration of stationary points: scans every
/// lattice point, keeps those with residual below a coarse threshold,
/// refines each by damped iteration plus Newton polish, snaps refined
/// points back onto stationary lattice points when one is adjacent (so
/// continuum stationary sets enumerate reproducibly as their lattice
/// sample), and deduplicates. Exact-on-lattice points are kept verbatim.
std::vector<ProbabilityVector<double>> enumerate_stationary_grid(
    const TransitionTensor<double>& P, const GridOptions& opts = {});

/// Number of lattice points at the given resolution, C(r+n-1, n-1).
std::int64_t simplex_lattice_size(int n, int resolution);

}  // namespace homc
