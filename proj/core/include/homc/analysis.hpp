#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "homc/solvers.hpp"
#include "homc/tensor.hpp"

namespace homc {

/// Claimed shape of a chain's stationary set.
struct StationaryDescription {
  enum class Kind { single_point, finite_set, face, face_plus_barycenter, full_simplex };
  Kind kind = Kind::full_simplex;
  std::vector<ProbabilityVector<double>> points;  // single_point / finite_set
  std::vector<int> face_indices;                  // 1-based, face kinds

  void validate(int n) const;  // throws std::invalid_argument when malformed
};

const char* description_kind_name(StationaryDescription::Kind k);
StationaryDescription::Kind description_kind_from_name(std::string_view name);

struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 0;
  double membership_tol = 1e-12;
  double separation = 0.05;  // max-norm margin for exclusion sampling
};

struct VerificationReport {
  bool pass = false;
  double membership_max_residual = 0.0;
  double exclusion_min_residual = 0.0;  // +inf when no exclusion samples exist
  double midpoint_min_residual = 0.0;   // +inf unless face_plus_barycenter
  std::vector<ProbabilityVector<double>> witnesses;
  std::string detail;
};

/// Checks a claimed stationary set three ways: membership (described points
/// and face samples must be stationary within membership_tol), exclusion
/// (samples at distance >= separation from the set must have strictly
/// positive residual), and, for the disconnected kind, non-stationarity of
/// the segment between the barycenter and the face (sample-level evidence
/// that the two pieces really are separate).
VerificationReport verify_description(const TransitionTensor<double>& P,
                                      const StationaryDescription& desc,
                                      const VerifyOptions& opts = {});

/// Parameters of the two-state equation governing stationary points on the
/// edge conv{e_i, e_j}, read off the 2x2 submatrices of slices P_i and P_j:
///   a1 = P_i[i,i], b1 = P_i[i,j], a2 = P_j[i,i], b2 = P_j[i,j].
/// column_leakage[c] is the mass the four edge columns (i,i), (i,j), (j,i),
/// (j,j) put outside rows {i, j}; an edge point is stationary for the full
/// chain only if the leaked mass it weights vanishes.
template <class S>
struct EdgeRestriction {
  S a1{}, a2{}, b1{}, b2{};
  std::array<S, 4> column_leakage{};
  S max_leakage{};
};

template <class S>
EdgeRestriction<S> restrict_to_edge(const TransitionTensor<S>& P, int i, int j);

struct EdgeDichotomyReport {
  int i = 0, j = 0;
  SolutionSet restriction;                  // solution set of the 2x2 restriction
  std::vector<double> interior_stationary;  // barycentric coords of interior
                                            // full-chain stationary edge points
  bool interval_verified = false;           // case-1 params and sampled edge all stationary
  bool dichotomy_holds = true;
  double sampled_max_residual = 0.0;
};

/// Executable form of the 1-face dichotomy: if two interior points of the
/// edge are stationary for the full chain, the whole edge must be. When
/// fewer than two interior stationary points exist the claim is vacuous.
EdgeDichotomyReport edge_dichotomy_check(const TransitionTensor<double>& P, int i, int j,
                                         double tol = 1e-12, double interior_margin = 0.01,
                                         int interval_samples = 50);

struct ConjectureProbeOptions {
  int trials = 200;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int dense_samples = 500;
  double interior_margin = 0.01;
  int max_iter = 5000;
  double damping = 0.2;
};

struct ConjectureProbeReport {
  std::vector<ProbabilityVector<double>> interior_points;
  bool found_k_affinely_independent = false;
  bool face_sampled_fully_stationary = false;  // meaningful only when found
  double dense_max_residual = 0.0;
  std::string summary;
};

/// Exploratory probe, no pass/fail contract: hunts for k affinely
/// independent interior stationary points of the (k-1)-face spanned by
/// face_indices; if found, samples the face densely and reports whether
/// every sample is stationary. Output is evidence about one chain, never
/// a general claim.
ConjectureProbeReport conjecture_probe(const TransitionTensor<double>& P,
                                       const std::vector<int>& face_indices,
                                       const ConjectureProbeOptions& opts = {});

}  // namespace homc
