#pragma once

// Brute-force convex-roof minimization.
//
// Every ensemble realizing rho = sum_i lambda_i |e_i><e_i| (rank r) is
//   |phi~_j> = sum_i conj(V_ji) sqrt(lambda_i) |e_i>,   j = 1..N,
// for an N x r isometry V (V^dagger V = I). The oracle minimizes the average
// pure-state entanglement over V by derivative-free coordinate descent with
// complex Givens rotations acting on pairs of ensemble members. The result is
// an actual decomposition, so its value is an upper bound on the EOF: the
// oracle can refute a claimed EOF but never prove one.
//
// Restart k draws its starting isometry from splitmix64(seed ^ k), so a run is
// reproducible and identical whether restarts execute serially or in parallel.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odeof/states.hpp"

namespace odeof {

struct OracleConfig {
  /// Ensemble size N; 0 selects min(r^2, r + 4).
  int ensemble_size = 0;
  int restarts = 50;
  /// Maximum number of full coordinate sweeps per restart.
  int max_iters = 3000;
  /// A restart converges once every rotation step is below this (radians).
  double step_tolerance = 1e-7;
  double value_tolerance = 1e-6;
  std::uint64_t seed = 0x0DE0F5EEDULL;
  /// Worker threads for restarts; 0 picks the hardware concurrency.
  int threads = 1;
  /// Random decompositions sampled by certify_not_below on top of the descent.
  int samples = 200;
  /// Lifts the rank <= 6, dA*dB <= 16 guard.
  bool force = false;
  bool record_trajectories = false;
};

struct OracleResult {
  double min_value = 0.0;
  WeightedEnsemble argmin;
  std::vector<double> per_restart_values;
  double converged_fraction = 0.0;
  int ensemble_size = 0;
  int rank = 0;
  std::int64_t evaluations = 0;
  /// Objective after every sweep, one list per restart (when recorded).
  std::vector<std::vector<double>> trajectories;
};

struct CertificationReport {
  bool passed = false;
  double claim = 0.0;
  double min_found = 0.0;
  /// min_found - claim; negative values mean the oracle beat the claim.
  double gap_to_claim = 0.0;
  double tolerance = 0.0;
  double descent_min = 0.0;
  double sample_min = 0.0;
  int restarts = 0;
  int samples = 0;
  std::int64_t evaluations = 0;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of restart k: splitmix64(seed ^ k).
std::uint64_t restart_seed(std::uint64_t seed, std::uint64_t k);

/// Eigenvalues above the floor and their eigenvectors.
struct EigenSupport {
  RVector values;
  CMatrix vectors;
  int rank() const { return static_cast<int>(values.size()); }
};
EigenSupport eigen_support(const BipartiteDensity& rho);

/// Ensemble {||phi~_j||^2, phi~_j / ||phi~_j||} for an N x r isometry V.
/// Members of zero weight are dropped.
WeightedEnsemble decomposition_from_isometry(const EigenSupport& support, BipartiteDims dims,
                                             const CMatrix& isometry);

WeightedEnsemble random_decomposition(const BipartiteDensity& rho, int ensemble_size,
                                      std::uint64_t seed);

/// Default ensemble size min(r^2, r + 4).
int default_ensemble_size(int rank);

/// Throws ScaleError unless rank <= 6 and dA*dB <= 16 (or cfg.force).
void check_oracle_scale(const BipartiteDensity& rho, const OracleConfig& cfg);

OracleResult eof_bruteforce(const BipartiteDensity& rho, const OracleConfig& cfg);

/// Descent plus cfg.samples random decompositions; passes when the smallest
/// average entanglement found is >= claim - cfg.value_tolerance.
CertificationReport certify_not_below(const BipartiteDensity& rho, double claim,
                                      const OracleConfig& cfg);

}  // namespace odeof
