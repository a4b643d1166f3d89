#include "odeof/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "odeof/entanglement.hpp"

namespace odeof {

namespace {

using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SmallHermitian = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

constexpr double kMaxStep = std::numbers::pi / 4;
constexpr double kDropWeight = 1e-14;
constexpr int kGuardRank = 6;
constexpr int kGuardDim = 16;

double neg_xlog2x(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

// w * E(v / sqrt(w)) for an unnormalized ket v with w = ||v||^2, written as
// -sum_i mu_i log2 mu_i + w log2 w over the eigenvalues mu_i of the reduced
// (unnormalized) matrix, so no division by small norms is needed.
class WeightedEntropy {
 public:
  explicit WeightedEntropy(BipartiteDims dims)
      : dims_(dims), small_(std::min(dims.dA, dims.dB)), large_(std::max(dims.dA, dims.dB)) {}

  double operator()(const Complex* v) const {
    // Amplitude accessor in (small, large) orientation.
    auto amp = [&](int s, int l) {
      return dims_.dA <= dims_.dB ? v[s * dims_.dB + l] : v[l * dims_.dB + s];
    };
    double w = 0.0;
    for (int i = 0; i < dims_.total(); ++i) w += std::norm(v[i]);
    if (w <= 0.0) return 0.0;
    if (small_ == 1) return 0.0;
    if (small_ == 2) {
      // Cauchy-Binet: det(M M^dagger) = sum_{j<k} |m0j m1k - m0k m1j|^2.
      double det = 0.0;
      for (int j = 0; j < large_; ++j)
        for (int k = j + 1; k < large_; ++k)
          det += std::norm(amp(0, j) * amp(1, k) - amp(0, k) * amp(1, j));
      const double disc = std::sqrt(std::max(0.0, w * w - 4.0 * det));
      const double mu1 = 0.5 * (w + disc);
      const double mu2 = mu1 > 0.0 ? det / mu1 : 0.0;
      return neg_xlog2x(mu1) + neg_xlog2x(mu2) - neg_xlog2x(w);
    }
    SmallHermitian r = SmallHermitian::Zero(small_, small_);
    for (int a = 0; a < small_; ++a)
      for (int b = a; b < small_; ++b) {
        Complex acc = 0.0;
        for (int l = 0; l < large_; ++l) acc += amp(a, l) * std::conj(amp(b, l));
        r(a, b) = acc;
        r(b, a) = std::conj(acc);
      }
    Eigen::SelfAdjointEigenSolver<SmallHermitian> solver(r, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      s += neg_xlog2x(solver.eigenvalues()(i));
    return s - neg_xlog2x(w);
  }

 private:
  BipartiteDims dims_;
  int small_;
  int large_;
};

RowMatrix kets_from_isometry(const EigenSupport& support, const CMatrix& isometry) {
  const RVector root = support.values.cwiseSqrt();
  return RowMatrix(isometry.conjugate() * root.asDiagonal() * support.vectors.transpose());
}

WeightedEnsemble ensemble_from_kets(const RowMatrix& kets, BipartiteDims dims) {
  std::vector<EnsembleMember> members;
  double total = 0.0;
  for (Eigen::Index j = 0; j < kets.rows(); ++j) total += kets.row(j).squaredNorm();
  for (Eigen::Index j = 0; j < kets.rows(); ++j) {
    const double w = kets.row(j).squaredNorm();
    if (w <= kDropWeight) continue;
    members.push_back({w / total, PureKet::normalized(kets.row(j).transpose(), dims)});
  }
  return WeightedEnsemble(std::move(members));
}

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  RowMatrix kets;
  bool converged = false;
  std::int64_t evaluations = 0;
  std::vector<double> trajectory;
};

// Coordinate descent over complex Givens rotations of member pairs. Each
// coordinate (pair j<k, generator g in {1, i}) keeps its own step size; a move
// is accepted only if it lowers the objective, so every trajectory is
// nonincreasing.
RestartOutcome descend(RowMatrix kets, BipartiteDims dims, const OracleConfig& cfg) {
  const WeightedEntropy entropy(dims);
  const int n = static_cast<int>(kets.rows());
  const int width = static_cast<int>(kets.cols());

  std::vector<double> contrib(n);
  for (int j = 0; j < n; ++j) contrib[j] = entropy(kets.row(j).data());

  RestartOutcome out;
  auto total = [&] {
    double s = 0.0;
    for (double c : contrib) s += c;
    return s;
  };
  if (cfg.record_trajectories) out.trajectory.push_back(total());

  struct Coordinate {
    int j, k;
    Complex g;
    double step;
  };
  std::vector<Coordinate> coords;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      coords.push_back({j, k, Complex(1.0, 0.0), 0.5});
      coords.push_back({j, k, Complex(0.0, 1.0), 0.5});
    }

  Eigen::Matrix<Complex, 1, Eigen::Dynamic> rj(width), rk(width), bj(width), bk(width);
  double best_j = 0.0, best_k = 0.0;

  auto rotate = [&](const Coordinate& c, double alpha, auto& nj, auto& nk) {
    const double cs = std::cos(alpha), sn = std::sin(alpha);
    nj = cs * kets.row(c.j) + (sn * c.g) * kets.row(c.k);
    nk = (-sn * std::conj(c.g)) * kets.row(c.j) + cs * kets.row(c.k);
  };
  auto trial = [&](const Coordinate& c, double alpha, double& ej, double& ek) {
    rotate(c, alpha, rj, rk);
    ej = entropy(rj.data());
    ek = entropy(rk.data());
    out.evaluations += 2;
    return ej + ek;
  };

  for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
    for (auto& c : coords) {
      const double f0 = contrib[c.j] + contrib[c.k];
      const double s = c.step;
      double best = f0, best_alpha = 0.0;
      auto consider = [&](double alpha) {
        double ej, ek;
        const double f = trial(c, alpha, ej, ek);
        if (f < best) {
          best = f;
          best_alpha = alpha;
          bj = rj;
          bk = rk;
          best_j = ej;
          best_k = ek;
        }
        return f;
      };
      const double fp = consider(s);
      const double fm = consider(-s);
      const double curvature = fp + fm - 2.0 * f0;
      bool interior = false;
      if (curvature > 0.0) {
        double alpha = 0.5 * s * (fm - fp) / curvature;
        alpha = std::clamp(alpha, -4.0 * s, 4.0 * s);
        if (std::abs(alpha) > 1e-3 * s && std::abs(std::abs(alpha) - s) > 1e-3 * s) {
          const double before = best;
          consider(alpha);
          interior = best < before;
        }
      }
      if (best < f0) {
        kets.row(c.j) = bj;
        kets.row(c.k) = bk;
        contrib[c.j] = best_j;
        contrib[c.k] = best_k;
        c.step = interior ? std::max(1.5 * std::abs(best_alpha), 0.5 * s) : 2.0 * s;
        c.step = std::min(c.step, kMaxStep);
      } else {
        c.step = 0.5 * s;
      }
    }
    if (cfg.record_trajectories) out.trajectory.push_back(total());
    double largest = 0.0;
    for (const auto& c : coords) largest = std::max(largest, c.step);
    if (largest < cfg.step_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.value = total();
  out.kets = std::move(kets);
  if (coords.empty()) out.converged = true;
  return out;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t seed, std::uint64_t k) { return splitmix64(seed ^ k); }

EigenSupport eigen_support(const BipartiteDensity& rho) {
  const HermitianEigen e = eig_hermitian(rho.matrix());
  int r = 0;
  while (r < e.values.size() && e.values(r) > kEigenFloor) ++r;
  return {e.values.head(r), e.vectors.leftCols(r)};
}

int default_ensemble_size(int rank) { return std::min(rank * rank, rank + 4); }

WeightedEnsemble decomposition_from_isometry(const EigenSupport& support, BipartiteDims dims,
                                             const CMatrix& isometry) {
  if (isometry.cols() != support.rank()) {
    throw ParameterError("isometry has " + std::to_string(isometry.cols()) +
                         " columns, state rank is " + std::to_string(support.rank()));
  }
  if (isometry.rows() < isometry.cols()) throw ParameterError("isometry needs N >= r rows");
  const CMatrix gram = isometry.adjoint() * isometry;
  const double defect =
      (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw ParameterError("V^dagger V deviates from the identity by " + std::to_string(defect));
  }
  return ensemble_from_kets(kets_from_isometry(support, isometry), dims);
}

WeightedEnsemble random_decomposition(const BipartiteDensity& rho, int ensemble_size,
                                      std::uint64_t seed) {
  const EigenSupport support = eigen_support(rho);
  if (ensemble_size < support.rank()) {
    throw ParameterError("ensemble size " + std::to_string(ensemble_size) +
                         " is below the state rank " + std::to_string(support.rank()));
  }
  std::mt19937_64 rng(seed);
  const CMatrix v = random_isometry(ensemble_size, support.rank(), rng);
  return decomposition_from_isometry(support, rho.dims(), v);
}

void check_oracle_scale(const BipartiteDensity& rho, const OracleConfig& cfg) {
  if (cfg.force) return;
  if (rho.dim() > kGuardDim) {
    throw ScaleError("dA*dB = " + std::to_string(rho.dim()) + " exceeds " +
                     std::to_string(kGuardDim) + " (use force to override)");
  }
  const int r = eigen_support(rho).rank();
  if (r > kGuardRank) {
    throw ScaleError("rank " + std::to_string(r) + " exceeds " + std::to_string(kGuardRank) +
                     " (use force to override)");
  }
}

OracleResult eof_bruteforce(const BipartiteDensity& rho, const OracleConfig& cfg) {
  check_oracle_scale(rho, cfg);
  if (cfg.restarts < 1) throw ParameterError("oracle needs at least one restart");
  const EigenSupport support = eigen_support(rho);
  const int r = support.rank();
  const int n = cfg.ensemble_size > 0 ? cfg.ensemble_size : default_ensemble_size(r);
  if (n < r) {
    throw ParameterError("ensemble size " + std::to_string(n) + " is below the state rank " +
                         std::to_string(r));
  }
  // A pure state has a single decomposition up to phases and mixing of
  // identical kets, so one restart settles it.
  const int restarts = r == 1 ? 1 : cfg.restarts;

  std::vector<RestartOutcome> outcomes(restarts);
  auto run = [&](int k) {
    std::mt19937_64 rng(restart_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    const CMatrix v = random_isometry(n, r, rng);
    outcomes[k] = descend(kets_from_isometry(support, v), rho.dims(), cfg);
  };

  int workers = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, restarts);
  if (workers <= 1) {
    for (int k = 0; k < restarts; ++k) run(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int k = next++; k < restarts; k = next++) run(k);
      });
    }
  }

  int best = 0;
  int converged = 0;
  std::int64_t evaluations = 0;
  std::vector<double> values;
  std::vector<std::vector<double>> trajectories;
  for (int k = 0; k < restarts; ++k) {
    values.push_back(outcomes[k].value);
    if (outcomes[k].value < outcomes[best].value) best = k;
    converged += outcomes[k].converged ? 1 : 0;
    evaluations += outcomes[k].evaluations;
    if (cfg.record_trajectories) trajectories.push_back(std::move(outcomes[k].trajectory));
  }
  WeightedEnsemble argmin = ensemble_from_kets(outcomes[best].kets, rho.dims());
  const double min_value = average_entanglement(argmin);
  return OracleResult{.min_value = min_value,
                      .argmin = std::move(argmin),
                      .per_restart_values = std::move(values),
                      .converged_fraction = static_cast<double>(converged) / restarts,
                      .ensemble_size = n,
                      .rank = r,
                      .evaluations = evaluations,
                      .trajectories = std::move(trajectories)};
}

CertificationReport certify_not_below(const BipartiteDensity& rho, double claim,
                                      const OracleConfig& cfg) {
  const OracleResult descent = eof_bruteforce(rho, cfg);
  const EigenSupport support = eigen_support(rho);
  const int n = descent.ensemble_size;

  double sample_min = std::numeric_limits<double>::infinity();
  const std::uint64_t sample_base = splitmix64(cfg.seed + 0x5A5A5A5A5A5A5A5AULL);
  for (int i = 0; i < cfg.samples; ++i) {
    std::mt19937_64 rng(restart_seed(sample_base, static_cast<std::uint64_t>(i)));
    const CMatrix v = random_isometry(n, support.rank(), rng);
    sample_min = std::min(sample_min, average_entanglement(
                                          decomposition_from_isometry(support, rho.dims(), v)));
  }

  CertificationReport report;
  report.claim = claim;
  report.descent_min = descent.min_value;
  report.sample_min = sample_min;
  report.min_found = std::min(descent.min_value, sample_min);
  report.gap_to_claim = report.min_found - claim;
  report.tolerance = cfg.value_tolerance;
  report.passed = report.min_found >= claim - cfg.value_tolerance;
  report.restarts = static_cast<int>(descent.per_restart_values.size());
  report.samples = cfg.samples;
  report.evaluations = descent.evaluations + cfg.samples;
  return report;
}

}  // namespace odeof
