#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "odeof/entanglement.hpp"
#include "odeof/errors.hpp"
#include "odeof/odfam.hpp"
#include "odeof/oracle.hpp"
#include "reference.hpp"

using namespace odeof;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<double> kUniform3 = {1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)};

OracleConfig small(int restarts = 8) {
  OracleConfig c;
  c.restarts = restarts;
  c.samples = 50;
  c.value_tolerance = 1e-4;
  return c;
}

}  // namespace

TEST(Splitmix, KnownValues) {
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(restart_seed(5, 3), splitmix64(5 ^ 3));
  EXPECT_NE(restart_seed(5, 3), restart_seed(5, 4));
}

TEST(DecompositionFromIsometry, IdentityGivesEigenEnsemble) {
  const BipartiteDensity rho = random_density(BipartiteDims(2, 3), 3, 9);
  const EigenSupport s = eigen_support(rho);
  const WeightedEnsemble e = decomposition_from_isometry(s, rho.dims(), CMatrix::Identity(3, 3));
  ASSERT_EQ(e.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(e.members()[i].weight, s.values(i), 1e-14);
  EXPECT_LE(frob_dist(ensemble_mix(e).matrix(), rho.matrix()), 1e-12);
}

TEST(DecompositionFromIsometry, RotationGivesEqualWeights) {
  const BipartiteDensity rho = mc_two_qubit(0.3, 0.5);
  const EigenSupport s = eigen_support(rho);
  ASSERT_EQ(s.rank(), 2);
  CMatrix v(2, 2);
  v << std::cos(kPi / 4), -std::sin(kPi / 4), std::sin(kPi / 4), std::cos(kPi / 4);
  const WeightedEnsemble e = decomposition_from_isometry(s, rho.dims(), v);
  EXPECT_NEAR(e.members()[0].weight, 0.5, 1e-14);
  EXPECT_NEAR(e.members()[1].weight, 0.5, 1e-14);
}

TEST(DecompositionFromIsometry, ReproducesLemma3Decomposition) {
  const double p = 0.5;
  const BipartiteDensity rho = lemma3_mc(p, kUniform3, 2);
  const WeightedEnsemble od = od_lemma3(p, kUniform3, 2);
  const EigenSupport s = eigen_support(rho);
  // conj(V_jk) = <e_k | phi~_j> / sqrt(lambda_k)
  CMatrix v(2, 2);
  for (int j = 0; j < 2; ++j) {
    const CVector phi = std::sqrt(od.members()[j].weight) * od.members()[j].ket.vector();
    for (int k = 0; k < 2; ++k) v(j, k) = std::conj(s.vectors.col(k).dot(phi) / std::sqrt(s.values(k)));
  }
  EXPECT_LE((v.adjoint() * v - CMatrix::Identity(2, 2)).norm(), 1e-10);
  const WeightedEnsemble back = decomposition_from_isometry(s, rho.dims(), v);
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(back.members()[j].weight, od.members()[j].weight, 1e-12);
    EXPECT_NEAR(std::abs(back.members()[j].ket.vector().dot(od.members()[j].ket.vector())), 1.0, 1e-12);
  }
}

TEST(DecompositionFromIsometry, Errors) {
  const BipartiteDensity rho = mc_two_qubit(0.3, 0.5);
  const EigenSupport s = eigen_support(rho);
  CMatrix notiso = CMatrix::Identity(2, 2);
  notiso(0, 0) = 2.0;
  EXPECT_THROW(decomposition_from_isometry(s, rho.dims(), notiso), ParameterError);
  EXPECT_THROW(decomposition_from_isometry(s, rho.dims(), CMatrix::Identity(3, 3)), ParameterError);
}

TEST(RandomDecomposition, Properties) {
  const BipartiteDensity rho = mc_two_qubit(0.5, 0.7);
  const WeightedEnsemble a = random_decomposition(rho, 4, 17);
  const WeightedEnsemble b = random_decomposition(rho, 4, 17);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.members()[i].weight, b.members()[i].weight);
    EXPECT_TRUE(a.members()[i].ket.vector() == b.members()[i].ket.vector());
  }
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const WeightedEnsemble e = random_decomposition(rho, 4, seed);
    EXPECT_GE(average_entanglement(e), eof_mc_two_qubit(0.7) - 1e-9);
    if (seed % 100 == 0) EXPECT_LE(frob_dist(ensemble_mix(e).matrix(), rho.matrix()), 1e-8);
  }
  const BipartiteDensity bell = mc_two_qubit(1.0, kPi / 4);
  EXPECT_NEAR(average_entanglement(random_decomposition(bell, 5, 3)), 1.0, 1e-12);
  EXPECT_THROW(random_decomposition(rho, 1, 0), ParameterError);
}

TEST(Bruteforce, PureInputUsesOneRestart) {
  const OracleResult r = eof_bruteforce(mc_two_qubit(1.0, kPi / 4), small());
  EXPECT_NEAR(r.min_value, 1.0, 1e-9);
  EXPECT_EQ(r.per_restart_values.size(), 1u);
  EXPECT_EQ(r.rank, 1);
}

TEST(Bruteforce, SeparableDiagonal) {
  EXPECT_LE(eof_bruteforce(mc_two_qubit(0.4, 0.0), small()).min_value, 1e-6);
}

TEST(Bruteforce, AgreesWithWootters) {
  OracleConfig cfg = small(20);
  cfg.ensemble_size = 6;
  for (int trial = 0; trial < 10; ++trial) {
    const BipartiteDensity rho = random_density(BipartiteDims(2, 2), 1 + trial % 4, 500 + trial);
    const double w = wootters_eof(rho);
    const double m = eof_bruteforce(rho, cfg).min_value;
    EXPECT_GE(m, w - 1e-6);
    EXPECT_LE(m, w + 1e-4);
  }
}

TEST(Bruteforce, ArgminIsAValidDecomposition) {
  const BipartiteDensity rho = mc_two_qubit(0.3, 0.7);
  const OracleResult r = eof_bruteforce(rho, small());
  EXPECT_LE(frob_dist(ensemble_mix(r.argmin).matrix(), rho.matrix()), 1e-8);
  EXPECT_NEAR(r.min_value, average_entanglement(r.argmin), 1e-10);
  EXPECT_EQ(r.ensemble_size, default_ensemble_size(2));
}

TEST(Bruteforce, DeterministicAndThreadIndependent) {
  const BipartiteDensity rho = random_density(BipartiteDims(2, 2), 3, 42);
  OracleConfig cfg = small(6);
  const OracleResult a = eof_bruteforce(rho, cfg);
  const OracleResult b = eof_bruteforce(rho, cfg);
  cfg.threads = 3;
  const OracleResult c = eof_bruteforce(rho, cfg);
  EXPECT_EQ(a.min_value, b.min_value);
  EXPECT_EQ(a.per_restart_values, b.per_restart_values);
  EXPECT_EQ(a.per_restart_values, c.per_restart_values);
  EXPECT_EQ(a.min_value, c.min_value);
}

TEST(Bruteforce, TrajectoriesAreMonotone) {
  OracleConfig cfg = small(4);
  cfg.record_trajectories = true;
  const OracleResult r = eof_bruteforce(random_density(BipartiteDims(2, 2), 4, 8), cfg);
  ASSERT_EQ(r.trajectories.size(), 4u);
  for (const auto& t : r.trajectories) {
    ASSERT_FALSE(t.empty());
    for (std::size_t i = 1; i < t.size(); ++i) EXPECT_LE(t[i], t[i - 1] + 1e-12);
  }
}

TEST(Bruteforce, LargerEnsembleDoesNotHelpMuch) {
  const BipartiteDensity rho = random_density(BipartiteDims(2, 2), 2, 77);
  OracleConfig cfg = small(10);
  cfg.ensemble_size = 3;
  const double m3 = eof_bruteforce(rho, cfg).min_value;
  cfg.ensemble_size = 5;
  const double m5 = eof_bruteforce(rho, cfg).min_value;
  EXPECT_LE(std::abs(m3 - m5), 1e-4);
}

TEST(Bruteforce, ScaleGuard) {
  EXPECT_THROW(eof_bruteforce(werner(3, -0.5), small()), ScaleError);
  EXPECT_THROW(check_oracle_scale(random_density(BipartiteDims(5, 4), 2, 1), small()), ScaleError);
  OracleConfig cfg = small(2);
  cfg.force = true;
  cfg.max_iters = 100;
  EXPECT_GE(eof_bruteforce(werner(3, -0.5), cfg).min_value, eof_werner(-0.5) - 1e-6);
}

TEST(Certify, PassesTrueClaimsAndRefutesFalseOnes) {
  for (int trial = 0; trial < 5; ++trial) {
    const BipartiteDensity rho = random_density(BipartiteDims(2, 2), 2 + trial % 3, 900 + trial);
    const double w = wootters_eof(rho);
    EXPECT_TRUE(certify_not_below(rho, w, small()).passed);
    const CertificationReport neg = certify_not_below(rho, w + 0.05, small());
    EXPECT_FALSE(neg.passed);
    EXPECT_LT(neg.gap_to_claim, -0.04);
  }
  EXPECT_TRUE(certify_not_below(lemma3_mc(0.5, kUniform3, 2), eof_lemma3(0.5, kUniform3, 2), small()).passed);
}

TEST(Certify, UpperBoundSoundnessOnFixtures) {
  const OracleConfig cfg = small(10);
  const double tol = 1e-6;
  EXPECT_GE(eof_bruteforce(mc_two_qubit(0.3, 0.7), cfg).min_value, eof_mc_two_qubit(0.7) - tol);
  const SigmaState s = sigma_family_state(0.4, 0.5, 0.6, 0.0, 0.8);
  EXPECT_GE(eof_bruteforce(s.state, cfg).min_value, eof_sigma(0.5, 0.6, 0.8) - tol);
  EXPECT_GE(eof_bruteforce(lemma3_mc(0.6, kUniform3, 1), cfg).min_value, eof_lemma3(0.6, kUniform3, 1) - tol);

  // Rank-2 member of the isotropic family: one twirled ket plus |psi+>.
  const WeightedEnsemble iso = od_isotropic(3, 0.95, 2);
  const double w = isotropic_member_weight(3, 0.95);
  const WeightedEnsemble two({{w, iso.members()[0].ket}, {1 - w, iso.members().back().ket}});
  EXPECT_GE(eof_bruteforce(ensemble_mix(two), cfg).min_value, eof_isotropic_family(3, w) - tol);
}
