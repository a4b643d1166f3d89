#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odeof/entanglement.hpp"
#include "odeof/oracle.hpp"
#include "odeof/states.hpp"

namespace odeof {

/// Where a family came from: a single named family, or a tensor composition
/// of other families.
struct Provenance {
  std::optional<FamilyParams> params;
  std::vector<Provenance> factors;

  std::string describe() const;
};

/// A fixed set of decomposition kets. Every reweighting sum_i r_i |k_i><k_i|
/// of an optimal decomposition has EOF sum_i r_i E(|k_i>).
class ODFamily {
 public:
  ODFamily(std::vector<PureKet> kets, bool additive, Provenance provenance);
  /// Uses precomputed per-ket entanglement (checked against the kets).
  ODFamily(std::vector<PureKet> kets, std::vector<double> per_ket_entanglement, bool additive,
           Provenance provenance);

  const std::vector<PureKet>& kets() const { return kets_; }
  const std::vector<double>& per_ket_entanglement() const { return entanglement_; }
  bool additive() const { return additive_; }
  const Provenance& provenance() const { return provenance_; }
  BipartiteDims dims() const { return kets_.front().dims(); }
  std::size_t size() const { return kets_.size(); }

  /// The family member with the given mixing weights.
  BipartiteDensity member(const std::vector<double>& weights) const;

 private:
  std::vector<PureKet> kets_;
  std::vector<double> entanglement_;
  bool additive_;
  Provenance provenance_;
};

// ---------------------------------------------------------------------------
// Optimal decompositions of the named families. Members of zero weight are
// omitted from the returned ensembles.

WeightedEnsemble od_mc_two_qubit(double p, double theta);
WeightedEnsemble od_sigma(double q, double p, double x, double y, double z);
WeightedEnsemble od_lemma3(double p, const std::vector<double>& c, int f);

/// Coefficient matrix [a_li] of the isotropic decomposition (odd d).
struct CoeffMatrix {
  int d = 0;
  int m = 0;
  std::int64_t n = 0;
  std::vector<std::int64_t> f;  // f[j] = m^(j+1)
  std::vector<CVector> rows;
  std::size_t L() const { return rows.size(); }
};

/// First index quadruple (i, j, k, l) for which "n divides f_i + f_j - f_k - f_l"
/// disagrees with "{i, j} = {k, l}", scanning all quadruples.
std::optional<std::array<int, 4>> divisibility_violation(const std::vector<std::int64_t>& f,
                                                         std::int64_t n);

/// n defaults to 2 m^d - 3. Throws UnsupportedDimensionError for even d and
/// ConstructionError naming the quadruple if the divisibility law fails.
CoeffMatrix coeff_matrix(int d, int m, std::optional<std::int64_t> n = std::nullopt);

/// The L twirled kets
/// |psi_l> = (d-2)/sqrt(d^2-d) (sum_i a_li |i>)(sum_i a*_li |i>) + 1/sqrt(d^2-d) sum_i |ii>.
std::vector<PureKet> isotropic_twirled_kets(const CoeffMatrix& a);
/// Weight on all twirled kets together, d^2 (1-F) / (d-2)^2.
double isotropic_member_weight(int d, double F);
WeightedEnsemble od_isotropic(int d, double F, int m);

/// The 2d(d-1) kets |psi_ijk> (i > j, k = 0..3), ordered by i, then j, then k.
std::vector<PureKet> werner_kets(int d, double F);
WeightedEnsemble od_werner(int d, double F);

// ---------------------------------------------------------------------------
// Families

/// Whether the family's EOF is claimed additive (two-qubit MC, sigma,
/// lemma3 MC and separable families).
bool claimed_additive(const FamilyParams& params);

/// OD family generated by the named family. Mixing weights inside `params`
/// (p of mc2, q of sigma, F of isotropic/werner) only matter where the kets
/// themselves depend on them.
ODFamily od_family(const FamilyParams& params);

/// Tensor composition: kets |psi_i> (x) |phi_j> on the joined cut
/// (A1 A2)|(B1 B2), ordered with i major. Requires at least one additive factor.
ODFamily compose(const ODFamily& a, const ODFamily& b);
ODFamily compose(const std::vector<ODFamily>& factors);

/// sum_i w_i E(|k_i>).
double family_eof(const ODFamily& family, const std::vector<double>& weights);

// ---------------------------------------------------------------------------
// Verification

struct VerifyTolerances {
  double reconstruction = 1e-9;
  double claim = 1e-9;
};

/// Three checks on a claimed optimal decomposition. The oracle check can only
/// refute optimality; a pass means no cheaper decomposition was found.
struct VerificationReport {
  double reconstruction_error = 0.0;
  double average_entanglement = 0.0;
  double claimed_eof = 0.0;
  double claim_error = 0.0;
  CertificationReport oracle;
  VerifyTolerances tolerances;

  bool reconstruction_ok() const { return reconstruction_error <= tolerances.reconstruction; }
  bool claim_ok() const { return claim_error <= tolerances.claim; }
  bool oracle_ok() const { return oracle.passed; }
  bool passed() const { return reconstruction_ok() && claim_ok() && oracle_ok(); }
};

VerificationReport verify_od(const WeightedEnsemble& ensemble, const BipartiteDensity& target,
                             double claimed_eof, const OracleConfig& cfg,
                             VerifyTolerances tolerances = {});

}  // namespace odeof
