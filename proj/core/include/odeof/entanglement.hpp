#pragma once

// Scalar entanglement functionals. All logarithms are base 2 (ebits).

#include <optional>
#include <string>
#include <vector>

#include "odeof/states.hpp"

namespace odeof {

/// Entanglement of formation together with the cost/distillable quantities
/// that are known in closed form for the covered families.
struct EntanglementReport {
  double eof = 0.0;
  std::optional<double> cost;
  std::optional<double> distillable;
  std::optional<double> gap;
  std::string family = "generic";
};

/// h(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0. Inputs within 1e-12
/// of [0, 1] are clamped; anything further out is a DomainError.
double binary_entropy(double x);

/// Shannon entropy (base 2) of a probability vector; entries below the
/// eigenvalue floor contribute nothing.
double shannon_entropy(const RVector& probs);

/// -tr(rho log2 rho). Accepts traces within 1e-8 of 1 and renormalizes.
double von_neumann_entropy(const CMatrix& rho);

/// Entropy of either marginal of a pure ket.
double pure_entanglement(const PureKet& ket);

/// sum_i w_i E(|k_i>).
double average_entanglement(const WeightedEnsemble& ensemble);

double concurrence(const BipartiteDensity& rho);
/// h(1/2 + sqrt(1 - C^2)/2) with C the two-qubit concurrence.
double wootters_eof(const BipartiteDensity& rho);
/// Two-qubit EOF as a function of concurrence.
double eof_from_concurrence(double c);

double eof_mc_two_qubit(double theta);
double eof_sigma(double p, double x, double z);
double eof_lemma3(double p, const std::vector<double>& c, int f);
/// Entanglement of each twirled member of the isotropic decomposition,
/// ((2-d)/d) log2(d-1) + log2 d.
double eof_isotropic_member(int d);
/// EOF of a state in the isotropic decomposition family putting weight
/// `member_weight` on the twirled members and the rest on |psi+>.
double eof_isotropic_family(int d, double member_weight);
/// EOF of the isotropic state itself (F above (4d-4)/d^2).
double eof_isotropic(int d, double F);
/// h(1/2 + sqrt(1-F^2)/2) for the entangled range F in [-1, 0).
double eof_werner(double F);

/// S(Tr_{traced} rho) - S(rho), floored at 0. Requires the maximally
/// correlated pattern (off-pattern entries <= 1e-10).
double distillable_mc(const BipartiteDensity& rho, Side traced = Side::A);

/// sum_i h(cos^2 theta_i) - S(Tr_A rho) + S(rho) for a member of the
/// composed two-qubit MC family over `thetas`.
double gap_tensor_mc(const std::vector<double>& thetas, const BipartiteDensity& rho);

/// Closed-form cost minus distillable entanglement of the lemma3 state.
double gap_lemma3(double p, double theta);

/// Closed-form report for a named family. Cost is filled for families with
/// additive EOF, distillable and gap for maximally correlated ones; the gap is
/// always cost - distillable.
EntanglementReport family_report(const FamilyParams& params);

}  // namespace odeof
