#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "odeof/numlin.hpp"

namespace odeof {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Density matrix on H_A (x) H_B. Construction validates Hermiticity
/// (1e-12), unit trace (1e-10) and positivity (min eigenvalue >= -1e-10).
class BipartiteDensity {
 public:
  BipartiteDensity(CMatrix matrix, BipartiteDims dims);

  const CMatrix& matrix() const { return matrix_; }
  BipartiteDims dims() const { return dims_; }
  int dim() const { return dims_.total(); }

 private:
  CMatrix matrix_;
  BipartiteDims dims_;
};

/// Unit vector on H_A (x) H_B (norm within 1e-10).
class PureKet {
 public:
  PureKet(CVector vector, BipartiteDims dims);
  /// Normalizes `v` first; throws NormalizationError for a (near) zero vector.
  static PureKet normalized(const CVector& v, BipartiteDims dims);

  const CVector& vector() const { return vector_; }
  BipartiteDims dims() const { return dims_; }
  RVector schmidt() const { return schmidt_coefficients(vector_, dims_); }

 private:
  CVector vector_;
  BipartiteDims dims_;
};

struct EnsembleMember {
  double weight;
  PureKet ket;
};

/// Finite ensemble {p_i, |psi_i>}: weights nonnegative and summing to 1
/// within 1e-10, all kets on the same bipartite space.
class WeightedEnsemble {
 public:
  explicit WeightedEnsemble(std::vector<EnsembleMember> members);

  const std::vector<EnsembleMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  BipartiteDims dims() const { return members_.front().ket.dims(); }

 private:
  std::vector<EnsembleMember> members_;
};

// ---------------------------------------------------------------------------
// Family parameters. Each record validates its own ranges; state and OD
// constructors call validate() before computing anything.

struct McTwoQubit {
  double p;
  double theta;
  void validate() const;
};

struct Sigma {
  double q;
  double p;
  double x;
  double y;
  double z;
  void validate() const;
};

struct Lemma3Mc {
  double p;
  std::vector<double> c;
  int f;
  void validate() const;
  int d() const { return static_cast<int>(c.size()); }
};

/// Parameters of the isotropic optimal decomposition (stricter than the
/// plain isotropic state): odd d >= 3, F in ((4d-4)/d^2, 1], m >= 2.
struct Isotropic {
  int d;
  double F;
  int m;
  void validate() const;
};

struct Werner {
  int d;
  double F;
  void validate() const;
};

/// Product kets labelled by single-qubit tags, one string per ket, one
/// character per qubit pair member: "0", "1", "+", "-". A tag of length 2k
/// describes k qubits on side A followed by k qubits on side B.
struct SeparableTags {
  std::vector<std::string> tags;
  void validate() const;
};

using FamilyParams = std::variant<McTwoQubit, Sigma, Lemma3Mc, Isotropic, Werner, SeparableTags>;

void validate(const FamilyParams& params);
/// Short name of the active alternative ("mc2", "sigma", "lemma3", ...).
std::string family_name(const FamilyParams& params);
std::string describe(const FamilyParams& params);

// ---------------------------------------------------------------------------
// Kets

/// cos(theta)|00> + sin(theta)|11>.
PureKet mc_ket(double theta);
/// (1/sqrt d) sum_i |ii>.
PureKet max_entangled(int d);
/// Product ket from a separable tag (see SeparableTags).
PureKet product_ket_from_tag(const std::string& tag);

// ---------------------------------------------------------------------------
// State families

/// p |psi_theta><psi_theta| + (1-p) |psi_{pi/2-theta}><psi_{pi/2-theta}|.
BipartiteDensity mc_two_qubit(double p, double theta);

/// Principal-branch angle of the two-qubit sigma family,
/// tan(theta) = [-1 + 2(1-p)x^2 - sqrt(1 + 4(1-p)^2(x^4-x^2))] / (2x sqrt(p-p^2)).
/// Throws DegenerateParameterError when p is 0 or 1 or x is 0.
double sigma_angle(double p, double x);

/// The two normalized kets of the sigma family, built from |00> and
/// x|00> + y|01> + z|11> rotated by the sigma angle.
std::pair<PureKet, PureKet> sigma_kets(double p, double x, double y, double z);

struct SigmaState {
  BipartiteDensity state;
  double theta;
};
/// q |alpha><alpha| + (1-q) |beta><beta| with the kets of sigma_kets.
SigmaState sigma_family_state(double q, double p, double x, double y, double z);

/// The two kets of the lemma3 maximally correlated state:
/// |psi> = sum_i c_i |ii> and |phi>, its renormalized restriction to i < f.
std::pair<PureKet, PureKet> lemma3_kets(const std::vector<double>& c, int f);
/// Angle with cos(theta) = sqrt(sum_{i<f} c_i^2).
double lemma3_angle(const std::vector<double>& c, int f);
BipartiteDensity lemma3_mc(double p, const std::vector<double>& c, int f);

/// (1-F)/(d^2-1) I + (F d^2 - 1)/(d^2-1) |psi+><psi+|, F in [0, 1].
BipartiteDensity isotropic(int d, double F);

/// (d-F)/(d^3-d) I + (dF-1)/(d^3-d) SWAP, F in [-1, 1].
BipartiteDensity werner(int d, double F);

/// Projection onto the isotropic family: isotropic(d, <psi+|rho|psi+>).
BipartiteDensity isotropic_twirl(const BipartiteDensity& rho);

/// Two-qubit state obtained by mixing, with equal weights, the four Werner
/// decomposition kets of a single level pair (i, j) and pulling it back to
/// levels (0, 1). Coincides with werner(2, F) only for d = 2.
BipartiteDensity werner_block_state(int d, double F);

/// Lambda(rho) = 2/(d^2-d) sum_{i>j} (E_ij (x) E_ij) rho (E_ij (x) E_ij)^dagger
/// with E_ij the level embedding |0> -> |i>, |1> -> |j>.
BipartiteDensity werner_mixing_channel(const BipartiteDensity& qubit_state, int d);

/// sum_i w_i |k_i><k_i|.
BipartiteDensity ensemble_mix(const WeightedEnsemble& ensemble);

/// True when every entry outside the |ii><jj| pattern is at most `tol`
/// (requires dA == dB).
bool is_maximally_correlated(const CMatrix& rho, BipartiteDims dims, double tol);

/// Random density matrix G G^dagger / tr with G a seeded dims.total() x rank
/// complex Gaussian matrix.
BipartiteDensity random_density(BipartiteDims dims, int rank, std::uint64_t seed);

}  // namespace odeof
