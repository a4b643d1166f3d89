#include "odeof/odfam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace odeof {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDropWeight = 1e-14;

WeightedEnsemble ensemble_dropping_zeros(const std::vector<double>& weights,
                                         const std::vector<PureKet>& kets) {
  std::vector<EnsembleMember> members;
  for (std::size_t i = 0; i < kets.size(); ++i) {
    if (weights[i] > kDropWeight) members.push_back({weights[i], kets[i]});
  }
  return WeightedEnsemble(std::move(members));
}

void check_probability_vector(const std::vector<double>& weights, std::size_t expected) {
  if (weights.size() != expected) {
    throw ParameterError("expected " + std::to_string(expected) + " weights, got " +
                         std::to_string(weights.size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kTraceTol) {
    throw ParameterError("weights sum to " + std::to_string(total) + ", expected 1");
  }
}

}  // namespace

std::string Provenance::describe() const {
  if (params) return odeof::describe(*params);
  std::string out;
  for (const auto& f : factors) out += (out.empty() ? "" : " x ") + f.describe();
  return factors.size() > 1 ? "(" + out + ")" : out;
}

ODFamily::ODFamily(std::vector<PureKet> kets, bool additive, Provenance provenance)
    : kets_(std::move(kets)), additive_(additive), provenance_(std::move(provenance)) {
  if (kets_.empty()) throw ParameterError("an OD family needs at least one ket");
  for (const auto& k : kets_) {
    if (k.dims() != kets_.front().dims()) throw ShapeError("family kets live on different spaces");
    entanglement_.push_back(pure_entanglement(k));
  }
}

ODFamily::ODFamily(std::vector<PureKet> kets, std::vector<double> per_ket_entanglement,
                   bool additive, Provenance provenance)
    : ODFamily(std::move(kets), additive, std::move(provenance)) {
  if (per_ket_entanglement.size() != kets_.size()) {
    throw ParameterError("one entanglement value per ket is required");
  }
  for (std::size_t i = 0; i < kets_.size(); ++i) {
    if (std::abs(per_ket_entanglement[i] - entanglement_[i]) > 1e-10) {
      throw ConstructionError("claimed entanglement of ket " + std::to_string(i) +
                              " disagrees with its Schmidt spectrum");
    }
  }
  entanglement_ = std::move(per_ket_entanglement);
}

BipartiteDensity ODFamily::member(const std::vector<double>& weights) const {
  check_probability_vector(weights, kets_.size());
  const int n = dims().total();
  CMatrix rho = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < kets_.size(); ++i) rho += weights[i] * outer(kets_[i].vector());
  return BipartiteDensity(rho, dims());
}

// ---------------------------------------------------------------------------

WeightedEnsemble od_mc_two_qubit(double p, double theta) {
  McTwoQubit{p, theta}.validate();
  return ensemble_dropping_zeros({p, 1.0 - p}, {mc_ket(theta), mc_ket(kPi / 2 - theta)});
}

WeightedEnsemble od_sigma(double q, double p, double x, double y, double z) {
  Sigma{q, p, x, y, z}.validate();
  auto [alpha, beta] = sigma_kets(p, x, y, z);
  return ensemble_dropping_zeros({q, 1.0 - q}, {alpha, beta});
}

WeightedEnsemble od_lemma3(double p, const std::vector<double>& c, int f) {
  Lemma3Mc{p, c, f}.validate();
  const auto [psi, phi] = lemma3_kets(c, f);
  const double theta = lemma3_angle(c, f);
  const double s2t = std::sin(2.0 * theta);
  const double root = std::sqrt(std::max(0.0, 1.0 - p * p * s2t * s2t));
  // root vanishes only for the pure state p = 1, theta = pi/4, where any
  // real rotation is optimal.
  const double ratio = root > 1e-14 ? (-1.0 + p + p * std::cos(2.0 * theta)) / (2.0 * root) : 0.0;
  const double u00 = std::sqrt(std::max(0.0, 0.5 + ratio));
  const double u01 = std::sqrt(std::max(0.0, 0.5 - ratio));
  const double u[2][2] = {{u00, u01}, {u01, -u00}};

  std::vector<double> weights;
  std::vector<PureKet> kets;
  for (int i = 0; i < 2; ++i) {
    const CVector v =
        u[i][0] * std::sqrt(p) * psi.vector() + u[i][1] * std::sqrt(1.0 - p) * phi.vector();
    const double w = v.squaredNorm();
    if (w <= kDropWeight) continue;
    weights.push_back(w);
    kets.push_back(PureKet::normalized(v, psi.dims()));
  }
  return ensemble_dropping_zeros(weights, kets);
}

std::optional<std::array<int, 4>> divisibility_violation(const std::vector<std::int64_t>& f,
                                                         std::int64_t n) {
  const int d = static_cast<int>(f.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const bool divides = (f[i] + f[j] - f[k] - f[l]) % n == 0;
          const bool same_pair = (i == k && j == l) || (i == l && j == k);
          if (divides != same_pair) return std::array<int, 4>{i, j, k, l};
        }
  return std::nullopt;
}

CoeffMatrix coeff_matrix(int d, int m, std::optional<std::int64_t> n) {
  if (d >= 2 && d % 2 == 0) {
    throw UnsupportedDimensionError("coefficient matrix is only constructed for odd d, got " +
                                    std::to_string(d));
  }
  if (d < 3) throw ParameterError("coefficient matrix needs odd d >= 3");
  if (m < 2) throw ParameterError("m must be > 1");

  CoeffMatrix a;
  a.d = d;
  a.m = m;
  std::int64_t power = 1;
  for (int i = 1; i <= d; ++i) {
    if (power > (std::int64_t{1} << 40) / m) throw ParameterError("m^d is too large");
    power *= m;
    a.f.push_back(power);
  }
  a.n = n.value_or(2 * power - 3);
  if (a.n < 1) throw ParameterError("n must be positive");
  if (const auto bad = divisibility_violation(a.f, a.n)) {
    const auto& q = *bad;
    std::ostringstream os;
    os << "n = " << a.n << " breaks the divisibility law at (i, j, k, l) = (" << q[0] + 1 << ", "
       << q[1] + 1 << ", " << q[2] + 1 << ", " << q[3] + 1 << ")";
    throw ConstructionError(os.str());
  }

  // Rows: every support of (d+1)/2 columns, each expanded into n phase rows.
  const int half = (d + 1) / 2;
  const double amplitude = std::sqrt(2.0 / (d + 1));
  std::vector<bool> mask(d, false);
  std::fill(mask.begin(), mask.begin() + half, true);
  do {
    for (std::int64_t k = 0; k < a.n; ++k) {
      CVector row = CVector::Zero(d);
      for (int j = 0; j < d; ++j) {
        if (!mask[j]) continue;
        // Reduce the exponent modulo n before scaling to keep the phase exact.
        const std::int64_t e = (a.f[j] % a.n) * k % a.n;
        row(j) = std::polar(amplitude, 2.0 * kPi * static_cast<double>(e) / a.n);
      }
      a.rows.push_back(row);
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return a;
}

std::vector<PureKet> isotropic_twirled_kets(const CoeffMatrix& a) {
  const int d = a.d;
  const double norm = std::sqrt(static_cast<double>(d) * d - d);
  CVector diag = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) diag(i * d + i) = 1.0;
  std::vector<PureKet> kets;
  kets.reserve(a.L());
  for (const auto& row : a.rows) {
    const CVector v = (d - 2.0) / norm * kron(row, CVector(row.conjugate())) + diag / norm;
    kets.emplace_back(v, BipartiteDims(d, d));
  }
  return kets;
}

double isotropic_member_weight(int d, double F) {
  const double dd = d;
  return dd * dd * (1.0 - F) / ((dd - 2.0) * (dd - 2.0));
}

WeightedEnsemble od_isotropic(int d, double F, int m) {
  Isotropic{d, F, m}.validate();
  const CoeffMatrix a = coeff_matrix(d, m);
  std::vector<PureKet> kets = isotropic_twirled_kets(a);
  const double dd = d;
  const double each = isotropic_member_weight(d, F) / static_cast<double>(a.L());
  std::vector<double> weights(kets.size(), each);
  kets.push_back(max_entangled(d));
  weights.push_back((4.0 - 4.0 * dd + F * dd * dd) / ((dd - 2.0) * (dd - 2.0)));
  return ensemble_dropping_zeros(weights, kets);
}

std::vector<PureKet> werner_kets(int d, double F) {
  Werner{d, F}.validate();
  // Rows k of the fixed mixing matrix [u_kl].
  const Complex I(0.0, 1.0);
  const Complex u[4][4] = {{-0.5, 0.5, 0.5, 0.5},
                           {0.5, -0.5, 0.5, 0.5},
                           {0.5 * I, 0.5 * I, -0.5, 0.5},
                           {0.5 * I, 0.5 * I, 0.5, -0.5}};
  const double diag_amp = std::sqrt((F + 1.0) / (2.0 * d + 2.0));
  const double anti_amp = std::sqrt((1.0 - F) / 2.0);
  const double sym_amp = std::sqrt((d - 1.0) * (F + 1.0) / (2.0 * d + 2.0));
  const double r2 = 1.0 / std::sqrt(2.0);

  std::vector<PureKet> kets;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      const int ii = i * d + i, jj = j * d + j, ij = i * d + j, ji = j * d + i;
      for (int k = 0; k < 4; ++k) {
        CVector v = CVector::Zero(d * d);
        v(ii) += 2.0 * u[k][0] * diag_amp;
        v(jj) += 2.0 * u[k][1] * diag_amp;
        v(ij) += 2.0 * u[k][3] * anti_amp * r2 + 2.0 * u[k][2] * sym_amp * r2;
        v(ji) += -2.0 * u[k][3] * anti_amp * r2 + 2.0 * u[k][2] * sym_amp * r2;
        kets.emplace_back(v, BipartiteDims(d, d));
      }
    }
  }
  return kets;
}

WeightedEnsemble od_werner(int d, double F) {
  std::vector<PureKet> kets = werner_kets(d, F);
  const std::vector<double> weights(kets.size(), 1.0 / (2.0 * d * d - 2.0 * d));
  return ensemble_dropping_zeros(weights, kets);
}

// ---------------------------------------------------------------------------

bool claimed_additive(const FamilyParams& params) {
  return std::holds_alternative<McTwoQubit>(params) || std::holds_alternative<Sigma>(params) ||
         std::holds_alternative<Lemma3Mc>(params) ||
         std::holds_alternative<SeparableTags>(params);
}

ODFamily od_family(const FamilyParams& params) {
  validate(params);
  Provenance prov{params, {}};
  const bool additive = claimed_additive(params);
  struct Builder {
    std::vector<PureKet> operator()(const McTwoQubit& v) const {
      return {mc_ket(v.theta), mc_ket(kPi / 2 - v.theta)};
    }
    std::vector<PureKet> operator()(const Sigma& v) const {
      auto [alpha, beta] = sigma_kets(v.p, v.x, v.y, v.z);
      return {alpha, beta};
    }
    std::vector<PureKet> operator()(const Lemma3Mc& v) const {
      std::vector<PureKet> kets;
      for (const auto& m : od_lemma3(v.p, v.c, v.f).members()) kets.push_back(m.ket);
      return kets;
    }
    std::vector<PureKet> operator()(const Isotropic& v) const {
      std::vector<PureKet> kets = isotropic_twirled_kets(coeff_matrix(v.d, v.m));
      kets.push_back(max_entangled(v.d));
      return kets;
    }
    std::vector<PureKet> operator()(const Werner& v) const { return werner_kets(v.d, v.F); }
    std::vector<PureKet> operator()(const SeparableTags& v) const {
      std::vector<PureKet> kets;
      for (const auto& t : v.tags) kets.push_back(product_ket_from_tag(t));
      return kets;
    }
  };
  return ODFamily(std::visit(Builder{}, params), additive, std::move(prov));
}

ODFamily compose(const ODFamily& a, const ODFamily& b) {
  if (!a.additive() && !b.additive()) {
    throw HypothesisError(
        "composition needs at least one factor with additive EOF; neither " +
        a.provenance().describe() + " nor " + b.provenance().describe() + " is");
  }
  std::vector<PureKet> kets;
  std::vector<double> ent;
  kets.reserve(a.size() * b.size());
  const BipartiteDims joined = joined_dims(a.dims(), b.dims());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      kets.emplace_back(
          bipartite_kron(a.kets()[i].vector(), a.dims(), b.kets()[j].vector(), b.dims()), joined);
      ent.push_back(a.per_ket_entanglement()[i] + b.per_ket_entanglement()[j]);
    }
  }
  Provenance prov;
  for (const ODFamily* f : {&a, &b}) {
    // Flatten nested compositions so the tree reads as one product.
    if (!f->provenance().params && !f->provenance().factors.empty()) {
      for (const auto& sub : f->provenance().factors) prov.factors.push_back(sub);
    } else {
      prov.factors.push_back(f->provenance());
    }
  }
  return ODFamily(std::move(kets), std::move(ent), a.additive() && b.additive(), std::move(prov));
}

ODFamily compose(const std::vector<ODFamily>& factors) {
  if (factors.empty()) throw ParameterError("compose needs at least one factor");
  ODFamily out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = compose(out, factors[i]);
  return out;
}

double family_eof(const ODFamily& family, const std::vector<double>& weights) {
  check_probability_vector(weights, family.size());
  return std::inner_product(weights.begin(), weights.end(),
                            family.per_ket_entanglement().begin(), 0.0);
}

VerificationReport verify_od(const WeightedEnsemble& ensemble, const BipartiteDensity& target,
                             double claimed_eof, const OracleConfig& cfg,
                             VerifyTolerances tolerances) {
  if (ensemble.dims() != target.dims()) {
    throw ShapeError("ensemble and target live on different spaces");
  }
  VerificationReport report;
  report.tolerances = tolerances;
  report.reconstruction_error = frob_dist(ensemble_mix(ensemble).matrix(), target.matrix());
  report.average_entanglement = average_entanglement(ensemble);
  report.claimed_eof = claimed_eof;
  report.claim_error = std::abs(report.average_entanglement - claimed_eof);
  report.oracle = certify_not_below(target, claimed_eof, cfg);
  return report;
}

}  // namespace odeof
