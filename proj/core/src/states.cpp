#include "odeof/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace odeof {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParameterError(std::string(name) + " = " + num(v) + " outside [0, 1]");
  }
}

void require_angle(double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2)) {
    throw ParameterError("theta = " + num(theta) + " outside [0, pi/2]");
  }
}

}  // namespace

BipartiteDensity::BipartiteDensity(CMatrix matrix, BipartiteDims dims)
    : matrix_(std::move(matrix)), dims_(dims) {
  if (matrix_.rows() != dims_.total() || matrix_.cols() != dims_.total()) {
    throw ShapeError("density matrix is " + std::to_string(matrix_.rows()) + "x" +
                     std::to_string(matrix_.cols()) + ", dims require " +
                     std::to_string(dims_.total()));
  }
  const double defect = hermiticity_defect(matrix_);
  if (defect > kHermitianTol) {
    throw HermiticityError("density matrix is not Hermitian (max|M - M^dagger| = " + num(defect) +
                           ")");
  }
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw NormalizationError("density matrix trace " + num(trace) + " differs from 1");
  }
  const RVector ev = eigvals_hermitian(matrix_);
  if (ev(ev.size() - 1) < -kPsdTol) {
    throw PsdError("density matrix has eigenvalue " + num(ev(ev.size() - 1)));
  }
}

PureKet::PureKet(CVector vector, BipartiteDims dims) : vector_(std::move(vector)), dims_(dims) {
  if (vector_.size() != dims_.total()) {
    throw ShapeError("ket length " + std::to_string(vector_.size()) + " does not match dA*dB = " +
                     std::to_string(dims_.total()));
  }
  const double norm = vector_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw NormalizationError("ket norm " + num(norm) + " differs from 1");
  }
}

PureKet PureKet::normalized(const CVector& v, BipartiteDims dims) {
  const double norm = v.norm();
  if (norm < 1e-150) throw NormalizationError("cannot normalize a zero vector");
  return PureKet(v / norm, dims);
}

WeightedEnsemble::WeightedEnsemble(std::vector<EnsembleMember> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw ParameterError("ensemble has no members");
  double total = 0.0;
  const BipartiteDims dims = members_.front().ket.dims();
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw ParameterError("negative ensemble weight " + num(m.weight));
    if (m.ket.dims() != dims) throw ShapeError("ensemble kets live on different spaces");
    total += m.weight;
  }
  if (std::abs(total - 1.0) > kTraceTol) {
    throw NormalizationError("ensemble weights sum to " + num(total));
  }
}

// ---------------------------------------------------------------------------

void McTwoQubit::validate() const {
  require_unit_interval(p, "p");
  require_angle(theta);
}

void Sigma::validate() const {
  require_unit_interval(q, "q");
  require_unit_interval(p, "p");
  require_unit_interval(x, "x");
  require_unit_interval(y, "y");
  require_unit_interval(z, "z");
  const double n2 = x * x + y * y + z * z;
  if (std::abs(n2 - 1.0) > 1e-9) {
    throw ParameterError("x^2 + y^2 + z^2 = " + num(n2) + ", expected 1");
  }
}

void Lemma3Mc::validate() const {
  require_unit_interval(p, "p");
  if (c.size() < 2) throw ParameterError("coefficient list needs d >= 2 entries");
  double s = 0.0;
  for (double ci : c) {
    if (!(ci > 0.0)) throw ParameterError("coefficient " + num(ci) + " is not positive");
    s += ci * ci;
  }
  if (std::abs(s - 1.0) > kNormTol) {
    throw ParameterError("coefficients square-sum to " + num(s) + ", expected 1");
  }
  if (f < 1 || f >= d()) {
    throw ParameterError("f = " + std::to_string(f) + " outside 1 <= f < d = " +
                         std::to_string(d()));
  }
}

void Isotropic::validate() const {
  if (d < 3 || d % 2 == 0) {
    if (d >= 2 && d % 2 == 0) {
      throw UnsupportedDimensionError("isotropic decomposition is only built for odd d, got d = " +
                                      std::to_string(d));
    }
    throw ParameterError("isotropic decomposition needs odd d >= 3, got " + std::to_string(d));
  }
  const double lower = (4.0 * d - 4.0) / (static_cast<double>(d) * d);
  if (!(F > lower && F <= 1.0)) {
    throw ParameterError("F = " + num(F) + " violates F>(4d-4)/d^2 = " + num(lower) +
                         " (and F <= 1)");
  }
  if (m < 2) throw ParameterError("m = " + std::to_string(m) + " must be > 1");
}

void Werner::validate() const {
  if (d < 2) throw ParameterError("Werner dimension must be >= 2");
  if (!(F >= -1.0 && F <= 1.0)) throw ParameterError("F = " + num(F) + " outside [-1, 1]");
}

void SeparableTags::validate() const {
  if (tags.empty()) throw ParameterError("separable family needs at least one tag");
  const auto len = tags.front().size();
  for (const auto& t : tags) {
    if (t.empty() || t.size() % 2 != 0) {
      throw ParameterError("separable tag '" + t + "' must have even nonzero length");
    }
    if (t.size() != len) throw ParameterError("separable tags have different lengths");
    for (char ch : t) {
      if (ch != '0' && ch != '1' && ch != '+' && ch != '-') {
        throw ParameterError("separable tag '" + t + "' uses a symbol other than 0, 1, +, -");
      }
    }
  }
}

void validate(const FamilyParams& params) {
  std::visit([](const auto& p) { p.validate(); }, params);
}

std::string family_name(const FamilyParams& params) {
  struct Namer {
    std::string operator()(const McTwoQubit&) const { return "mc2"; }
    std::string operator()(const Sigma&) const { return "sigma"; }
    std::string operator()(const Lemma3Mc&) const { return "lemma3"; }
    std::string operator()(const Isotropic&) const { return "isotropic"; }
    std::string operator()(const Werner&) const { return "werner"; }
    std::string operator()(const SeparableTags&) const { return "separable"; }
  };
  return std::visit(Namer{}, params);
}

std::string describe(const FamilyParams& params) {
  struct Describer {
    std::string operator()(const McTwoQubit& v) const {
      return "mc2(p=" + num(v.p) + ", theta=" + num(v.theta) + ")";
    }
    std::string operator()(const Sigma& v) const {
      return "sigma(q=" + num(v.q) + ", p=" + num(v.p) + ", x=" + num(v.x) + ", y=" + num(v.y) +
             ", z=" + num(v.z) + ")";
    }
    std::string operator()(const Lemma3Mc& v) const {
      std::string cs;
      for (double ci : v.c) cs += (cs.empty() ? "" : " ") + num(ci);
      return "lemma3(p=" + num(v.p) + ", c=[" + cs + "], f=" + std::to_string(v.f) + ")";
    }
    std::string operator()(const Isotropic& v) const {
      return "isotropic(d=" + std::to_string(v.d) + ", F=" + num(v.F) +
             ", m=" + std::to_string(v.m) + ")";
    }
    std::string operator()(const Werner& v) const {
      return "werner(d=" + std::to_string(v.d) + ", F=" + num(v.F) + ")";
    }
    std::string operator()(const SeparableTags& v) const {
      std::string ts;
      for (const auto& t : v.tags) ts += (ts.empty() ? "" : " ") + t;
      return "separable(" + ts + ")";
    }
  };
  return std::visit(Describer{}, params);
}

// ---------------------------------------------------------------------------

PureKet mc_ket(double theta) {
  CVector v = CVector::Zero(4);
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  return PureKet(v, {2, 2});
}

PureKet max_entangled(int d) {
  if (d < 2) throw ParameterError("max_entangled needs d >= 2");
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureKet(v, {d, d});
}

PureKet product_ket_from_tag(const std::string& tag) {
  SeparableTags{{tag}}.validate();
  const int k = static_cast<int>(tag.size() / 2);
  const double r = 1.0 / std::sqrt(2.0);
  auto qubit = [&](char ch) {
    CVector q(2);
    switch (ch) {
      case '0': q << 1.0, 0.0; break;
      case '1': q << 0.0, 1.0; break;
      case '+': q << r, r; break;
      default: q << r, -r; break;
    }
    return q;
  };
  CVector a = qubit(tag[0]);
  for (int i = 1; i < k; ++i) a = kron(a, qubit(tag[i]));
  CVector b = qubit(tag[k]);
  for (int i = k + 1; i < 2 * k; ++i) b = kron(b, qubit(tag[i]));
  const int d = 1 << k;
  return PureKet::normalized(kron(a, b), {d, d});
}

BipartiteDensity mc_two_qubit(double p, double theta) {
  McTwoQubit{p, theta}.validate();
  const CMatrix rho = p * outer(mc_ket(theta).vector()) +
                      (1.0 - p) * outer(mc_ket(kPi / 2 - theta).vector());
  return BipartiteDensity(rho, {2, 2});
}

double sigma_angle(double p, double x) {
  if (p <= 0.0 || p >= 1.0 || x == 0.0) {
    throw DegenerateParameterError("denominator 2x sqrt(p-p^2) vanishes (p = " + num(p) +
                                   ", x = " + num(x) + ")");
  }
  const double a = 1.0 - p;
  // Analytically nonnegative for x in [0, 1]; roundoff can push it below 0 at x = 1.
  const double radicand = std::max(0.0, 1.0 + 4.0 * a * a * (x * x * x * x - x * x));
  const double numerator = -1.0 + 2.0 * a * x * x - std::sqrt(radicand);
  const double denominator = 2.0 * x * std::sqrt(p - p * p);
  return std::atan(numerator / denominator);
}

std::pair<PureKet, PureKet> sigma_kets(double p, double x, double y, double z) {
  Sigma{0.0, p, x, y, z}.validate();
  const double theta = sigma_angle(p, x);
  CVector e00 = CVector::Zero(4);
  e00(0) = 1.0;
  CVector tilted = CVector::Zero(4);
  tilted(0) = x;
  tilted(1) = y;
  tilted(3) = z;
  const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);
  const double c = std::cos(theta), s = std::sin(theta);
  const CVector alpha = sp * c * e00 + sq * s * tilted;
  const CVector beta = sp * s * e00 - sq * c * tilted;
  return {PureKet::normalized(alpha, {2, 2}), PureKet::normalized(beta, {2, 2})};
}

SigmaState sigma_family_state(double q, double p, double x, double y, double z) {
  Sigma{q, p, x, y, z}.validate();
  const double theta = sigma_angle(p, x);
  const auto [alpha, beta] = sigma_kets(p, x, y, z);
  const CMatrix rho = q * outer(alpha.vector()) + (1.0 - q) * outer(beta.vector());
  return {BipartiteDensity(rho, {2, 2}), theta};
}

std::pair<PureKet, PureKet> lemma3_kets(const std::vector<double>& c, int f) {
  Lemma3Mc{0.0, c, f}.validate();
  const int d = static_cast<int>(c.size());
  CVector psi = CVector::Zero(d * d);
  CVector phi = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = c[i];
  for (int i = 0; i < f; ++i) phi(i * d + i) = c[i];
  return {PureKet::normalized(psi, {d, d}), PureKet::normalized(phi, {d, d})};
}

double lemma3_angle(const std::vector<double>& c, int f) {
  Lemma3Mc{0.0, c, f}.validate();
  double head = 0.0;
  for (int i = 0; i < f; ++i) head += c[i] * c[i];
  return std::acos(std::min(1.0, std::sqrt(head)));
}

BipartiteDensity lemma3_mc(double p, const std::vector<double>& c, int f) {
  Lemma3Mc{p, c, f}.validate();
  const auto [psi, phi] = lemma3_kets(c, f);
  const int d = static_cast<int>(c.size());
  return BipartiteDensity(p * outer(psi.vector()) + (1.0 - p) * outer(phi.vector()), {d, d});
}

BipartiteDensity isotropic(int d, double F) {
  if (d < 2) throw ParameterError("isotropic state needs d >= 2");
  require_unit_interval(F, "F");
  const double dd = static_cast<double>(d) * d;
  const CMatrix rho = (1.0 - F) / (dd - 1.0) * CMatrix::Identity(d * d, d * d) +
                      (F * dd - 1.0) / (dd - 1.0) * outer(max_entangled(d).vector());
  return BipartiteDensity(rho, {d, d});
}

BipartiteDensity werner(int d, double F) {
  Werner{d, F}.validate();
  const double denom = static_cast<double>(d) * d * d - d;
  const CMatrix rho = (d - F) / denom * CMatrix::Identity(d * d, d * d) +
                      (d * F - 1.0) / denom * swap_operator(d);
  return BipartiteDensity(rho, {d, d});
}

BipartiteDensity isotropic_twirl(const BipartiteDensity& rho) {
  const auto dims = rho.dims();
  if (dims.dA != dims.dB) throw ShapeError("isotropic_twirl needs dA == dB");
  const CVector plus = max_entangled(dims.dA).vector();
  const double F = std::clamp((plus.adjoint() * rho.matrix() * plus)(0, 0).real(), 0.0, 1.0);
  return isotropic(dims.dA, F);
}

BipartiteDensity werner_block_state(int d, double F) {
  Werner{d, F}.validate();
  // Basis order |00>, |01>, |10>, |11> with level 0 <-> i and level 1 <-> j.
  const double pair_weight = (F + 1.0) / (2.0 * d + 2.0);
  const double sym_weight = (d - 1.0) * (F + 1.0) / (2.0 * d + 2.0);
  const double anti_weight = (1.0 - F) / 2.0;
  CVector sym = CVector::Zero(4), anti = CVector::Zero(4);
  sym(1) = sym(2) = 1.0 / std::sqrt(2.0);
  anti(1) = 1.0 / std::sqrt(2.0);
  anti(2) = -1.0 / std::sqrt(2.0);
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(0, 0) = pair_weight;
  rho(3, 3) = pair_weight;
  rho += sym_weight * outer(sym) + anti_weight * outer(anti);
  return BipartiteDensity(rho, {2, 2});
}

BipartiteDensity werner_mixing_channel(const BipartiteDensity& qubit_state, int d) {
  if (qubit_state.dims() != BipartiteDims(2, 2)) {
    throw ShapeError("werner_mixing_channel expects a two-qubit input");
  }
  if (d < 3) throw ParameterError("werner_mixing_channel needs d >= 3");
  const double weight = 2.0 / (static_cast<double>(d) * d - d);
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      CMatrix embed = CMatrix::Zero(d, 2);
      embed(i, 0) = 1.0;
      embed(j, 1) = 1.0;
      const CMatrix e = kron(embed, embed);
      out += weight * e * qubit_state.matrix() * e.adjoint();
    }
  }
  return BipartiteDensity(out, {d, d});
}

BipartiteDensity ensemble_mix(const WeightedEnsemble& ensemble) {
  const auto dims = ensemble.dims();
  CMatrix rho = CMatrix::Zero(dims.total(), dims.total());
  for (const auto& m : ensemble.members()) rho += m.weight * outer(m.ket.vector());
  return BipartiteDensity(rho, dims);
}

bool is_maximally_correlated(const CMatrix& rho, BipartiteDims dims, double tol) {
  if (dims.dA != dims.dB) return false;
  const int d = dims.dA;
  for (int r = 0; r < dims.total(); ++r) {
    for (int c = 0; c < dims.total(); ++c) {
      const bool on_pattern = (r / d == r % d) && (c / d == c % d);
      if (!on_pattern && std::abs(rho(r, c)) > tol) return false;
    }
  }
  return true;
}

BipartiteDensity random_density(BipartiteDims dims, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > dims.total()) throw ParameterError("random_density: bad rank");
  std::mt19937_64 rng(seed);
  const CMatrix g = random_gaussian(dims.total(), rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return BipartiteDensity(rho, dims);
}

}  // namespace odeof
