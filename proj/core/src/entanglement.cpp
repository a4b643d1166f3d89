#include "odeof/entanglement.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

namespace odeof {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPatternTol = 1e-10;

// -x log2 x with the 0 log 0 = 0 convention.
double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

double binary_entropy(double x) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    throw DomainError("binary entropy argument " + std::to_string(x) + " outside [0, 1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double shannon_entropy(const RVector& probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p > kEigenFloor) s -= xlog2x(p);
  }
  return s;
}

double von_neumann_entropy(const CMatrix& rho) {
  RVector ev = eigvals_hermitian(rho);
  const double trace = ev.sum();
  if (std::abs(trace - 1.0) > 1e-8) {
    throw NormalizationError("entropy argument has trace " + std::to_string(trace));
  }
  if (ev(ev.size() - 1) < -kPsdTol) {
    throw PsdError("entropy argument has eigenvalue " + std::to_string(ev(ev.size() - 1)));
  }
  ev /= trace;
  return shannon_entropy(ev);
}

double pure_entanglement(const PureKet& ket) {
  const RVector s = ket.schmidt();
  return shannon_entropy(s.cwiseAbs2());
}

double average_entanglement(const WeightedEnsemble& ensemble) {
  double total = 0.0;
  for (const auto& m : ensemble.members()) total += m.weight * pure_entanglement(m.ket);
  return total;
}

double concurrence(const BipartiteDensity& rho) {
  if (rho.dims() != BipartiteDims(2, 2)) {
    throw ShapeError("concurrence is defined here for two-qubit states only");
  }
  const CMatrix& r = rho.matrix();
  CMatrix yy = CMatrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;

  // With rho = Phi Phi^dagger (Phi = V sqrt(Lambda)), Wootters' lambdas are the
  // singular values of the symmetric matrix Phi^T (sy x sy) Phi. Taking them
  // from an SVD avoids square roots of tiny eigenvalues of rho rho~.
  const HermitianEigen e = eig_hermitian(r);
  const CMatrix phi = e.vectors * e.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const CMatrix tau = phi.transpose() * yy * phi;
  const RVector lam = Eigen::JacobiSVD<CMatrix>(tau).singularValues();
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - c * c)));
}

double wootters_eof(const BipartiteDensity& rho) { return eof_from_concurrence(concurrence(rho)); }

double eof_mc_two_qubit(double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2)) {
    throw ParameterError("theta outside [0, pi/2]");
  }
  const double c = std::cos(theta);
  return binary_entropy(c * c);
}

double eof_sigma(double p, double x, double z) {
  for (double v : {p, x, z}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("sigma parameter outside [0, 1]");
  }
  if (x * x + z * z > 1.0 + 1e-9) throw ParameterError("x^2 + z^2 exceeds 1");
  const double a = 1.0 - p;
  const double radicand = std::max(0.0, 1.0 - 4.0 * a * a * x * x * z * z);
  return binary_entropy(0.5 + 0.5 * std::sqrt(radicand));
}

double eof_lemma3(double p, const std::vector<double>& c, int f) {
  Lemma3Mc{p, c, f}.validate();
  double head = 0.0;
  for (int i = 0; i < f; ++i) head += c[i] * c[i];
  const double cos2 = head;  // cos^2(theta)
  const double theta = std::acos(std::min(1.0, std::sqrt(head)));
  const double s2t = std::sin(2.0 * theta);

  double full = 0.0;
  for (double ci : c) full -= xlog2x(ci * ci);
  double restricted = 0.0;
  for (int i = 0; i < f; ++i) restricted -= xlog2x(c[i] * c[i] / cos2);

  const double radicand = std::max(0.0, 1.0 - p * p * s2t * s2t);
  return p * full + (1.0 - p) * restricted + binary_entropy(0.5 + 0.5 * std::sqrt(radicand)) -
         p * binary_entropy(cos2);
}

double eof_isotropic_member(int d) {
  if (d < 3) throw ParameterError("isotropic member entanglement needs d >= 3");
  const double dd = d;
  return (2.0 - dd) / dd * std::log2(dd - 1.0) + std::log2(dd);
}

double eof_isotropic_family(int d, double member_weight) {
  if (!(member_weight >= 0.0 && member_weight <= 1.0)) {
    throw ParameterError("member weight outside [0, 1]");
  }
  return member_weight * eof_isotropic_member(d) + (1.0 - member_weight) * std::log2(d);
}

double eof_isotropic(int d, double F) {
  Isotropic{d, F, 2}.validate();
  const double dd = d;
  const double member_weight = dd * dd * (1.0 - F) / ((dd - 2.0) * (dd - 2.0));
  return eof_isotropic_family(d, std::clamp(member_weight, 0.0, 1.0));
}

double eof_werner(double F) {
  if (!(F >= -1.0 && F < 0.0)) {
    throw DomainError("F = " + std::to_string(F) + " is not in the entangled range [-1, 0)");
  }
  return binary_entropy(0.5 + 0.5 * std::sqrt(1.0 - F * F));
}

double distillable_mc(const BipartiteDensity& rho, Side traced) {
  if (!is_maximally_correlated(rho.matrix(), rho.dims(), kPatternTol)) {
    throw PatternError("state is not maximally correlated (entries outside |ii><jj|)");
  }
  const Side keep = traced == Side::A ? Side::B : Side::A;
  const double marginal = von_neumann_entropy(partial_trace(rho.matrix(), rho.dims(), keep));
  return std::max(0.0, marginal - von_neumann_entropy(rho.matrix()));
}

double gap_tensor_mc(const std::vector<double>& thetas, const BipartiteDensity& rho) {
  if (thetas.empty()) throw ParameterError("gap_tensor_mc needs at least one angle");
  const int side = 1 << thetas.size();
  if (rho.dims() != BipartiteDims(side, side)) {
    throw ShapeError("state dims do not match 2^n x 2^n for n = " +
                     std::to_string(thetas.size()));
  }
  if (!is_maximally_correlated(rho.matrix(), rho.dims(), kPatternTol)) {
    throw PatternError("state is not maximally correlated (entries outside |ii><jj|)");
  }
  double cost = 0.0;
  for (double t : thetas) cost += eof_mc_two_qubit(t);
  const double marginal = von_neumann_entropy(partial_trace(rho.matrix(), rho.dims(), Side::B));
  return cost - marginal + von_neumann_entropy(rho.matrix());
}

double gap_lemma3(double p, double theta) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p outside [0, 1]");
  if (!(theta > 0.0 && theta < kPi / 2)) throw ParameterError("theta outside (0, pi/2)");
  const double s = std::sin(theta);
  const double s2 = s * s;
  const double s2t = std::sin(2.0 * theta);
  const double r1 = std::max(0.0, 1.0 - p * p * s2t * s2t);
  const double r3 = std::max(0.0, 1.0 - 4.0 * p * s2 + 4.0 * p * p * s2);
  return binary_entropy(0.5 + 0.5 * std::sqrt(r1)) - binary_entropy(p * s2) +
         binary_entropy(0.5 + 0.5 * std::sqrt(r3));
}

EntanglementReport family_report(const FamilyParams& params) {
  validate(params);
  EntanglementReport r;
  r.family = family_name(params);
  auto with_mc = [&r](const BipartiteDensity& rho) {
    r.cost = r.eof;
    r.distillable = distillable_mc(rho);
    r.gap = *r.cost - *r.distillable;
  };
  if (const auto* mc = std::get_if<McTwoQubit>(&params)) {
    r.eof = eof_mc_two_qubit(mc->theta);
    with_mc(mc_two_qubit(mc->p, mc->theta));
  } else if (const auto* s = std::get_if<Sigma>(&params)) {
    r.eof = eof_sigma(s->p, s->x, s->z);
    r.cost = r.eof;
  } else if (const auto* l = std::get_if<Lemma3Mc>(&params)) {
    r.eof = eof_lemma3(l->p, l->c, l->f);
    with_mc(lemma3_mc(l->p, l->c, l->f));
  } else if (const auto* iso = std::get_if<Isotropic>(&params)) {
    r.eof = eof_isotropic(iso->d, iso->F);
  } else if (const auto* w = std::get_if<Werner>(&params)) {
    r.eof = eof_werner(w->F);
  } else {
    r.eof = 0.0;
    r.cost = 0.0;
  }
  return r;
}

}  // namespace odeof
