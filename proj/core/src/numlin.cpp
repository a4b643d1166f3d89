#include "odeof/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace odeof {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  }
}

void require_bipartite(const CMatrix& m, BipartiteDims dims, const char* what) {
  require_square(m, what);
  if (m.rows() != dims.total()) {
    throw ShapeError(std::string(what) + ": matrix dimension " + std::to_string(m.rows()) +
                     " does not match dA*dB = " + std::to_string(dims.total()));
  }
}

}  // namespace

BipartiteDims::BipartiteDims(int a, int b) : dA(a), dB(b) {
  if (a < 1 || b < 1) {
    throw ShapeError("subsystem dimensions must be positive, got (" + std::to_string(a) + ", " +
                     std::to_string(b) + ")");
  }
}

double hermiticity_defect(const CMatrix& m) {
  require_square(m, "hermiticity_defect");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen eig_hermitian(const CMatrix& m, double tol) {
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw HermiticityError("max|M - M^dagger| = " + std::to_string(defect) + " exceeds " +
                           std::to_string(tol));
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  // Eigen returns ascending order.
  const auto n = sym.rows();
  HermitianEigen out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

RVector eigvals_hermitian(const CMatrix& m, double tol) {
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw HermiticityError("max|M - M^dagger| = " + std::to_string(defect) + " exceeds " +
                           std::to_string(tol));
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

CMatrix amplitude_matrix(const CVector& v, BipartiteDims dims) {
  if (v.size() != dims.total()) {
    throw ShapeError("vector length " + std::to_string(v.size()) + " does not match dA*dB = " +
                     std::to_string(dims.total()));
  }
  CMatrix m(dims.dA, dims.dB);
  for (int a = 0; a < dims.dA; ++a)
    for (int b = 0; b < dims.dB; ++b) m(a, b) = v(a * dims.dB + b);
  return m;
}

RVector schmidt_coefficients(const CVector& v, BipartiteDims dims) {
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw NormalizationError("vector norm " + std::to_string(norm) + " differs from 1");
  }
  Eigen::JacobiSVD<CMatrix> svd(amplitude_matrix(v, dims));
  return svd.singularValues();  // already descending
}

CMatrix partial_trace(const CMatrix& rho, BipartiteDims dims, Side keep) {
  require_bipartite(rho, dims, "partial_trace");
  const int dA = dims.dA, dB = dims.dB;
  if (keep == Side::A) {
    CMatrix out = CMatrix::Zero(dA, dA);
    for (int a = 0; a < dA; ++a)
      for (int a2 = 0; a2 < dA; ++a2)
        for (int b = 0; b < dB; ++b) out(a, a2) += rho(a * dB + b, a2 * dB + b);
    return out;
  }
  CMatrix out = CMatrix::Zero(dB, dB);
  for (int b = 0; b < dB; ++b)
    for (int b2 = 0; b2 < dB; ++b2)
      for (int a = 0; a < dA; ++a) out(b, b2) += rho(a * dB + b, a * dB + b2);
  return out;
}

CMatrix partial_transpose(const CMatrix& rho, BipartiteDims dims, Side side) {
  require_bipartite(rho, dims, "partial_transpose");
  const int dA = dims.dA, dB = dims.dB;
  CMatrix out(rho.rows(), rho.cols());
  for (int a = 0; a < dA; ++a)
    for (int b = 0; b < dB; ++b)
      for (int a2 = 0; a2 < dA; ++a2)
        for (int b2 = 0; b2 < dB; ++b2) {
          const auto src = side == Side::A ? rho(a2 * dB + b, a * dB + b2)
                                           : rho(a * dB + b2, a2 * dB + b);
          out(a * dB + b, a2 * dB + b2) = src;
        }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

BipartiteDims joined_dims(BipartiteDims dx, BipartiteDims dy) {
  return BipartiteDims(dx.dA * dy.dA, dx.dB * dy.dB);
}

CVector bipartite_kron(const CVector& x, BipartiteDims dx, const CVector& y, BipartiteDims dy) {
  if (x.size() != dx.total() || y.size() != dy.total()) {
    throw ShapeError("bipartite_kron: vector length does not match its dims");
  }
  const BipartiteDims dj = joined_dims(dx, dy);
  CVector out(dj.total());
  for (int a1 = 0; a1 < dx.dA; ++a1)
    for (int b1 = 0; b1 < dx.dB; ++b1)
      for (int a2 = 0; a2 < dy.dA; ++a2)
        for (int b2 = 0; b2 < dy.dB; ++b2) {
          const int a = a1 * dy.dA + a2;
          const int b = b1 * dy.dB + b2;
          out(a * dj.dB + b) = x(a1 * dx.dB + b1) * y(a2 * dy.dB + b2);
        }
  return out;
}

CMatrix bipartite_kron(const CMatrix& x, BipartiteDims dx, const CMatrix& y, BipartiteDims dy) {
  require_bipartite(x, dx, "bipartite_kron");
  require_bipartite(y, dy, "bipartite_kron");
  const BipartiteDims dj = joined_dims(dx, dy);
  // Index map from joined bipartite order to (x index, y index).
  std::vector<std::pair<int, int>> split(dj.total());
  for (int a1 = 0; a1 < dx.dA; ++a1)
    for (int b1 = 0; b1 < dx.dB; ++b1)
      for (int a2 = 0; a2 < dy.dA; ++a2)
        for (int b2 = 0; b2 < dy.dB; ++b2) {
          const int joined = (a1 * dy.dA + a2) * dj.dB + (b1 * dy.dB + b2);
          split[joined] = {a1 * dx.dB + b1, a2 * dy.dB + b2};
        }
  CMatrix out(dj.total(), dj.total());
  for (int r = 0; r < dj.total(); ++r)
    for (int c = 0; c < dj.total(); ++c)
      out(r, c) = x(split[r].first, split[c].first) * y(split[r].second, split[c].second);
  return out;
}

double frob_dist(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("frob_dist: shapes differ");
  }
  return (a - b).norm();
}

CMatrix outer(const CVector& v) { return v * v.adjoint(); }

CMatrix swap_operator(int d) {
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  return s;
}

CMatrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

CMatrix random_isometry(int rows, int cols, std::mt19937_64& rng) {
  if (cols > rows) {
    throw ShapeError("random_isometry: need rows >= cols");
  }
  const CMatrix g = random_gaussian(rows, cols, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  // Fix the column phases against diag(R) so the distribution is Haar.
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < cols; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix random_unitary(int n, std::mt19937_64& rng) { return random_isometry(n, n, rng); }

}  // namespace odeof
