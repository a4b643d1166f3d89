#pragma once

// Dense complex linear algebra used throughout the library.
//
// Bipartite index convention: a vector or matrix on H_A (x) H_B is indexed by
// the composite index a * dB + b (A-major). Every routine here and every state
// constructor relies on that ordering.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "odeof/errors.hpp"

namespace odeof {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-10;
// Eigenvalues below this are treated as exact zeros when used as weights.
inline constexpr double kEigenFloor = 1e-12;

struct BipartiteDims {
  int dA = 1;
  int dB = 1;

  BipartiteDims() = default;
  BipartiteDims(int a, int b);

  int total() const { return dA * dB; }
  int min_side() const { return dA < dB ? dA : dB; }
  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

/// Which tensor factor an operation acts on.
enum class Side { A, B };

struct HermitianEigen {
  RVector values;   // descending
  CMatrix vectors;  // orthonormal columns, matching `values`
};

/// Largest entry of |M - M^dagger|; M must be square.
double hermiticity_defect(const CMatrix& m);

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted descending.
/// The input is symmetrized as (M + M^dagger)/2 before decomposition.
/// Throws ShapeError for non-square input and HermiticityError when
/// max|M - M^dagger| exceeds `tol`.
HermitianEigen eig_hermitian(const CMatrix& m, double tol = kHermitianTol);

/// Eigenvalues only, descending; same validation as eig_hermitian.
RVector eigvals_hermitian(const CMatrix& m, double tol = kHermitianTol);

/// Schmidt coefficients of a unit vector, descending, length min(dA, dB).
RVector schmidt_coefficients(const CVector& v, BipartiteDims dims);

/// Reshape a bipartite vector into its dA x dB amplitude matrix.
CMatrix amplitude_matrix(const CVector& v, BipartiteDims dims);

/// Reduced matrix on the `keep` factor.
CMatrix partial_trace(const CMatrix& rho, BipartiteDims dims, Side keep);

/// Transpose of the `side` factor only. Applying it twice is the identity.
CMatrix partial_transpose(const CMatrix& rho, BipartiteDims dims, Side side);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

/// Tensor product that keeps the bipartite cut: given kets on A1|B1 and
/// A2|B2, returns the ket on (A1 A2)|(B1 B2) with joined indices
/// a1 * dA2 + a2 and b1 * dB2 + b2. Plain `kron` would instead produce the
/// ordering A1 B1 A2 B2.
CVector bipartite_kron(const CVector& x, BipartiteDims dx, const CVector& y,
                       BipartiteDims dy);
CMatrix bipartite_kron(const CMatrix& x, BipartiteDims dx, const CMatrix& y,
                       BipartiteDims dy);
BipartiteDims joined_dims(BipartiteDims dx, BipartiteDims dy);

double frob_dist(const CMatrix& a, const CMatrix& b);

/// Projector |v><v|.
CMatrix outer(const CVector& v);

/// SWAP operator on C^d (x) C^d: |ij> -> |ji>.
CMatrix swap_operator(int d);

// Seeded random matrices. The generator is passed explicitly so callers own
// reproducibility.
CMatrix random_gaussian(int rows, int cols, std::mt19937_64& rng);
/// N x r isometry obtained by orthonormalizing a complex Gaussian matrix.
CMatrix random_isometry(int rows, int cols, std::mt19937_64& rng);
/// Haar-distributed unitary.
CMatrix random_unitary(int n, std::mt19937_64& rng);

}  // namespace odeof
