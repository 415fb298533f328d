// matcore.hpp — dense complex matrix substrate: Kronecker products, partial
// traces, Hermitian eigendecomposition, positivity tests, Schatten norms.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace algprob {

using cplx = std::complex<double>;

// Row-major dense complex matrix, the carrier of every algebra element.
using CMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Error hierarchy.  Validation failures (bad input objects) are kept apart
// from numerical failures (an algorithm could not deliver its contract).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};
// Conditioning on an event of (numerically) zero probability.
struct ZeroProbabilityError : Error {
  using Error::Error;
};

namespace defaults {
inline constexpr double herm_tol = 1e-10;
inline constexpr double psd_tol = 1e-9;
inline constexpr double density_tol = 1e-9;
inline constexpr double cluster_tol = 1e-8;
inline constexpr double prob_tol = 1e-12;
inline constexpr double span_tol = 1e-9;
}  // namespace defaults

struct HermitianEig {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // unitary, columns; phase-fixed
};

// Largest absolute entry; scale reference for relative tolerances.
double max_abs(const CMatrix& m);

CMatrix identity(Eigen::Index n);
CMatrix zero(Eigen::Index rows, Eigen::Index cols);

// Pauli matrices and the Hadamard gate; used throughout the qubit examples.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix hadamard();

bool is_hermitian(const CMatrix& m, double tol = defaults::herm_tol);

// (a ⊗ b)[i·q + k, j·r + l] = a[i,j] · b[k,l], b of shape q×r.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Trace out the factors not listed in `keep`.  `dims` are the factor sides,
// factor 0 being the leftmost (most significant) in the Kronecker order;
// `keep` holds factor indices in increasing order.
CMatrix partial_trace(const CMatrix& m, const std::vector<Eigen::Index>& dims,
                      const std::vector<std::size_t>& keep);

// Schatten p-norm (Σ σ_j^p)^{1/p}; p = ∞ gives the largest singular value.
double schatten_norm(const CMatrix& m, double p);

// Eigendecomposition of a Hermitian matrix.  Eigenvalues ascending; each
// eigenvector's phase is fixed by making its largest-modulus component real
// and nonnegative.  Vectors inside a degenerate cluster are an arbitrary
// orthonormal basis of the eigenspace; only cluster projectors are stable.
HermitianEig hermitian_eig(const CMatrix& m, double herm_tol = defaults::herm_tol);

// True iff min eigenvalue ≥ −tol·max(1, ‖m‖_max).
bool is_psd(const CMatrix& m, double tol = defaults::psd_tol);

// tr(a† b).
cplx frobenius_inner(const CMatrix& a, const CMatrix& b);

// Hermitian square root with eigenvalues in [−tol, 0) clipped to zero.
// Idempotents are returned unchanged so projector roots stay exact.
CMatrix psd_sqrt(const CMatrix& m, double tol = defaults::psd_tol);

}  // namespace algprob
