#include "algprob/states.hpp"

#include <cmath>

namespace algprob {

PureState::PureState(CVector ket, double tol) : ket_(std::move(ket)) {
  if (ket_.size() == 0) throw ShapeError("PureState: empty vector");
  const double n = ket_.norm();
  if (std::abs(n - 1.0) > tol)
    throw ValidationError("PureState: vector norm " + std::to_string(n) +
                          " != 1");
}

PureState PureState::normalized(const CVector& v, double tol) {
  const double n = v.norm();
  if (n <= 1e-14)
    throw ValidationError("PureState: cannot normalize a zero vector");
  return PureState(v / n, tol);
}

DensityMatrix::DensityMatrix(CMatrix mat, double tol) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols())
    throw ShapeError("DensityMatrix: matrix must be square");
  if (!is_hermitian(mat_, tol))
    throw ValidationError("DensityMatrix: matrix not Hermitian");
  const double tr_defect = std::abs(mat_.trace() - cplx(1.0));
  if (tr_defect > tol)
    throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                          std::to_string(tr_defect));
  if (!is_psd(mat_, tol))
    throw ValidationError("DensityMatrix: matrix not positive semidefinite");
}

DensityMatrix DensityMatrix::repair(const CMatrix& mat, double tol,
                                    bool* repaired) {
  if (repaired) *repaired = false;
  // Fast path: the matrix is already a valid density at a tight tolerance.
  try {
    return DensityMatrix(mat, std::min(tol, 1e-12));
  } catch (const ValidationError&) {
  }
  if (mat.rows() != mat.cols())
    throw ShapeError("DensityMatrix: matrix must be square");
  if (!is_hermitian(mat, tol))
    throw ValidationError("DensityMatrix: matrix not Hermitian");
  const HermitianEig eig = hermitian_eig(0.5 * (mat + CMatrix(mat.adjoint())));
  const double lo = eig.eigenvalues.minCoeff();
  if (lo < -tol)
    throw ValidationError("DensityMatrix: min eigenvalue " +
                          std::to_string(lo) + " below -tol");
  RVector vals = eig.eigenvalues.cwiseMax(0.0);
  const double tr = vals.sum();
  if (tr <= 0.0) throw ValidationError("DensityMatrix: zero trace");
  if (std::abs(tr - 1.0) > tol)
    throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                          std::to_string(std::abs(tr - 1.0)));
  if (repaired) *repaired = true;
  vals /= tr;
  CMatrix fixed =
      eig.eigenvectors * vals.asDiagonal() * eig.eigenvectors.adjoint();
  fixed = 0.5 * (fixed + CMatrix(fixed.adjoint()));
  return DensityMatrix(std::move(fixed), unchecked_t{});
}

double BlochVector::norm() const { return std::sqrt(u * u + v * v + w * w); }

DensityMatrix density_from_vector(const PureState& psi) {
  const CVector& k = psi.ket();
  CMatrix rho = k * k.adjoint();
  return DensityMatrix(std::move(rho));
}

DensityMatrix bloch_to_density(const BlochVector& b, double tol) {
  if (b.norm() > 1.0 + tol)
    throw DomainError("bloch_to_density: Bloch norm " + std::to_string(b.norm()) +
                      " exceeds 1");
  CMatrix rho(2, 2);
  rho << cplx(0.5 * (1 + b.w), 0), cplx(0.5 * b.u, -0.5 * b.v),
      cplx(0.5 * b.u, 0.5 * b.v), cplx(0.5 * (1 - b.w), 0);
  bool repaired = false;
  return DensityMatrix::repair(rho, std::max(tol, 1e-12), &repaired);
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ShapeError("density_to_bloch: density must be 2x2");
  BlochVector b;
  b.u = (rho.mat() * pauli_x()).trace().real();
  b.v = (rho.mat() * pauli_y()).trace().real();
  b.w = (rho.mat() * pauli_z()).trace().real();
  return b;
}

int rank_class(const DensityMatrix& rho, double tol) {
  const HermitianEig eig = hermitian_eig(rho.mat());
  int r = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > tol) ++r;
  return r;
}

double purity(const DensityMatrix& rho) {
  return (rho.mat() * rho.mat()).trace().real();
}

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& terms,
                  double tol) {
  if (terms.empty()) throw DomainError("mix: no terms");
  const Eigen::Index n = terms.front().second.dim();
  double wsum = 0.0;
  CMatrix acc = CMatrix::Zero(n, n);
  for (const auto& [w, rho] : terms) {
    if (rho.dim() != n) throw ShapeError("mix: dimension mismatch");
    if (w < -tol) throw DomainError("mix: negative weight");
    wsum += w;
    acc += w * rho.mat();
  }
  if (std::abs(wsum - 1.0) > tol)
    throw DomainError("mix: weights sum to " + std::to_string(wsum));
  return DensityMatrix::repair(acc, std::max(tol, defaults::density_tol));
}

DensityMatrix product_density(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::repair(kron(a.mat(), b.mat()));
}

DensityMatrix reduced_density(const DensityMatrix& rho,
                              const std::vector<Eigen::Index>& dims,
                              const std::vector<std::size_t>& keep) {
  return DensityMatrix::repair(partial_trace(rho.mat(), dims, keep));
}

}  // namespace algprob
