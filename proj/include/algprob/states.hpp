// states.hpp — density matrices, Bloch parametrization, mixing, tensoring,
// reduction, rank classification.
#pragma once

#include <utility>
#include <vector>

#include "algprob/matcore.hpp"

namespace algprob {

// Unit vector state |ψ⟩.
class PureState {
 public:
  explicit PureState(CVector ket, double tol = defaults::density_tol);

  // Normalizes the vector first; throws on a (near-)zero vector.
  static PureState normalized(const CVector& v, double tol = defaults::density_tol);

  const CVector& ket() const { return ket_; }
  Eigen::Index dim() const { return ket_.size(); }

 private:
  CVector ket_;
};

// Positive unit-trace matrix ρ; carries the state ϖ_ρ = tr(ρ ·).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix mat, double tol = defaults::density_tol);

  // Accepts an almost-density polluted by numerical noise: eigenvalues in
  // [−tol, 0) are clipped to 0 and the trace renormalized.  `repaired` is set
  // iff anything was touched.  Genuine violations still throw.
  static DensityMatrix repair(const CMatrix& mat, double tol = defaults::density_tol,
                              bool* repaired = nullptr);

  const CMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  struct unchecked_t {};
  DensityMatrix(CMatrix mat, unchecked_t) : mat_(std::move(mat)) {}
  CMatrix mat_;
};

struct BlochVector {
  double u = 0, v = 0, w = 0;
  double norm() const;
};

// ρ = |ψ⟩⟨ψ|.
DensityMatrix density_from_vector(const PureState& psi);

// ρ = ½(I + uX + vY + wZ); requires ‖(u,v,w)‖ ≤ 1.
DensityMatrix bloch_to_density(const BlochVector& b,
                               double tol = defaults::density_tol);

// Inverse map: u = tr(ρX), v = tr(ρY), w = tr(ρZ).
BlochVector density_to_bloch(const DensityMatrix& rho);

// Number of eigenvalues > tol; 1 iff pure.
int rank_class(const DensityMatrix& rho, double tol = defaults::density_tol);

// tr(ρ²).
double purity(const DensityMatrix& rho);

// Σ w_i ρ_i with w_i ≥ 0, Σ w_i = 1.
DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& terms,
                  double tol = defaults::density_tol);

// a ⊗ b.
DensityMatrix product_density(const DensityMatrix& a, const DensityMatrix& b);

// Partial trace revalidated as a density.
DensityMatrix reduced_density(const DensityMatrix& rho,
                              const std::vector<Eigen::Index>& dims,
                              const std::vector<std::size_t>& keep);

}  // namespace algprob
