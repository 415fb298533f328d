// measure.hpp — observables, spectral decomposition, Born-rule laws,
// uncertainty relation, qubit Bernoulli closed forms, POVMs, Neumark dilation.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "algprob/matcore.hpp"
#include "algprob/states.hpp"

namespace algprob {

// Self-adjoint matrix.
class Observable {
 public:
  explicit Observable(CMatrix mat, double tol = defaults::herm_tol);
  const CMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  CMatrix mat_;
};

// A = Σ λ_k P_k with distinct ascending eigenvalues and orthogonal
// projectors summing to the identity.
struct SpectralDecomp {
  std::vector<double> eigenvalues;
  std::vector<CMatrix> projectors;
};

// Outcome-labelled projector family (partition of unity).
struct PVM {
  std::vector<std::string> outcomes;
  std::vector<CMatrix> projectors;
};

// Outcome-labelled effect family, 0 ≤ E ≤ I, Σ E = I.
struct POVM {
  std::vector<std::string> outcomes;
  std::vector<CMatrix> effects;
};

struct DiscreteLaw {
  std::vector<double> support;
  std::vector<double> probs;

  void validate(double tol = defaults::prob_tol * 1e2) const;
};

struct NeumarkDilation {
  CMatrix isometry;  // V: dim → dim·|outcomes|, V†V = I
  PVM pvm;           // block projectors on the dilated space
};

SpectralDecomp spectral_decompose(const Observable& a,
                                  double cluster_tol = defaults::cluster_tol);

// Validation helpers; throw ValidationError naming the violated invariant.
void validate_pvm(const PVM& pvm, double tol = defaults::psd_tol);
void validate_povm(const POVM& povm, double tol = defaults::psd_tol);

// ℙ_ρ(A = λ_k) = tr(ρ P_k).
DiscreteLaw law(const Observable& a, const DensityMatrix& rho,
                double cluster_tol = defaults::cluster_tol);

double expectation(const Observable& a, const DensityMatrix& rho);
double variance(const Observable& a, const DensityMatrix& rho);
// tr(ρ ã† b̃) with ã = a − E(a)·I.
cplx covariance(const Observable& a, const Observable& b,
                const DensityMatrix& rho);

// var(a)·var(b) − |ϖ([a,b])/2|² − (Re cov(a,b))²; nonnegative up to tol.
double uncertainty_gap(const Observable& a, const Observable& b,
                       const DensityMatrix& rho);

// Law of A = tI + xX + yY + zZ under the Bloch state (u,v,w):
// P(t ± ‖x⃗‖) = ½(1 ± (ux+vy+wz)/‖x⃗‖).  Support ascending.
DiscreteLaw bernoulli_law(double t, double x, double y, double z, double u,
                          double v, double w);

// (p1, p0) with p1 = |⟨ψ|u⟩|².
std::pair<double, double> rank_one_law(const PureState& psi, const PureState& u);

// Extended Born rule p_E = tr(ρE); probabilities follow outcome order.
DiscreteLaw povm_probabilities(const POVM& povm, const DensityMatrix& rho);

// Lift a POVM to a PVM on dim·|outcomes| space: V stacks K_x = E_x^{1/2},
// the PVM is the family of block projectors; V†P_xV = E_x.
NeumarkDilation neumark_dilate(const POVM& povm);

// Quantum events {A ≤ x}, {A < x}, {A = λ}: spectral projectors of A.
CMatrix event_leq(const Observable& a, double x,
                  double cluster_tol = defaults::cluster_tol);
CMatrix event_lt(const Observable& a, double x,
                 double cluster_tol = defaults::cluster_tol);
CMatrix event_eq(const Observable& a, double lambda,
                 double cluster_tol = defaults::cluster_tol);

}  // namespace algprob
