// fock.hpp — one-mode interacting Fock space: Jacobi sequences, truncated
// ladder operators, q-deformed commutation, field moments, orthogonal
// polynomials from discrete measures, Jacobi matrices, Favard round-trips.
#pragma once

#include <optional>
#include <vector>

#include "algprob/matcore.hpp"

namespace algprob::fock {

// Recurrence data (ω_n, α_n), 1-based in the math, stored from index 1.
// The ω₀ = 1 normalization never enters a matrix.
struct JacobiSequence {
  std::vector<double> omega;  // ω₁, ω₂, …  (ω_n ≥ 0, zero tail in finite type)
  std::vector<double> alpha;  // α₁, α₂, …
  std::optional<std::size_t> m0;  // finite-type cutoff; nullopt = infinite type

  void validate() const;
  // ω_n (1-based), zero-padded past the stored entries in finite type.
  double omega_at(std::size_t n) const;
  double alpha_at(std::size_t n) const;
};

struct LadderOps {
  Eigen::Index trunc = 0;
  CMatrix create;      // e_n ↦ √ω_{n+1} e_{n+1}
  CMatrix annihilate;  // create†
  CMatrix preserve;    // diag(α₁, …, α_N)
  CMatrix number;      // diag(0, …, N−1)
};

struct DiscreteMeasure {
  std::vector<double> atoms;    // distinct, ascending
  std::vector<double> weights;  // positive, summing to 1

  void validate(double tol = 1e-9) const;
};

// Real symmetric tridiagonal with diag α and offdiag √ω.
struct JacobiMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  Eigen::Index size() const { return Eigen::Index(diag.size()); }
  CMatrix dense() const;
};

LadderOps ladder_matrices(const JacobiSequence& js, Eigen::Index trunc);

// ω_n = Σ_{k<n} q^k (Gauss q-numbers), α ≡ 0; q=1 Bosonic, q=0 free,
// q=−1 Fermionic (finite type).
JacobiSequence q_jacobi(double q, std::size_t n);

// m_k = ⟨e₀| Z^k |e₀⟩ for Z = B⁺ + B° + B⁻, k = 1…max_order; the truncation
// is chosen so the tridiagonal reachability bound makes it exact.
std::vector<double> field_moments(const JacobiSequence& js, int max_order);

// Jacobi-Szegö coefficients of ν by monic Gram-Schmidt on monomials in
// L₂(ν); long double with re-orthogonalization.  Requires n ≤ |atoms| − 1.
JacobiSequence jacobi_from_measure(const DiscreteMeasure& nu, std::size_t n);

JacobiMatrix jacobi_matrix(const JacobiSequence& js, Eigen::Index size);

// Spectral measure of e₀: atoms = eigenvalues, weights = |⟨e₀|v_i⟩|².
DiscreteMeasure measure_from_jacobi(const JacobiMatrix& jm);

// ‖M_x − (C⁺ + C° + C⁻)‖_F in the orthonormal polynomial basis.
double quantum_decomposition_check(const DiscreteMeasure& nu, std::size_t n);

}  // namespace algprob::fock
