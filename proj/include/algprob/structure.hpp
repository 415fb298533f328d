// structure.hpp — *-subalgebra machinery: span closure from generators,
// commutant, centre, factor/block decomposition, MASA test, regular
// representation, GNS inner product, density-of-state extraction.
#pragma once

#include <cstdint>
#include <vector>

#include "algprob/matcore.hpp"

namespace algprob::structure {

// Unital *-closed, product-closed subalgebra of M_n(ℂ), carried by an
// orthonormal (Frobenius) basis.
struct AlgebraBasis {
  Eigen::Index ambient = 0;
  std::vector<CMatrix> basis;

  std::size_t dim() const { return basis.size(); }
  // Checks I ∈ span, closure under adjoint and under products.
  void validate(double tol = defaults::span_tol) const;
  // Frobenius projection of m onto the span; residual optionally reported.
  CMatrix project(const CMatrix& m, double* residual = nullptr) const;
  bool contains(const CMatrix& m, double tol = defaults::span_tol) const;
};

struct BlockDims {
  Eigen::Index n = 0;  // block side, n = m·l
  Eigen::Index m = 0;  // factor size M_m
  Eigen::Index l = 0;  // multiplicity
};

struct CenterDecomp {
  std::vector<CMatrix> central_projections;  // minimal, orthogonal, sum I
  std::vector<BlockDims> block_dims;
  // Unitary with transform · A · transform† block diagonal, each block k
  // consisting of l_k repeated copies of an m_k×m_k matrix.
  CMatrix transform;
};

// Smallest unital *-closed, product-closed span containing the generators.
AlgebraBasis generate_algebra(const std::vector<CMatrix>& generators,
                              Eigen::Index ambient,
                              double tol = defaults::span_tol);

// {X : [X, b] = 0 for every basis element b}.
AlgebraBasis commutant(const AlgebraBasis& alg, double tol = defaults::span_tol);

// alg ∩ commutant(alg), computed inside alg's coordinates.
AlgebraBasis center(const AlgebraBasis& alg, double tol = defaults::span_tol);

bool is_commutative(const AlgebraBasis& alg, double tol = defaults::span_tol);
bool is_masa(const AlgebraBasis& alg, double tol = defaults::span_tol);

// Principal angles (radians, descending cosines) between the two spans.
std::vector<double> principal_angles(const AlgebraBasis& a,
                                     const AlgebraBasis& b);
bool same_span(const AlgebraBasis& a, const AlgebraBasis& b,
               double angle_tol = 1e-8);

// Wedderburn-style block decomposition via the spectral projectors of a
// generic Hermitian central element; the intra-factor unitary is built from
// a maximal family of equivalent minimal projections and partial isometries.
CenterDecomp factor_decompose(const AlgebraBasis& alg, std::uint64_t seed = 0,
                              int max_retries = 8);

// Matrix of left multiplication by a in the orthonormal basis of alg.
CMatrix regular_representation(const AlgebraBasis& alg, const CMatrix& a,
                               double tol = defaults::span_tol);

// ⟨a, b⟩_ϖ = ϖ(a† b) with the functional given by its basis values.
cplx gns_inner(const AlgebraBasis& alg, const CMatrix& a, const CMatrix& b,
               const std::vector<cplx>& phi_on_basis,
               double tol = defaults::span_tol);

// Unique r ∈ span(alg) with tr(r b_i) = φ(b_i); PSD unit-trace when φ is a
// state.  Requires a *-consistent functional.
CMatrix density_of_state(const AlgebraBasis& alg,
                         const std::vector<cplx>& phi_on_basis,
                         double tol = defaults::span_tol);

}  // namespace algprob::structure
