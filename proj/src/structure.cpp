#include "algprob/structure.hpp"

#include <algorithm>
#include <cmath>

#include "algprob/measure.hpp"
#include "algprob/rng.hpp"

namespace algprob::structure {

namespace {

CVector vec_cm(const CMatrix& m) {
  CVector v(m.rows() * m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    v.segment(j * m.rows(), m.rows()) = m.col(j);
  return v;
}

CMatrix unvec_cm(const CVector& v, Eigen::Index n) {
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) = v.segment(j * n, n);
  return m;
}

// Appends the part of `cand` orthogonal to the current span when its
// residual is non-negligible; two projection passes keep the basis clean.
bool absorb(std::vector<CMatrix>& basis, CMatrix cand, double tol) {
  const double scale = std::sqrt(std::abs(frobenius_inner(cand, cand).real()));
  if (scale <= tol) return false;
  cand /= scale;
  for (int pass = 0; pass < 2; ++pass)
    for (const CMatrix& b : basis) cand -= frobenius_inner(b, cand) * b;
  const double resid = std::sqrt(std::abs(frobenius_inner(cand, cand).real()));
  if (resid <= 1e-8) return false;
  basis.push_back(cand / resid);
  return true;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + CMatrix(m.adjoint())); }
CMatrix skew_part(const CMatrix& m) {
  return CMatrix((m - CMatrix(m.adjoint())) / cplx(0, 2));
}

// Random real combination of the Hermitian and skew parts of a basis:
// a generic self-adjoint element of the spanned *-algebra.
CMatrix generic_hermitian(const std::vector<CMatrix>& basis, CounterRng& rng) {
  const Eigen::Index n = basis.front().rows();
  CMatrix h = CMatrix::Zero(n, n);
  for (const CMatrix& b : basis) {
    h += (2.0 * rng.next_double() - 1.0) * hermitian_part(b);
    h += (2.0 * rng.next_double() - 1.0) * skew_part(b);
  }
  return h;
}

CMatrix generic_element(const std::vector<CMatrix>& basis, CounterRng& rng) {
  const Eigen::Index n = basis.front().rows();
  CMatrix g = CMatrix::Zero(n, n);
  for (const CMatrix& b : basis)
    g += cplx(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0) * b;
  return g;
}

// Orthonormal columns spanning the range of a projector.
CMatrix range_basis(const CMatrix& proj) {
  const HermitianEig eig = hermitian_eig(proj);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > 0.5) ++rank;
  CMatrix cols(proj.rows(), rank);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > 0.5) cols.col(c++) = eig.eigenvectors.col(i);
  return cols;
}

}  // namespace

void AlgebraBasis::validate(double tol) const {
  if (ambient < 1) throw ValidationError("AlgebraBasis: bad ambient dimension");
  for (const CMatrix& b : basis)
    if (b.rows() != ambient || b.cols() != ambient)
      throw ValidationError("AlgebraBasis: element shape mismatch");
  if (!contains(identity(ambient), tol))
    throw ValidationError("AlgebraBasis: identity not in span");
  for (const CMatrix& b : basis) {
    if (!contains(b.adjoint(), tol))
      throw ValidationError("AlgebraBasis: span not closed under adjoints");
    for (const CMatrix& c : basis)
      if (!contains(b * c, tol))
        throw ValidationError("AlgebraBasis: span not closed under products");
  }
}

CMatrix AlgebraBasis::project(const CMatrix& m, double* residual) const {
  CMatrix acc = CMatrix::Zero(ambient, ambient);
  for (const CMatrix& b : basis) acc += frobenius_inner(b, m) * b;
  if (residual)
    *residual = std::sqrt(std::abs(frobenius_inner(m - acc, m - acc).real()));
  return acc;
}

bool AlgebraBasis::contains(const CMatrix& m, double tol) const {
  double resid = 0.0;
  project(m, &resid);
  const double scale =
      std::max(1.0, std::sqrt(std::abs(frobenius_inner(m, m).real())));
  return resid <= tol * scale;
}

AlgebraBasis generate_algebra(const std::vector<CMatrix>& generators,
                              Eigen::Index ambient, double tol) {
  AlgebraBasis alg;
  alg.ambient = ambient;
  absorb(alg.basis, identity(ambient), tol);
  for (const CMatrix& g : generators) {
    if (g.rows() != ambient || g.cols() != ambient)
      throw ShapeError("generate_algebra: generator shape mismatch");
    absorb(alg.basis, g, tol);
    absorb(alg.basis, g.adjoint(), tol);
  }
  // Alternate products / adjoints / re-orthonormalize until stable.
  bool grew = true;
  while (grew && Eigen::Index(alg.dim()) < ambient * ambient) {
    grew = false;
    const std::size_t frozen = alg.dim();
    for (std::size_t i = 0; i < frozen; ++i) {
      for (std::size_t j = 0; j < frozen; ++j)
        grew |= absorb(alg.basis, alg.basis[i] * alg.basis[j], tol);
      grew |= absorb(alg.basis, alg.basis[i].adjoint(), tol);
    }
  }
  return alg;
}

AlgebraBasis commutant(const AlgebraBasis& alg, double tol) {
  const Eigen::Index n = alg.ambient;
  const Eigen::Index nn = n * n;
  const std::size_t k = alg.dim();
  // [X, B_i] = 0  ⇔  (I ⊗ B_i − B_iᵀ ⊗ I) vec(X) = 0 stacked over i.
  CMatrix sys(Eigen::Index(k) * nn, nn);
  for (std::size_t i = 0; i < k; ++i) {
    const CMatrix& b = alg.basis[i];
    sys.block(Eigen::Index(i) * nn, 0, nn, nn) =
        kron(identity(n), b) - kron(b.transpose(), identity(n));
  }
  Eigen::JacobiSVD<CMatrix> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() ? sv(0) : 0.0) * 1e-10 + 1e-12;
  AlgebraBasis out;
  out.ambient = n;
  for (Eigen::Index j = 0; j < nn; ++j)
    if (j >= sv.size() || sv(j) <= cut)
      absorb(out.basis, unvec_cm(svd.matrixV().col(j), n), tol);
  return out;
}

AlgebraBasis center(const AlgebraBasis& alg, double tol) {
  const Eigen::Index n = alg.ambient;
  const Eigen::Index nn = n * n;
  const Eigen::Index k = Eigen::Index(alg.dim());
  // X = Σ c_j B_j with Σ_j c_j [B_j, B_i] = 0 for all i.
  CMatrix sys(k * nn, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < k; ++i) {
      const CMatrix comm =
          alg.basis[std::size_t(j)] * alg.basis[std::size_t(i)] -
          alg.basis[std::size_t(i)] * alg.basis[std::size_t(j)];
      sys.block(i * nn, j, nn, 1) = vec_cm(comm);
    }
  Eigen::JacobiSVD<CMatrix> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() ? sv(0) : 0.0) * 1e-10 + 1e-12;
  AlgebraBasis out;
  out.ambient = n;
  for (Eigen::Index c = 0; c < k; ++c) {
    if (c < sv.size() && sv(c) > cut) continue;
    CMatrix x = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < k; ++j)
      x += svd.matrixV()(j, c) * alg.basis[std::size_t(j)];
    absorb(out.basis, x, tol);
  }
  return out;
}

bool is_commutative(const AlgebraBasis& alg, double tol) {
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (max_abs(alg.basis[i] * alg.basis[j] - alg.basis[j] * alg.basis[i]) >
          tol)
        return false;
  return true;
}

bool is_masa(const AlgebraBasis& alg, double tol) {
  if (!is_commutative(alg, tol)) return false;
  const AlgebraBasis comm = commutant(alg, tol);
  return alg.dim() == comm.dim() && same_span(alg, comm);
}

std::vector<double> principal_angles(const AlgebraBasis& a,
                                     const AlgebraBasis& b) {
  if (a.ambient != b.ambient)
    throw ShapeError("principal_angles: ambient dimension mismatch");
  const Eigen::Index nn = a.ambient * a.ambient;
  CMatrix ua(nn, Eigen::Index(a.dim())), ub(nn, Eigen::Index(b.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i) ua.col(Eigen::Index(i)) = vec_cm(a.basis[i]);
  for (std::size_t i = 0; i < b.dim(); ++i) ub.col(Eigen::Index(i)) = vec_cm(b.basis[i]);
  Eigen::JacobiSVD<CMatrix> svd(ua.adjoint() * ub);
  std::vector<double> angles;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    angles.push_back(std::acos(std::clamp(svd.singularValues()(i), 0.0, 1.0)));
  return angles;
}

bool same_span(const AlgebraBasis& a, const AlgebraBasis& b, double angle_tol) {
  if (a.dim() != b.dim()) return false;
  const std::vector<double> angles = principal_angles(a, b);
  for (double t : angles)
    if (t > angle_tol) return false;
  return true;
}

namespace {

struct FactorBasisResult {
  CMatrix columns;  // n_k orthonormal columns realizing the I_l ⊗ M_m order
  Eigen::Index m = 0, l = 0;
};

// Builds, inside the compressed factor F ⊆ M_{nk}, an orthonormal basis in
// which every element of F takes the form blkdiag(Â, …, Â) (l copies).
FactorBasisResult factor_unitary(const std::vector<CMatrix>& fbasis,
                                 Eigen::Index nk, CounterRng& rng,
                                 int max_retries) {
  FactorBasisResult out;
  const Eigen::Index dim = Eigen::Index(fbasis.size());
  const auto m = Eigen::Index(std::llround(std::sqrt(double(dim))));
  if (m * m != dim)
    throw NumericalError("factor_decompose: compressed algebra dimension " +
                         std::to_string(dim) + " is not a perfect square");
  if (nk % m != 0)
    throw NumericalError("factor_decompose: block size not divisible by m");
  const Eigen::Index l = nk / m;
  out.m = m;
  out.l = l;

  if (m == 1) {  // scalar factor: any orthonormal basis works
    out.columns = identity(nk);
    return out;
  }

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    // Minimal projections: spectral clusters of a generic Hermitian element
    // split the factor into m equivalent rank-l projections.
    const CMatrix h = generic_hermitian(fbasis, rng);
    const SpectralDecomp dec = spectral_decompose(Observable(h), 1e-8);
    if (Eigen::Index(dec.projectors.size()) != m) continue;
    bool ranks_ok = true;
    for (const CMatrix& q : dec.projectors)
      if (std::llround(q.trace().real()) != l) ranks_ok = false;
    if (!ranks_ok) continue;

    // Partial isometries u_i: range(q_1) → range(q_i) through a generic
    // algebra element; polar factor via SVD.
    const CMatrix g = generic_element(fbasis, rng);
    std::vector<CMatrix> u(std::size_t(m));
    u[0] = dec.projectors[0];
    bool isometries_ok = true;
    for (Eigen::Index i = 1; i < m; ++i) {
      const CMatrix s = dec.projectors[std::size_t(i)] * g * dec.projectors[0];
      Eigen::JacobiSVD<CMatrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (svd.singularValues().size() < l ||
          svd.singularValues()(l - 1) <= 1e-8 * svd.singularValues()(0)) {
        isometries_ok = false;
        break;
      }
      u[std::size_t(i)] = svd.matrixU().leftCols(l) *
                          svd.matrixV().leftCols(l).adjoint();
    }
    if (!isometries_ok) continue;

    const CMatrix f = range_basis(dec.projectors[0]);  // nk × l
    if (f.cols() != l) continue;
    out.columns = CMatrix(nk, nk);
    for (Eigen::Index s = 0; s < l; ++s)
      for (Eigen::Index i = 0; i < m; ++i)
        out.columns.col(s * m + i) = u[std::size_t(i)] * f.col(s);
    // Orthonormality of the assembled columns certifies the construction.
    if (max_abs(CMatrix(out.columns.adjoint() * out.columns) - identity(nk)) >
        1e-8)
      continue;
    return out;
  }
  throw NumericalError(
      "factor_decompose: could not build factor basis after retries");
}

double block_structure_residual(const AlgebraBasis& alg,
                                const CenterDecomp& dec) {
  double worst = 0.0;
  Eigen::Index offset = 0;
  std::vector<Eigen::Index> offsets;
  for (const BlockDims& bd : dec.block_dims) {
    offsets.push_back(offset);
    offset += bd.n;
  }
  for (const CMatrix& b : alg.basis) {
    const CMatrix t = dec.transform * b * dec.transform.adjoint();
    CMatrix ideal = CMatrix::Zero(t.rows(), t.cols());
    for (std::size_t k = 0; k < dec.block_dims.size(); ++k) {
      const auto [nk, mk, lk] = dec.block_dims[k];
      const Eigen::Index o = offsets[k];
      CMatrix avg = CMatrix::Zero(mk, mk);
      for (Eigen::Index s = 0; s < lk; ++s)
        avg += t.block(o + s * mk, o + s * mk, mk, mk);
      avg /= double(lk);
      for (Eigen::Index s = 0; s < lk; ++s)
        ideal.block(o + s * mk, o + s * mk, mk, mk) = avg;
    }
    worst = std::max(worst, max_abs(t - ideal));
  }
  return worst;
}

}  // namespace

CenterDecomp factor_decompose(const AlgebraBasis& alg, std::uint64_t seed,
                              int max_retries) {
  const Eigen::Index n = alg.ambient;
  const AlgebraBasis cen = center(alg);
  const Eigen::Index num_blocks = Eigen::Index(cen.dim());
  CounterRng rng(seed, 0x5facbeef);

  std::string failure = "factor_decompose: retries exhausted";
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    // Minimal central projections from a generic Hermitian central element.
    const CMatrix h = generic_hermitian(cen.basis, rng);
    const SpectralDecomp spec = spectral_decompose(Observable(h), 1e-8);
    if (Eigen::Index(spec.projectors.size()) != num_blocks) continue;

    std::vector<CMatrix> projs = spec.projectors;
    std::sort(projs.begin(), projs.end(), [](const CMatrix& a, const CMatrix& b) {
      const auto ra = std::llround(a.trace().real());
      const auto rb = std::llround(b.trace().real());
      if (ra != rb) return ra < rb;
      double wa = 0, wb = 0;  // deterministic tie-break by support position
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        wa += double(i) * a(i, i).real();
        wb += double(i) * b(i, i).real();
      }
      return wa < wb;
    });

    try {
      CenterDecomp dec;
      CMatrix columns(n, n);
      Eigen::Index filled = 0;
      for (const CMatrix& p : projs) {
        const Eigen::Index nk = Eigen::Index(std::llround(p.trace().real()));
        const CMatrix r = range_basis(p);  // n × nk
        if (r.cols() != nk)
          throw NumericalError("factor_decompose: projector rank mismatch");
        // Compressed factor p·alg·p in the coordinates of range(p).
        std::vector<CMatrix> fbasis;
        for (const CMatrix& b : alg.basis)
          absorb(fbasis, CMatrix(r.adjoint() * b * r), defaults::span_tol);
        const FactorBasisResult fb =
            factor_unitary(fbasis, nk, rng, max_retries);
        columns.block(0, filled, n, nk) = r * fb.columns;
        dec.central_projections.push_back(p);
        dec.block_dims.push_back(BlockDims{nk, fb.m, fb.l});
        filled += nk;
      }
      if (filled != n)
        throw NumericalError("factor_decompose: projections do not fill the space");
      dec.transform = columns.adjoint();

      std::size_t algebra_dim = 0;
      for (const BlockDims& bd : dec.block_dims)
        algebra_dim += std::size_t(bd.m * bd.m);
      if (algebra_dim != alg.dim())
        throw NumericalError("factor_decompose: Σ m_k² != dim(alg)");

      const double resid = block_structure_residual(alg, dec);
      if (resid > 1e-8)
        throw NumericalError("factor_decompose: block residual " +
                             std::to_string(resid));
      return dec;
    } catch (const NumericalError& e) {
      failure = e.what();
      continue;
    }
  }
  throw NumericalError(failure);
}

CMatrix regular_representation(const AlgebraBasis& alg, const CMatrix& a,
                               double tol) {
  double resid = 0.0;
  alg.project(a, &resid);
  const double scale =
      std::max(1.0, std::sqrt(std::abs(frobenius_inner(a, a).real())));
  if (resid > tol * scale)
    throw ValidationError("regular_representation: element outside span, "
                          "projection residual " + std::to_string(resid));
  const Eigen::Index k = Eigen::Index(alg.dim());
  CMatrix rep(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const CMatrix img = a * alg.basis[std::size_t(j)];
    for (Eigen::Index i = 0; i < k; ++i)
      rep(i, j) = frobenius_inner(alg.basis[std::size_t(i)], img);
  }
  return rep;
}

cplx gns_inner(const AlgebraBasis& alg, const CMatrix& a, const CMatrix& b,
               const std::vector<cplx>& phi_on_basis, double tol) {
  if (phi_on_basis.size() != alg.dim())
    throw ShapeError("gns_inner: functional values size mismatch");
  const CMatrix prod = a.adjoint() * b;
  double resid = 0.0;
  alg.project(prod, &resid);
  const double scale =
      std::max(1.0, std::sqrt(std::abs(frobenius_inner(prod, prod).real())));
  if (resid > tol * scale)
    throw ValidationError("gns_inner: a†b outside span");
  cplx acc = 0;
  for (std::size_t i = 0; i < alg.dim(); ++i)
    acc += frobenius_inner(alg.basis[i], prod) * phi_on_basis[i];
  return acc;
}

CMatrix density_of_state(const AlgebraBasis& alg,
                         const std::vector<cplx>& phi_on_basis, double tol) {
  const Eigen::Index k = Eigen::Index(alg.dim());
  if (phi_on_basis.size() != std::size_t(k))
    throw ShapeError("density_of_state: functional values size mismatch");

  // *-consistency: φ(b†) must equal φ(b)* for every basis element.
  for (Eigen::Index i = 0; i < k; ++i) {
    cplx phi_adj = 0;
    const CMatrix adj = alg.basis[std::size_t(i)].adjoint();
    for (Eigen::Index j = 0; j < k; ++j)
      phi_adj += frobenius_inner(alg.basis[std::size_t(j)], adj) *
                 phi_on_basis[std::size_t(j)];
    if (std::abs(phi_adj - std::conj(phi_on_basis[std::size_t(i)])) >
        1e-8 * std::max(1.0, std::abs(phi_on_basis[std::size_t(i)])))
      throw ValidationError("density_of_state: functional not *-consistent");
  }

  // Solve Σ_j x_j tr(B_j B_i) = φ(B_i) over the basis coordinates.
  CMatrix gram(k, k);
  CVector rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i) = phi_on_basis[std::size_t(i)];
    for (Eigen::Index j = 0; j < k; ++j)
      gram(i, j) =
          (alg.basis[std::size_t(j)] * alg.basis[std::size_t(i)]).trace();
  }
  const CVector x = gram.colPivHouseholderQr().solve(rhs);
  const double resid = (gram * x - rhs).norm();
  if (resid > tol * std::max(1.0, rhs.norm()))
    throw ValidationError("density_of_state: inconsistent functional, solve "
                          "residual " + std::to_string(resid));
  CMatrix r = CMatrix::Zero(alg.ambient, alg.ambient);
  for (Eigen::Index j = 0; j < k; ++j)
    r += x(j) * alg.basis[std::size_t(j)];
  return r;
}

}  // namespace algprob::structure
