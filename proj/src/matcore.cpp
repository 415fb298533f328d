#include "algprob/matcore.hpp"

#include <algorithm>
#include <cmath>

namespace algprob {

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix zero(Eigen::Index rows, Eigen::Index cols) {
  return CMatrix::Zero(rows, cols);
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(2, 2);
  m << s, s, s, -s;
  return m;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, max_abs(m));
  return max_abs(m - m.adjoint()) <= tol * scale;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index p = a.rows(), q = a.cols();
  const Eigen::Index r = b.rows(), s = b.cols();
  CMatrix out(p * r, q * s);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < q; ++j)
      out.block(i * r, j * s, r, s) = a(i, j) * b;
  return out;
}

CMatrix partial_trace(const CMatrix& m, const std::vector<Eigen::Index>& dims,
                      const std::vector<std::size_t>& keep) {
  if (m.rows() != m.cols())
    throw ShapeError("partial_trace: matrix must be square");
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) {
    if (d < 1) throw ShapeError("partial_trace: factor dims must be >= 1");
    total *= d;
  }
  if (total != m.rows())
    throw ShapeError("partial_trace: product of dims (" +
                     std::to_string(total) + ") != side length (" +
                     std::to_string(m.rows()) + ")");
  for (std::size_t k : keep)
    if (k >= dims.size())
      throw ShapeError("partial_trace: keep index out of range");

  const std::size_t nf = dims.size();
  std::vector<bool> kept(nf, false);
  for (std::size_t k : keep) kept[k] = true;

  Eigen::Index keep_dim = 1, trace_dim = 1;
  for (std::size_t f = 0; f < nf; ++f)
    (kept[f] ? keep_dim : trace_dim) *= dims[f];

  // stride[f]: weight of factor f in the composite (Kronecker) index.
  std::vector<Eigen::Index> stride(nf, 1);
  for (std::size_t f = nf; f-- > 1;) stride[f - 1] = stride[f] * dims[f];

  std::vector<std::size_t> kept_f, traced_f;
  for (std::size_t f = 0; f < nf; ++f) (kept[f] ? kept_f : traced_f).push_back(f);

  auto composite = [&](const std::vector<std::size_t>& factors,
                       Eigen::Index multi) {
    Eigen::Index idx = 0;
    for (std::size_t f = factors.size(); f-- > 0;) {
      const Eigen::Index d = dims[factors[f]];
      idx += (multi % d) * stride[factors[f]];
      multi /= d;
    }
    return idx;
  };

  CMatrix out = CMatrix::Zero(keep_dim, keep_dim);
  for (Eigen::Index a = 0; a < keep_dim; ++a) {
    const Eigen::Index ra = composite(kept_f, a);
    for (Eigen::Index b = 0; b < keep_dim; ++b) {
      const Eigen::Index rb = composite(kept_f, b);
      cplx sum = 0;
      for (Eigen::Index t = 0; t < trace_dim; ++t) {
        const Eigen::Index rt = composite(traced_f, t);
        sum += m(ra + rt, rb + rt);
      }
      out(a, b) = sum;
    }
  }
  return out;
}

namespace {

// Singular values via the Gram matrix; the tests cross-check against an SVD.
RVector singular_values(const CMatrix& m) {
  const CMatrix gram =
      m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("singular_values: eigensolver failed");
  RVector sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return sv;
}

}  // namespace

double schatten_norm(const CMatrix& m, double p) {
  if (std::isnan(p) || p < 1.0)
    throw DomainError("schatten_norm: p must satisfy p >= 1");
  const RVector sv = singular_values(m);
  if (std::isinf(p)) return sv.size() ? sv.maxCoeff() : 0.0;
  if (p == 2.0) return sv.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

HermitianEig hermitian_eig(const CMatrix& m, double herm_tol) {
  if (m.rows() != m.cols())
    throw ShapeError("hermitian_eig: matrix must be square");
  const double scale = std::max(1.0, max_abs(m));
  const double defect = max_abs(m - m.adjoint());
  if (defect > herm_tol * scale)
    throw ValidationError("hermitian_eig: matrix not Hermitian, defect norm " +
                          std::to_string(defect));
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success)
    throw NumericalError("hermitian_eig: eigensolver failed");

  HermitianEig out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  // Deterministic phase: largest-modulus component made real nonnegative.
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < out.eigenvectors.rows(); ++i) {
      const double a = std::abs(out.eigenvectors(i, j));
      if (a > best + 1e-14) {
        best = a;
        imax = i;
      }
    }
    const cplx z = out.eigenvectors(imax, j);
    if (std::abs(z) > 0) out.eigenvectors.col(j) *= std::conj(z) / std::abs(z);
  }
  return out;
}

bool is_psd(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (!is_hermitian(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()),
                                            Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("is_psd: eigensolver failed");
  return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, max_abs(m));
}

cplx frobenius_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("frobenius_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

CMatrix psd_sqrt(const CMatrix& m, double tol) {
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m * m - m) <= tol * scale) return m;  // projector: exact root
  const HermitianEig eig = hermitian_eig(m);
  const double lo = eig.eigenvalues.minCoeff();
  if (lo < -tol * scale)
    throw ValidationError("psd_sqrt: matrix not PSD, min eigenvalue " +
                          std::to_string(lo));
  RVector roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace algprob
