#include "algprob/measure.hpp"

#include <cmath>
#include <numeric>

namespace algprob {

Observable::Observable(CMatrix mat, double tol) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols())
    throw ShapeError("Observable: matrix must be square");
  if (!is_hermitian(mat_, tol))
    throw ValidationError("Observable: matrix not Hermitian");
}

void DiscreteLaw::validate(double tol) const {
  if (support.size() != probs.size())
    throw ValidationError("DiscreteLaw: support/probs size mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -tol)
      throw ValidationError("DiscreteLaw: negative probability " +
                            std::to_string(p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    throw ValidationError("DiscreteLaw: probabilities sum to " +
                          std::to_string(sum));
}

SpectralDecomp spectral_decompose(const Observable& a, double cluster_tol) {
  const HermitianEig eig = hermitian_eig(a.mat());
  const Eigen::Index n = eig.eigenvalues.size();
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());

  SpectralDecomp out;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n &&
           eig.eigenvalues(stop) - eig.eigenvalues(stop - 1) <= cluster_tol * scale)
      ++stop;
    CMatrix proj = CMatrix::Zero(n, n);
    double lam = 0.0;
    for (Eigen::Index j = start; j < stop; ++j) {
      proj += eig.eigenvectors.col(j) * eig.eigenvectors.col(j).adjoint();
      lam += eig.eigenvalues(j);
    }
    out.eigenvalues.push_back(lam / double(stop - start));
    out.projectors.push_back(std::move(proj));
    start = stop;
  }
  return out;
}

void validate_pvm(const PVM& pvm, double tol) {
  if (pvm.outcomes.size() != pvm.projectors.size())
    throw ValidationError("PVM: outcome/projector count mismatch");
  if (pvm.projectors.empty()) throw ValidationError("PVM: empty");
  const Eigen::Index n = pvm.projectors.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < pvm.projectors.size(); ++i) {
    const CMatrix& p = pvm.projectors[i];
    if (p.rows() != n || p.cols() != n)
      throw ValidationError("PVM: projector shape mismatch");
    if (!is_hermitian(p, tol))
      throw ValidationError("PVM: projector " + std::to_string(i) +
                            " not Hermitian");
    if (max_abs(p * p - p) > tol)
      throw ValidationError("PVM: projector " + std::to_string(i) +
                            " not idempotent");
    for (std::size_t j = 0; j < i; ++j)
      if (max_abs(p * pvm.projectors[j]) > tol)
        throw ValidationError("PVM: projectors " + std::to_string(j) + "," +
                              std::to_string(i) + " not orthogonal");
    sum += p;
  }
  if (max_abs(sum - identity(n)) > tol)
    throw ValidationError("PVM: projectors do not sum to the identity");
}

void validate_povm(const POVM& povm, double tol) {
  if (povm.outcomes.size() != povm.effects.size())
    throw ValidationError("POVM: outcome/effect count mismatch");
  if (povm.effects.empty()) throw ValidationError("POVM: empty");
  const Eigen::Index n = povm.effects.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < povm.effects.size(); ++i) {
    const CMatrix& e = povm.effects[i];
    if (e.rows() != n || e.cols() != n)
      throw ValidationError("POVM: effect shape mismatch");
    if (!is_hermitian(e, tol))
      throw ValidationError("POVM: effect " + std::to_string(i) +
                            " not Hermitian");
    if (!is_psd(e, tol))
      throw ValidationError("POVM: effect " + std::to_string(i) +
                            " not positive");
    if (!is_psd(identity(n) - e, tol))
      throw ValidationError("POVM: effect " + std::to_string(i) +
                            " exceeds the identity");
    sum += e;
  }
  if (max_abs(sum - identity(n)) > tol)
    throw ValidationError("POVM: effects do not sum to the identity");
}

DiscreteLaw law(const Observable& a, const DensityMatrix& rho,
                double cluster_tol) {
  if (a.dim() != rho.dim()) throw ShapeError("law: dimension mismatch");
  const SpectralDecomp dec = spectral_decompose(a, cluster_tol);
  DiscreteLaw out;
  out.support = dec.eigenvalues;
  out.probs.reserve(dec.projectors.size());
  for (const CMatrix& p : dec.projectors)
    out.probs.push_back((rho.mat() * p).trace().real());
  out.validate();
  return out;
}

double expectation(const Observable& a, const DensityMatrix& rho) {
  if (a.dim() != rho.dim()) throw ShapeError("expectation: dimension mismatch");
  return (rho.mat() * a.mat()).trace().real();
}

double variance(const Observable& a, const DensityMatrix& rho) {
  const double mean = expectation(a, rho);
  const double second = (rho.mat() * a.mat() * a.mat()).trace().real();
  return second - mean * mean;
}

cplx covariance(const Observable& a, const Observable& b,
                const DensityMatrix& rho) {
  if (a.dim() != b.dim() || a.dim() != rho.dim())
    throw ShapeError("covariance: dimension mismatch");
  const Eigen::Index n = a.dim();
  const CMatrix at = a.mat() - expectation(a, rho) * identity(n);
  const CMatrix bt = b.mat() - expectation(b, rho) * identity(n);
  return (rho.mat() * at.adjoint() * bt).trace();
}

double uncertainty_gap(const Observable& a, const Observable& b,
                       const DensityMatrix& rho) {
  const CMatrix comm = a.mat() * b.mat() - b.mat() * a.mat();
  const cplx comm_mean = (rho.mat() * comm).trace();
  const cplx cov = covariance(a, b, rho);
  const double lhs = variance(a, rho) * variance(b, rho);
  const double rhs = std::norm(comm_mean / 2.0) + std::pow(cov.real(), 2);
  return lhs - rhs;
}

DiscreteLaw bernoulli_law(double t, double x, double y, double z, double u,
                          double v, double w) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r == 0.0)
    throw DomainError("bernoulli_law: degenerate observable (x=y=z=0), the law "
                      "is a point mass at t");
  const double bn = std::sqrt(u * u + v * v + w * w);
  if (bn > 1.0 + defaults::density_tol)
    throw DomainError("bernoulli_law: Bloch norm exceeds 1");
  const double s = (u * x + v * y + w * z) / r;
  DiscreteLaw out;
  out.support = {t - r, t + r};
  out.probs = {0.5 * (1.0 - s), 0.5 * (1.0 + s)};
  out.validate();
  return out;
}

std::pair<double, double> rank_one_law(const PureState& psi,
                                       const PureState& u) {
  if (psi.dim() != u.dim()) throw ShapeError("rank_one_law: dimension mismatch");
  const double p1 = std::norm(psi.ket().dot(u.ket()));
  return {p1, 1.0 - p1};
}

DiscreteLaw povm_probabilities(const POVM& povm, const DensityMatrix& rho) {
  validate_povm(povm);
  if (povm.effects.front().rows() != rho.dim())
    throw ShapeError("povm_probabilities: dimension mismatch");
  DiscreteLaw out;
  out.support.resize(povm.effects.size());
  std::iota(out.support.begin(), out.support.end(), 0.0);
  for (const CMatrix& e : povm.effects)
    out.probs.push_back((rho.mat() * e).trace().real());
  out.validate();
  return out;
}

NeumarkDilation neumark_dilate(const POVM& povm) {
  validate_povm(povm);
  const Eigen::Index d = povm.effects.front().rows();
  const Eigen::Index m = Eigen::Index(povm.effects.size());

  NeumarkDilation out;
  out.isometry = CMatrix::Zero(m * d, d);
  for (Eigen::Index x = 0; x < m; ++x)
    out.isometry.block(x * d, 0, d, d) = psd_sqrt(povm.effects[x]);
  out.pvm.outcomes = povm.outcomes;
  for (Eigen::Index x = 0; x < m; ++x) {
    CMatrix p = CMatrix::Zero(m * d, m * d);
    p.block(x * d, x * d, d, d) = identity(d);
    out.pvm.projectors.push_back(std::move(p));
  }
  return out;
}

namespace {

CMatrix sum_where(const Observable& a, double cluster_tol, auto&& pred) {
  const SpectralDecomp dec = spectral_decompose(a, cluster_tol);
  CMatrix acc = CMatrix::Zero(a.dim(), a.dim());
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k)
    if (pred(dec.eigenvalues[k])) acc += dec.projectors[k];
  return acc;
}

}  // namespace

CMatrix event_leq(const Observable& a, double x, double cluster_tol) {
  return sum_where(a, cluster_tol, [&](double lam) { return lam <= x; });
}

CMatrix event_lt(const Observable& a, double x, double cluster_tol) {
  return sum_where(a, cluster_tol, [&](double lam) { return lam < x; });
}

CMatrix event_eq(const Observable& a, double lambda, double cluster_tol) {
  const double scale =
      std::max(1.0, max_abs(a.mat()));
  return sum_where(a, cluster_tol, [&](double lam) {
    return std::abs(lam - lambda) <= cluster_tol * scale;
  });
}

}  // namespace algprob
