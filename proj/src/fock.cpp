#include "algprob/fock.hpp"

#include <algorithm>
#include <cmath>

namespace algprob::fock {

void JacobiSequence::validate() const {
  bool dead = false;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (omega[i] < 0)
      throw DomainError("JacobiSequence: negative omega_" + std::to_string(i + 1));
    if (dead && omega[i] != 0)
      throw DomainError("JacobiSequence: omega revives after a zero at index " +
                        std::to_string(i + 1));
    if (omega[i] == 0) dead = true;
  }
  if (m0) {
    for (std::size_t i = *m0; i < omega.size(); ++i)
      if (omega[i] != 0)
        throw DomainError("JacobiSequence: finite type but omega_" +
                          std::to_string(i + 1) + " nonzero");
  }
}

double JacobiSequence::omega_at(std::size_t n) const {
  if (n == 0 || n > omega.size()) return 0.0;
  return omega[n - 1];
}

double JacobiSequence::alpha_at(std::size_t n) const {
  if (n == 0 || n > alpha.size()) return 0.0;
  return alpha[n - 1];
}

void DiscreteMeasure::validate(double tol) const {
  if (atoms.empty() || atoms.size() != weights.size())
    throw ValidationError("DiscreteMeasure: atoms/weights mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0 && atoms[i] <= atoms[i - 1])
      throw ValidationError("DiscreteMeasure: atoms not strictly ascending");
    if (weights[i] <= 0)
      throw ValidationError("DiscreteMeasure: nonpositive weight");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > tol)
    throw ValidationError("DiscreteMeasure: weights sum to " +
                          std::to_string(sum));
}

CMatrix JacobiMatrix::dense() const {
  const Eigen::Index n = size();
  if (offdiag.size() + 1 != diag.size())
    throw ShapeError("JacobiMatrix: offdiag must be one shorter than diag");
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[std::size_t(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = offdiag[std::size_t(i)];
    m(i + 1, i) = offdiag[std::size_t(i)];
  }
  return m;
}

LadderOps ladder_matrices(const JacobiSequence& js, Eigen::Index trunc) {
  if (trunc < 1) throw DomainError("ladder_matrices: trunc must be >= 1");
  js.validate();
  LadderOps ops;
  ops.trunc = trunc;
  ops.create = CMatrix::Zero(trunc, trunc);
  ops.preserve = CMatrix::Zero(trunc, trunc);
  ops.number = CMatrix::Zero(trunc, trunc);
  for (Eigen::Index n = 0; n < trunc; ++n) {
    if (n + 1 < trunc)
      ops.create(n + 1, n) = std::sqrt(js.omega_at(std::size_t(n) + 1));
    ops.preserve(n, n) = js.alpha_at(std::size_t(n) + 1);
    ops.number(n, n) = double(n);
  }
  ops.annihilate = ops.create.adjoint();
  return ops;
}

JacobiSequence q_jacobi(double q, std::size_t n) {
  if (q < -1.0 || q > 1.0) throw DomainError("q_jacobi: q must lie in [-1, 1]");
  JacobiSequence js;
  js.omega.resize(n);
  js.alpha.assign(n, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double w = 0.0, pw = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      w += pw;
      pw *= q;
    }
    js.omega[k - 1] = w;
  }
  // q = −1 collapses to the two-level Fermionic space.
  for (std::size_t k = 0; k < n; ++k)
    if (js.omega[k] == 0.0) {
      js.m0 = k;
      std::fill(js.omega.begin() + long(k), js.omega.end(), 0.0);
      break;
    }
  js.validate();
  return js;
}

std::vector<double> field_moments(const JacobiSequence& js, int max_order) {
  if (max_order < 1) throw DomainError("field_moments: max_order must be >= 1");
  // Z is tridiagonal, so ⟨e₀|Z^m|e₀⟩ only reaches level ⌈m/2⌉; one spare
  // level makes the truncation error exactly zero.
  const Eigen::Index trunc = Eigen::Index((max_order + 1) / 2 + 1);
  const LadderOps ops = ladder_matrices(js, trunc);
  const CMatrix z = ops.create + ops.preserve + ops.annihilate;
  CVector v = CVector::Zero(trunc);
  v(0) = 1.0;
  std::vector<double> moments;
  moments.reserve(std::size_t(max_order));
  for (int k = 1; k <= max_order; ++k) {
    v = z * v;
    moments.push_back(v(0).real());
  }
  return moments;
}

JacobiSequence jacobi_from_measure(const DiscreteMeasure& nu, std::size_t n) {
  nu.validate();
  const std::size_t atoms = nu.atoms.size();
  if (n > atoms - 1)
    throw DomainError("jacobi_from_measure: measure has finite type m0 = " +
                      std::to_string(atoms - 1) + ", requested n = " +
                      std::to_string(n));

  using ld = long double;
  const std::size_t pts = atoms;
  std::vector<ld> x(pts), w(pts);
  for (std::size_t i = 0; i < pts; ++i) {
    x[i] = ld(nu.atoms[i]);
    w[i] = ld(nu.weights[i]);
  }
  auto dot = [&](const std::vector<ld>& f, const std::vector<ld>& g) {
    ld s = 0;
    for (std::size_t i = 0; i < pts; ++i) s += w[i] * f[i] * g[i];
    return s;
  };

  // Monic polynomials P_0 … P_n represented by their values on the atoms;
  // modified Gram-Schmidt with a re-orthogonalization pass.
  std::vector<std::vector<ld>> p;
  p.push_back(std::vector<ld>(pts, 1.0L));
  std::vector<ld> norms{dot(p[0], p[0])};  // ⟨P_k, P_k⟩ = λ_k
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<ld> next(pts);
    for (std::size_t i = 0; i < pts; ++i) next[i] = x[i] * p[k][i];
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j <= k; ++j) {
        const ld coeff = dot(p[j], next) / norms[j];
        for (std::size_t i = 0; i < pts; ++i) next[i] -= coeff * p[j][i];
      }
    norms.push_back(dot(next, next));
    p.push_back(std::move(next));
  }

  // Three-term recurrence data: α_{k+1} = ⟨P_k, x P_k⟩/λ_k, ω_k = λ_k/λ_{k−1}.
  JacobiSequence js;
  js.m0 = atoms - 1;
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<ld> xp(pts);
    for (std::size_t i = 0; i < pts; ++i) xp[i] = x[i] * p[k][i];
    js.alpha.push_back(double(dot(p[k], xp) / norms[k]));
  }
  for (std::size_t k = 1; k <= n; ++k)
    js.omega.push_back(double(norms[k] / norms[k - 1]));
  js.validate();
  return js;
}

JacobiMatrix jacobi_matrix(const JacobiSequence& js, Eigen::Index size) {
  if (size < 1) throw DomainError("jacobi_matrix: size must be >= 1");
  js.validate();
  JacobiMatrix jm;
  for (Eigen::Index i = 0; i < size; ++i)
    jm.diag.push_back(js.alpha_at(std::size_t(i) + 1));
  for (Eigen::Index i = 0; i + 1 < size; ++i)
    jm.offdiag.push_back(std::sqrt(js.omega_at(std::size_t(i) + 1)));
  return jm;
}

DiscreteMeasure measure_from_jacobi(const JacobiMatrix& jm) {
  const HermitianEig eig = hermitian_eig(jm.dense());
  DiscreteMeasure nu;
  const Eigen::Index n = jm.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double atom = eig.eigenvalues(i);
    const double weight = std::norm(eig.eigenvectors(0, i));
    if (weight <= 1e-14) continue;
    // Merge numerically coincident eigenvalues into one atom.
    if (!nu.atoms.empty() && atom - nu.atoms.back() <= 1e-12 * std::max(1.0, std::abs(atom))) {
      nu.weights.back() += weight;
      continue;
    }
    nu.atoms.push_back(atom);
    nu.weights.push_back(weight);
  }
  double sum = 0.0;
  for (double w : nu.weights) sum += w;
  for (double& w : nu.weights) w /= sum;
  nu.validate();
  return nu;
}

double quantum_decomposition_check(const DiscreteMeasure& nu, std::size_t n) {
  const JacobiSequence js = jacobi_from_measure(nu, n);
  const CMatrix mx = jacobi_matrix(js, Eigen::Index(n) + 1).dense();
  const LadderOps ops = ladder_matrices(js, Eigen::Index(n) + 1);
  return (mx - (ops.create + ops.preserve + ops.annihilate)).norm();
}

}  // namespace algprob::fock
