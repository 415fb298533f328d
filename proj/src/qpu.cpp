#include "algprob/qpu.hpp"

#include <algorithm>
#include <cmath>

#include "algprob/rng.hpp"

namespace algprob::qpu {

namespace {

Eigen::Index qubit_dim(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 30)
    throw DomainError("n_qubits out of supported range [1, 30]");
  return Eigen::Index(1) << n_qubits;
}

}  // namespace

QuantumCode::QuantumCode(int n_qubits, std::vector<CMatrix> unitaries,
                         double tol)
    : n_qubits_(n_qubits), unitaries_(std::move(unitaries)) {
  const Eigen::Index dim = qubit_dim(n_qubits);
  if (unitaries_.empty()) throw ValidationError("QuantumCode: empty code");
  for (std::size_t j = 0; j < unitaries_.size(); ++j) {
    const CMatrix& u = unitaries_[j];
    if (u.rows() != dim || u.cols() != dim)
      throw ShapeError("QuantumCode: U_" + std::to_string(j) +
                       " has wrong shape");
    if (max_abs(CMatrix(u.adjoint() * u) - identity(dim)) > tol)
      throw ValidationError("QuantumCode: U_" + std::to_string(j) +
                            " is not unitary");
  }
  if (max_abs(unitaries_.front() - identity(dim)) > tol)
    throw ValidationError("QuantumCode: U_0 must be the identity");
}

PureState basis_ket(int n_qubits, std::uint64_t k) {
  const Eigen::Index dim = qubit_dim(n_qubits);
  if (k >= std::uint64_t(dim))
    throw DomainError("basis_ket: index " + std::to_string(k) +
                      " out of range for " + std::to_string(n_qubits) +
                      " qubits");
  CVector v = CVector::Zero(dim);
  v(Eigen::Index(k)) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix run_code(const QuantumCode& code, const DensityMatrix& rho0) {
  const Eigen::Index dim = qubit_dim(code.n_qubits());
  if (rho0.dim() != dim) throw ShapeError("run_code: density dimension mismatch");
  CMatrix rho = rho0.mat();
  for (const CMatrix& u : code.unitaries()) rho = u * rho * u.adjoint();
  return DensityMatrix::repair(rho);
}

DiscreteLaw measure_law(const DensityMatrix& rho) {
  DiscreteLaw out;
  out.support.resize(rho.dim());
  out.probs.resize(rho.dim());
  for (Eigen::Index k = 0; k < rho.dim(); ++k) {
    out.support[k] = double(k);
    out.probs[k] = rho.mat()(k, k).real();
  }
  out.validate();
  return out;
}

ShotResult sample(const DiscreteLaw& law, std::uint64_t shots,
                  std::uint64_t seed, std::uint64_t stream) {
  law.validate();
  ShotResult out;
  out.shots = shots;
  out.seed = seed;
  if (shots == 0) return out;

  std::vector<double> cdf(law.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < law.probs.size(); ++i) {
    acc += std::max(0.0, law.probs[i]);
    cdf[i] = acc;
  }
  cdf.back() = std::max(cdf.back(), 1.0);

  CounterRng rng(seed, stream);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t idx =
        std::min<std::size_t>(std::size_t(it - cdf.begin()), cdf.size() - 1);
    out.counts[std::uint64_t(idx)] += 1;  // keyed by outcome index
  }
  return out;
}

CMatrix hadamard_layer(int n_qubits) {
  if (n_qubits < 1) throw DomainError("hadamard_layer: n_qubits must be >= 1");
  CMatrix h = hadamard();
  CMatrix out = h;
  for (int i = 1; i < n_qubits; ++i) out = kron(out, h);
  return out;
}

GroverOperators grover_operators(const GroverSpec& spec) {
  const Eigen::Index dim = qubit_dim(spec.n_qubits);
  if (spec.n_qubits < 2) throw DomainError("grover: n_qubits must be >= 2");
  if (spec.marked >= std::uint64_t(dim))
    throw DomainError("grover: marked element out of range");

  GroverOperators ops;
  const CVector a = basis_ket(spec.n_qubits, spec.marked).ket();
  ops.w1 = identity(dim) - 2.0 * (a * a.adjoint());
  const CVector psi1 = hadamard_layer(spec.n_qubits) *
                       basis_ket(spec.n_qubits, 0).ket();
  ops.w2 = 2.0 * (psi1 * psi1.adjoint()) - identity(dim);
  ops.u2 = ops.w2 * ops.w1;
  return ops;
}

std::vector<double> grover_run(const GroverSpec& spec, int iterations) {
  const Eigen::Index dim = qubit_dim(spec.n_qubits);
  if (spec.n_qubits < 2) throw DomainError("grover: n_qubits must be >= 2");
  if (spec.marked >= std::uint64_t(dim))
    throw DomainError("grover: marked element out of range");
  if (iterations < 0) throw DomainError("grover: iterations must be >= 0");
  const Eigen::Index a = Eigen::Index(spec.marked);

  // Work with the unnormalized vector √N·ψ: the start H^{⊗n}|0…0⟩ becomes
  // the all-ones vector and U₂ = W₂W₁ has dyadic-rational entries, so
  // p₀ = 1/2ⁿ comes out exact.  Probabilities divide by N at readout.
  const double N = double(dim);
  CMatrix u2 = CMatrix::Constant(dim, dim, cplx(2.0 / N, 0.0));
  u2 -= identity(dim);       // W₂ = (2/N)·J − I on the unnormalized scale
  u2.col(a) *= -1.0;         // right-multiplying by W₁ negates column a

  CVector psi = CVector::Constant(dim, cplx(1.0, 0.0));
  std::vector<double> probs;
  probs.reserve(std::size_t(iterations) + 1);
  probs.push_back(std::norm(psi(a)) / N);
  for (int j = 0; j < iterations; ++j) {
    psi = u2 * psi;
    probs.push_back(std::norm(psi(a)) / N);
  }
  return probs;
}

int grover_optimal_k(int n_qubits) {
  if (n_qubits < 2) throw DomainError("grover: n_qubits must be >= 2");
  const double theta = std::asin(std::pow(2.0, -0.5 * n_qubits));
  const int k = int(std::lround(M_PI / (4.0 * theta) - 0.5));
  return std::max(k, 0);
}

}  // namespace algprob::qpu
