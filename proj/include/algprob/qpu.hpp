// qpu.hpp — n-qubit digital quantum computer: computational basis, quantum
// codes, measurement laws, shot sampling, Hadamard layers, Grover search.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "algprob/matcore.hpp"
#include "algprob/measure.hpp"
#include "algprob/states.hpp"

namespace algprob::qpu {

// Finite sequence U₀,…,U_ℓ of 2ⁿ×2ⁿ unitaries with U₀ = I.
class QuantumCode {
 public:
  QuantumCode(int n_qubits, std::vector<CMatrix> unitaries,
              double tol = defaults::psd_tol);

  int n_qubits() const { return n_qubits_; }
  const std::vector<CMatrix>& unitaries() const { return unitaries_; }

 private:
  int n_qubits_;
  std::vector<CMatrix> unitaries_;
};

struct ShotResult {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

struct GroverSpec {
  int n_qubits = 2;
  std::uint64_t marked = 0;
};

struct GroverOperators {
  CMatrix w1;  // I − 2|a⟩⟨a|
  CMatrix w2;  // 2|Ψ₁⟩⟨Ψ₁| − I
  CMatrix u2;  // W₂W₁
};

// |k⟩ with k read big-endian: x₀ is the most significant bit.
PureState basis_ket(int n_qubits, std::uint64_t k);

// ρ_ℓ = U_ℓ⋯U₁U₀ ρ₀ U₀†U₁†⋯U_ℓ†.
DensityMatrix run_code(const QuantumCode& code, const DensityMatrix& rho0);

// p_k = ⟨k|ρ|k⟩ over outcomes k ∈ ℤ_{2ⁿ}.
DiscreteLaw measure_law(const DensityMatrix& rho);

// Inverse-CDF sampling, reproducible per (seed, stream).
ShotResult sample(const DiscreteLaw& law, std::uint64_t shots,
                  std::uint64_t seed, std::uint64_t stream = 0);

// H^{⊗n}.
CMatrix hadamard_layer(int n_qubits);

GroverOperators grover_operators(const GroverSpec& spec);

// Success probabilities p₀…p_k, p_j = |⟨a|U₂^j H^{⊗n}|0…0⟩|², simulated
// with the full dense U₂.
std::vector<double> grover_run(const GroverSpec& spec, int iterations);

// argmax_j sin²((2j+1)θ) = round(π/(4θ) − ½), sin θ = 2^{−n/2}.
int grover_optimal_k(int n_qubits);

}  // namespace algprob::qpu
