// channels.hpp — CP maps in Kraus form, Choi-matrix tests, Kraus extraction,
// composition/tensoring, Jamiołkowski duality, superoperator spectra and
// fixed points, conditional expectation, Lüders update, instruments.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algprob/matcore.hpp"
#include "algprob/measure.hpp"
#include "algprob/states.hpp"

namespace algprob {

enum class ChoiNormalization { raw, normalized };

// CP map ρ ↦ Σ K ρ K† in operator-sum form; Kraus ops of shape out×in.
class KrausChannel {
 public:
  KrausChannel(std::vector<CMatrix> kraus_ops, Eigen::Index in_dim,
               Eigen::Index out_dim);

  const std::vector<CMatrix>& kraus_ops() const { return kraus_; }
  Eigen::Index in_dim() const { return in_; }
  Eigen::Index out_dim() const { return out_; }

  bool is_trace_preserving(double tol = defaults::psd_tol) const;
  bool is_unital(double tol = defaults::psd_tol) const;

  // Action on an arbitrary matrix (no density validation).
  CMatrix operator()(const CMatrix& m) const;

  static KrausChannel identity_channel(Eigen::Index n);
  static KrausChannel unitary(const CMatrix& u, double tol = defaults::psd_tol);
  // Qubit depolarizing family; CP for λ ∈ [−1/3, 1].
  static KrausChannel depolarizing(double lambda);

 private:
  std::vector<CMatrix> kraus_;
  Eigen::Index in_, out_;
};

// Σ_ij E_ij ⊗ Φ(E_ij), input factor first; `normalized` divides by in_dim.
struct ChoiMatrix {
  CMatrix mat;
  Eigen::Index in_dim = 0, out_dim = 0;
  ChoiNormalization normalization = ChoiNormalization::raw;

  CMatrix raw() const;  // mat with normalization undone
};

struct ChannelProperties {
  bool cp = false;
  bool tp = false;
  bool unital = false;
  bool hermiticity = false;  // *-linearity: Choi matrix Hermitian
};

// Per-outcome CP maps whose sum is trace preserving.
struct Instrument {
  std::vector<std::string> outcomes;
  std::vector<KrausChannel> cp_maps;

  // Von Neumann instrument: G_j(ρ) = p_j ρ p_j from a PVM.
  static Instrument von_neumann(const PVM& pvm);
};

struct OutcomeUpdate {
  double prob = 0.0;
  std::optional<DensityMatrix> posterior;  // absent at zero probability
};

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho,
                    double tol = defaults::psd_tol);

ChoiMatrix choi_of(const KrausChannel& ch,
                   ChoiNormalization norm = ChoiNormalization::raw);

// Choi of an arbitrary linear map given by its action on matrix units.
ChoiMatrix choi_of_map(const std::function<CMatrix(const CMatrix&)>& phi,
                       Eigen::Index in_dim,
                       ChoiNormalization norm = ChoiNormalization::raw);

ChannelProperties channel_properties(const KrausChannel& ch,
                                     double tol = defaults::psd_tol);
ChannelProperties channel_properties(const ChoiMatrix& choi,
                                     double tol = defaults::psd_tol);

// Kraus set from the Choi eigenpairs above rank_tol·tr(choi); throws a
// ValidationError carrying the most negative eigenvalue when not CP.
KrausChannel kraus_from_choi(const ChoiMatrix& choi, double rank_tol = 1e-10);

// Pairwise Kraus products {A_i B_j} / Kronecker products {A_i ⊗ B_j}.
KrausChannel compose(const KrausChannel& a, const KrausChannel& b);
KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);

// Matrix of the channel action under column-major vectorization:
// vec(Φ(ρ)) = S vec(ρ) with S = Σ conj(K) ⊗ K.
CMatrix superoperator(const KrausChannel& ch);
double spectral_radius(const KrausChannel& ch);
// Density r with Φ(r) = r, from the superoperator eigenvector nearest
// eigenvalue 1 (Hermitized, clipped, renormalized).
DensityMatrix fixed_point(const KrausChannel& ch, double tol = 1e-8);

// Pinching E(a|B) = Σ p_j a p_j onto the PVM's block algebra.
Observable conditional_expectation(const Observable& a, const PVM& pvm);

// (tr(ρp), pρp / tr(ρp)).
std::pair<double, DensityMatrix> lueders_update(
    const DensityMatrix& rho, const CMatrix& p,
    double prob_tol = defaults::prob_tol);

// tr(pρp q)/tr(ρp).
double conditional_probability(const CMatrix& q, const CMatrix& p,
                               const DensityMatrix& rho,
                               double prob_tol = defaults::prob_tol);

std::vector<OutcomeUpdate> instrument_apply(
    const Instrument& ins, const DensityMatrix& rho,
    double prob_tol = defaults::prob_tol);
DensityMatrix instrument_marginal(const Instrument& ins,
                                  const DensityMatrix& rho);

// Map → normalized Choi → map, reconstructed from block reads on matrix
// units and returned in Kraus form.
KrausChannel jamiolkowski_roundtrip(const KrausChannel& ch);

}  // namespace algprob
