#include "algprob/channels.hpp"

#include <cmath>
#include <limits>

namespace algprob {

namespace {

CMatrix matrix_unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

// Column-major vec/unvec; the convention is fixed project-wide.
CVector vec_cm(const CMatrix& m) {
  CVector v(m.rows() * m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    v.segment(j * m.rows(), m.rows()) = m.col(j);
  return v;
}

CMatrix unvec_cm(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    m.col(j) = v.segment(j * rows, rows);
  return m;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<CMatrix> kraus_ops, Eigen::Index in_dim,
                           Eigen::Index out_dim)
    : kraus_(std::move(kraus_ops)), in_(in_dim), out_(out_dim) {
  if (kraus_.empty()) throw ValidationError("KrausChannel: no Kraus operators");
  if (in_ < 1 || out_ < 1) throw ShapeError("KrausChannel: bad dimensions");
  for (const CMatrix& k : kraus_)
    if (k.rows() != out_ || k.cols() != in_)
      throw ShapeError("KrausChannel: Kraus operator shape mismatch");
}

bool KrausChannel::is_trace_preserving(double tol) const {
  CMatrix acc = CMatrix::Zero(in_, in_);
  for (const CMatrix& k : kraus_) acc += k.adjoint() * k;
  return max_abs(acc - identity(in_)) <= tol;
}

bool KrausChannel::is_unital(double tol) const {
  if (in_ != out_) return false;
  CMatrix acc = CMatrix::Zero(out_, out_);
  for (const CMatrix& k : kraus_) acc += k * k.adjoint();
  return max_abs(acc - identity(out_)) <= tol;
}

CMatrix KrausChannel::operator()(const CMatrix& m) const {
  if (m.rows() != in_ || m.cols() != in_)
    throw ShapeError("KrausChannel: input dimension mismatch");
  CMatrix acc = CMatrix::Zero(out_, out_);
  for (const CMatrix& k : kraus_) acc += k * m * k.adjoint();
  return acc;
}

KrausChannel KrausChannel::identity_channel(Eigen::Index n) {
  return KrausChannel({identity(n)}, n, n);
}

KrausChannel KrausChannel::unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) throw ShapeError("unitary channel: square required");
  if (max_abs(CMatrix(u.adjoint() * u) - identity(u.cols())) > tol)
    throw ValidationError("unitary channel: matrix is not unitary");
  return KrausChannel({u}, u.cols(), u.rows());
}

KrausChannel KrausChannel::depolarizing(double lambda) {
  if (lambda < -1.0 / 3.0 || lambda > 1.0)
    throw DomainError("depolarizing: CP requires lambda in [-1/3, 1]");
  const double c0 = std::sqrt((1.0 + 3.0 * lambda) / 4.0);
  const double c1 = std::sqrt((1.0 - lambda) / 4.0);
  std::vector<CMatrix> ops;
  if (c0 > 0) ops.push_back(c0 * identity(2));
  if (c1 > 0) {
    ops.push_back(c1 * pauli_x());
    ops.push_back(c1 * pauli_y());
    ops.push_back(c1 * pauli_z());
  }
  return KrausChannel(std::move(ops), 2, 2);
}

CMatrix ChoiMatrix::raw() const {
  if (normalization == ChoiNormalization::raw) return mat;
  return double(in_dim) * mat;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho,
                    double tol) {
  if (!ch.is_trace_preserving(tol))
    throw ValidationError("apply: channel is not trace preserving");
  return DensityMatrix::repair(ch(rho.mat()));
}

ChoiMatrix choi_of(const KrausChannel& ch, ChoiNormalization norm) {
  return choi_of_map([&](const CMatrix& e) { return ch(e); }, ch.in_dim(),
                     norm);
}

ChoiMatrix choi_of_map(const std::function<CMatrix(const CMatrix&)>& phi,
                       Eigen::Index in_dim, ChoiNormalization norm) {
  const Eigen::Index n = in_dim;
  const CMatrix probe = phi(matrix_unit(n, 0, 0));
  const Eigen::Index m = probe.rows();
  CMatrix c = CMatrix::Zero(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const CMatrix img =
          (i == 0 && j == 0) ? probe : phi(matrix_unit(n, i, j));
      c.block(i * m, j * m, m, m) = img;
    }
  if (norm == ChoiNormalization::normalized) c /= double(n);
  return ChoiMatrix{std::move(c), n, m, norm};
}

ChannelProperties channel_properties(const KrausChannel& ch, double tol) {
  return channel_properties(choi_of(ch), tol);
}

ChannelProperties channel_properties(const ChoiMatrix& choi, double tol) {
  const CMatrix c = choi.raw();
  const Eigen::Index n = choi.in_dim, m = choi.out_dim;
  if (c.rows() != n * m)
    throw ShapeError("channel_properties: Choi side != in_dim*out_dim");
  ChannelProperties props;
  props.hermiticity = is_hermitian(c, tol);
  props.cp = props.hermiticity && is_psd(c, tol);
  // TP ⇔ tracing out the output factor leaves I_in;
  // unital ⇔ tracing out the input factor leaves I_out.
  const CMatrix tr_out = partial_trace(c, {n, m}, {0});
  props.tp = max_abs(tr_out - identity(n)) <= tol * std::max(1.0, double(n));
  const CMatrix tr_in = partial_trace(c, {n, m}, {1});
  props.unital = max_abs(tr_in - identity(m)) <= tol * std::max(1.0, double(m));
  return props;
}

KrausChannel kraus_from_choi(const ChoiMatrix& choi, double rank_tol) {
  const CMatrix c = choi.raw();
  const Eigen::Index n = choi.in_dim, m = choi.out_dim;
  if (c.rows() != n * m)
    throw ShapeError("kraus_from_choi: Choi side != in_dim*out_dim");
  const HermitianEig eig = hermitian_eig(c);
  const double lo = eig.eigenvalues.minCoeff();
  const double scale = std::max(1.0, std::abs(c.trace()));
  if (lo < -defaults::psd_tol * scale)
    throw ValidationError("kraus_from_choi: Choi matrix not PSD, min eigenvalue " +
                          std::to_string(lo));
  const double cut = rank_tol * std::abs(c.trace());
  std::vector<CMatrix> ops;
  for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
    const double lam = eig.eigenvalues(j);
    if (lam <= cut) continue;
    // Choi index (i,a) = i·m + a pairs input i with output a, so the
    // eigenvector read column-by-column is the Kraus operator (out×in).
    const CVector v = eig.eigenvectors.col(j);
    ops.push_back(std::sqrt(lam) * unvec_cm(v, m, n));
  }
  if (ops.empty()) ops.push_back(zero(m, n));
  return KrausChannel(std::move(ops), n, m);
}

KrausChannel compose(const KrausChannel& a, const KrausChannel& b) {
  if (b.out_dim() != a.in_dim())
    throw ShapeError("compose: inner dimensions do not chain");
  std::vector<CMatrix> ops;
  ops.reserve(a.kraus_ops().size() * b.kraus_ops().size());
  for (const CMatrix& ka : a.kraus_ops())
    for (const CMatrix& kb : b.kraus_ops()) ops.push_back(ka * kb);
  return KrausChannel(std::move(ops), b.in_dim(), a.out_dim());
}

KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<CMatrix> ops;
  ops.reserve(a.kraus_ops().size() * b.kraus_ops().size());
  for (const CMatrix& ka : a.kraus_ops())
    for (const CMatrix& kb : b.kraus_ops()) ops.push_back(kron(ka, kb));
  return KrausChannel(std::move(ops), a.in_dim() * b.in_dim(),
                      a.out_dim() * b.out_dim());
}

CMatrix superoperator(const KrausChannel& ch) {
  if (ch.in_dim() != ch.out_dim())
    throw ShapeError("superoperator: channel must be an endomorphism");
  const Eigen::Index n = ch.in_dim();
  CMatrix s = CMatrix::Zero(n * n, n * n);
  for (const CMatrix& k : ch.kraus_ops()) s += kron(k.conjugate(), k);
  return s;
}

double spectral_radius(const KrausChannel& ch) {
  Eigen::ComplexEigenSolver<CMatrix> es(superoperator(ch), false);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectral_radius: eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

DensityMatrix fixed_point(const KrausChannel& ch, double tol) {
  if (!ch.is_trace_preserving())
    throw ValidationError("fixed_point: channel is not trace preserving");
  const Eigen::Index n = ch.in_dim();
  Eigen::ComplexEigenSolver<CMatrix> es(superoperator(ch), true);
  if (es.info() != Eigen::Success)
    throw NumericalError("fixed_point: eigensolver failed");
  Eigen::Index best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double d = std::abs(es.eigenvalues()(i) - cplx(1.0));
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  if (dist > 1e-6)
    throw NumericalError("fixed_point: no eigenvalue near 1 (distance " +
                         std::to_string(dist) + ")");
  CMatrix r = unvec_cm(es.eigenvectors().col(best), n, n);
  r = 0.5 * (r + CMatrix(r.adjoint()));
  const HermitianEig eig = hermitian_eig(r);
  RVector vals = eig.eigenvalues;
  // The Hermitized eigenvector may point at -r; flip to the positive side.
  if (vals.maxCoeff() < -vals.minCoeff()) vals = -vals;
  vals = vals.cwiseMax(0.0);
  if (vals.sum() <= 0)
    throw NumericalError("fixed_point: degenerate fixed-point candidate");
  vals /= vals.sum();
  CMatrix rho = eig.eigenvectors * vals.asDiagonal() * eig.eigenvectors.adjoint();
  DensityMatrix out = DensityMatrix::repair(rho);
  const double resid = schatten_norm(ch(out.mat()) - out.mat(), 1.0);
  if (resid > tol)
    throw NumericalError("fixed_point: residual " + std::to_string(resid) +
                         " exceeds tolerance");
  return out;
}

Instrument Instrument::von_neumann(const PVM& pvm) {
  validate_pvm(pvm);
  Instrument ins;
  ins.outcomes = pvm.outcomes;
  const Eigen::Index n = pvm.projectors.front().rows();
  for (const CMatrix& p : pvm.projectors)
    ins.cp_maps.push_back(KrausChannel({p}, n, n));
  return ins;
}

Observable conditional_expectation(const Observable& a, const PVM& pvm) {
  validate_pvm(pvm);
  if (pvm.projectors.front().rows() != a.dim())
    throw ShapeError("conditional_expectation: dimension mismatch");
  CMatrix acc = CMatrix::Zero(a.dim(), a.dim());
  for (const CMatrix& p : pvm.projectors) acc += p * a.mat() * p;
  return Observable(0.5 * (acc + CMatrix(acc.adjoint())));
}

std::pair<double, DensityMatrix> lueders_update(const DensityMatrix& rho,
                                                const CMatrix& p,
                                                double prob_tol) {
  if (p.rows() != rho.dim() || p.cols() != rho.dim())
    throw ShapeError("lueders_update: dimension mismatch");
  if (max_abs(p * p - p) > defaults::psd_tol || !is_hermitian(p))
    throw ValidationError("lueders_update: p is not a projector");
  const double prob = (rho.mat() * p).trace().real();
  if (prob <= prob_tol)
    throw ZeroProbabilityError(
        "lueders_update: conditioning probability " + std::to_string(prob) +
        " below prob_tol");
  CMatrix post = p * rho.mat() * p / prob;
  return {prob, DensityMatrix::repair(post)};
}

double conditional_probability(const CMatrix& q, const CMatrix& p,
                               const DensityMatrix& rho, double prob_tol) {
  const auto [prob, post] = lueders_update(rho, p, prob_tol);
  if (max_abs(q * q - q) > defaults::psd_tol || !is_hermitian(q))
    throw ValidationError("conditional_probability: q is not a projector");
  return (post.mat() * q).trace().real();
}

std::vector<OutcomeUpdate> instrument_apply(const Instrument& ins,
                                            const DensityMatrix& rho,
                                            double prob_tol) {
  if (ins.cp_maps.empty()) throw ValidationError("instrument: no outcomes");
  double total = 0.0;
  std::vector<OutcomeUpdate> out;
  for (const KrausChannel& g : ins.cp_maps) {
    const CMatrix img = g(rho.mat());
    OutcomeUpdate u;
    u.prob = img.trace().real();
    total += u.prob;
    if (u.prob > prob_tol)
      u.posterior = DensityMatrix::repair(CMatrix(img / u.prob));
    out.push_back(std::move(u));
  }
  if (std::abs(total - 1.0) > defaults::psd_tol)
    throw ValidationError("instrument: summed map not trace preserving (" +
                          std::to_string(total) + ")");
  return out;
}

DensityMatrix instrument_marginal(const Instrument& ins,
                                  const DensityMatrix& rho) {
  if (ins.cp_maps.empty()) throw ValidationError("instrument: no outcomes");
  CMatrix acc =
      CMatrix::Zero(ins.cp_maps.front().out_dim(), ins.cp_maps.front().out_dim());
  for (const KrausChannel& g : ins.cp_maps) acc += g(rho.mat());
  return DensityMatrix::repair(acc);
}

KrausChannel jamiolkowski_roundtrip(const KrausChannel& ch) {
  const ChoiMatrix j = choi_of(ch, ChoiNormalization::normalized);
  // Inverse direction: Φ(E_ij) = in_dim · block(i,j) of the normalized Choi
  // operator, reassembled into a raw Choi and factored back into Kraus form.
  return kraus_from_choi(
      ChoiMatrix{j.raw(), j.in_dim, j.out_dim, ChoiNormalization::raw});
}

}  // namespace algprob
