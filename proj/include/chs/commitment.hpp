#pragma once

// Commitment to a bit from the common Haar state: the commit states, the
// SWAP-test verification POVM, hiding distances and sum-binding.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "chs/error.hpp"
#include "chs/numkit.hpp"
#include "chs/pseudorandomness.hpp"
#include "chs/rng.hpp"
#include "chs/typespace.hpp"

namespace chs {

struct CommitmentParams {
  unsigned lambda = 1;
  unsigned n = 2;
  unsigned p = 1;  // (C, R) register pairs
  unsigned t = 0;  // CHS copies held by the receiver for hiding

  void validate() const {
    require(n >= lambda + 1, ErrorKind::ParameterError, "commitment needs n >= lambda + 1");
    require(p >= 1, ErrorKind::ParameterError, "need at least one register pair");
    require(n <= 14, ErrorKind::ParameterError, "n too large");
  }
  std::size_t reg_dim() const { return std::size_t{1} << n; }
  std::size_t pair_dim() const { return reg_dim() * reg_dim(); }
  RegisterShape pairs_shape() const { return RegisterShape::uniform(reg_dim(), 2 * static_cast<std::size_t>(p)); }
};

/// |psi_0> = 2^{-lambda/2} sum_k (Z^k (x) I)|theta>|k || 0^{n-lambda}>,
/// |psi_1> = 2^{-n/2} sum_j |j>|j>, on registers (C, R).
inline StateVector pair_state(int b, const StateVector& common, const CommitmentParams& cp) {
  cp.validate();
  const auto d = cp.reg_dim();
  require(common.shape().total() == d, ErrorKind::ShapeMismatch, "common state has the wrong dimension");
  const RegisterShape shape({d, d});
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d * d));
  if (b == 0) {
    const double w = std::ldexp(1.0, -static_cast<int>(cp.lambda)) ;
    const double amp = std::sqrt(w);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << cp.lambda); ++k) {
      const auto g = prs_apply(PrsKey{cp.lambda, k}, common);
      const std::size_t r = static_cast<std::size_t>(k) << (cp.n - cp.lambda);
      for (std::size_t c = 0; c < d; ++c) v(static_cast<Eigen::Index>(c * d + r)) += amp * g[c];
    }
  } else {
    require(b == 1, ErrorKind::ParameterError, "bit must be 0 or 1");
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) v(static_cast<Eigen::Index>(j * d + j)) = amp;
  }
  return StateVector(shape, std::move(v));
}

/// p-fold tensor power of the pair state, laid out C_1 R_1 ... C_p R_p.
inline StateVector commit_state(int b, const StateVector& common, const CommitmentParams& cp) {
  const auto one = pair_state(b, common, cp);
  StateVector out = one;
  for (unsigned i = 1; i < cp.p; ++i) out = tensor(out, one);
  return out;
}

/// (I + |psi_b><psi_b|)/2 on one (C, R) pair.
inline CMatrix swap_accept_factor(int b, const StateVector& common, const CommitmentParams& cp) {
  const CVector psi = pair_state(b, common, cp).amplitudes();
  const auto n = psi.size();
  return (CMatrix::Identity(n, n) + psi * psi.adjoint()) * 0.5;
}

/// M^(b) as an explicit operator on the p pairs.
inline Operator verification_povm(int b, const StateVector& common, const CommitmentParams& cp) {
  const RegisterShape pair({cp.reg_dim(), cp.reg_dim()});
  const Operator f(pair, swap_accept_factor(b, common, cp), true);
  Operator m = f;
  for (unsigned i = 1; i < cp.p; ++i) m = tensor(m, f);
  return m;
}

/// Applies M^(b) (x) I to a vector on C_1 R_1 ... C_p R_p followed by any extra registers.
inline CVector apply_povm(int b, const StateVector& common, const CommitmentParams& cp, const CVector& v,
                          const RegisterShape& shape) {
  const CMatrix f = swap_accept_factor(b, common, cp);
  CVector out = v;
  for (unsigned i = 0; i < cp.p; ++i) out = apply_on_registers(out, shape, {2 * i, 2 * i + 1}, f);
  return out;
}

/// Tr(M^(b) claimed) for a state on the p pairs.
inline double receiver_accept_prob(int b, const Operator& claimed, const StateVector& common, const CommitmentParams& cp) {
  cp.validate();
  require(claimed.shape() == cp.pairs_shape(), ErrorKind::ShapeMismatch, "claimed state is not on the (C, R) pairs");
  const auto& rho = claimed.matrix();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < rho.cols(); ++j) {
    const CVector col = apply_povm(b, common, cp, rho.col(j), claimed.shape());
    acc += col(j).real();
  }
  return acc;
}

/// <Phi| M^(b) (x) I |Phi> for a pure state whose leading registers are the p pairs.
inline double receiver_accept_prob(int b, const StateVector& claimed, const StateVector& common,
                                   const CommitmentParams& cp) {
  cp.validate();
  const auto& shape = claimed.shape();
  require(shape.size() >= 2 * cp.p, ErrorKind::ShapeMismatch, "claimed state lacks the (C, R) registers");
  for (std::size_t i = 0; i < 2 * cp.p; ++i)
    require(shape.dim(i) == cp.reg_dim(), ErrorKind::ShapeMismatch, "claimed register has the wrong dimension");
  const CVector mv = apply_povm(b, common, cp, claimed.amplitudes(), shape);
  return claimed.amplitudes().dot(mv).real();
}

struct HidingResult {
  double td = 0.0;
  Operator committed0;
  Operator committed1;
};

/// TD between E_theta[Tr_R(commit 0) (x) theta^t] and E_theta[Tr_R(commit 1) (x) theta^t].
/// Tr_R of the b = 0 pair is the Z-twirl of theta with an independent key per
/// pair, and Tr_R of the b = 1 pair is I/2^n.
inline HidingResult hiding_distance(const CommitmentParams& cp) {
  cp.validate();
  const std::uint64_t d = cp.reg_dim();
  const Operator moment = haar_moment(d, cp.p + cp.t);
  const ZTwirl tw = copies_twirl(cp.n, cp.lambda, std::vector<unsigned>(cp.p, 1), cp.t);
  const Operator c0 = twirl(moment, tw, independent_keys(cp.p, cp.lambda));
  Operator c1 = scalar_one();
  for (unsigned i = 0; i < cp.p; ++i) c1 = tensor(c1, Operator::maximally_mixed(RegisterShape({cp.reg_dim()})));
  c1 = tensor(c1, haar_moment(d, cp.t));
  const double td = trace_distance(c0, c1);
  return {td, c0, c1};
}

/// rho_0 = 2^{-lambda} sum_k Z^k |theta><theta| Z^k on the C register.
inline Operator committed_register_state(unsigned lambda, unsigned n, const StateVector& common) {
  const auto d = std::size_t{1} << n;
  require(common.shape().total() == d, ErrorKind::ShapeMismatch, "common state has the wrong dimension");
  const Operator theta(RegisterShape({d}), common.amplitudes() * common.amplitudes().adjoint(), true);
  return twirl(theta, ZTwirl{n, lambda, {0}}, independent_keys(1, lambda));
}

struct FidelityCheck {
  double fidelity = 0.0;
  double bound = 0.0;
  bool ok = false;
};

inline FidelityCheck fidelity_bound_check(unsigned lambda, unsigned n, const StateVector& common) {
  require(n >= lambda + 1, ErrorKind::ParameterError, "need n >= lambda + 1");
  const auto rho0 = committed_register_state(lambda, n, common);
  FidelityCheck r;
  r.fidelity = fidelity(rho0, Operator::maximally_mixed(rho0.shape()));
  r.bound = std::ldexp(1.0, -static_cast<int>(n - lambda));
  r.ok = r.fidelity <= r.bound + 1e-9;
  return r;
}

// ---------------------------------------------------------------------------
// Sum-binding

/// Joint state on C_1 R_1 ... C_p R_p E and the reveal unitaries on R_1 ... R_p E.
struct MaliciousSender {
  std::string name;
  StateVector initial;
  CMatrix reveal0;
  CMatrix reveal1;
};

inline std::vector<std::size_t> reveal_registers(const CommitmentParams& cp) {
  std::vector<std::size_t> regs;
  for (unsigned i = 0; i < cp.p; ++i) regs.push_back(2 * i + 1);
  regs.push_back(2 * cp.p);
  return regs;
}

inline RegisterShape sender_shape(const CommitmentParams& cp, std::size_t env_dim) {
  return cp.pairs_shape().concat(RegisterShape({env_dim}));
}

struct BindingResult {
  double p0 = 0.0;
  double p1 = 0.0;
  double sum() const { return p0 + p1; }
};

/// p_b = <Phi_b| M^(b) (x) I_E |Phi_b>, |Phi_b> = (I_C (x) U^(b)) |Phi>.
inline BindingResult binding_sum(const MaliciousSender& s, const StateVector& common, const CommitmentParams& cp) {
  cp.validate();
  const auto& shape = s.initial.shape();
  require(shape.size() == 2 * cp.p + 1, ErrorKind::ShapeMismatch, "sender state must be on C R pairs and E");
  const auto regs = reveal_registers(cp);
  BindingResult r;
  for (int b = 0; b < 2; ++b) {
    const CMatrix& u = b == 0 ? s.reveal0 : s.reveal1;
    require(is_unitary(u), ErrorKind::NotUnitary, "reveal map of strategy '" + s.name + "' is not unitary");
    const CVector phi = apply_on_registers(s.initial.amplitudes(), shape, regs, u);
    const double pb = receiver_accept_prob(b, StateVector(shape, phi), common, cp);
    (b == 0 ? r.p0 : r.p1) = pb;
  }
  return r;
}

/// Reference value 1 + ((1 + 2^{-(n-lambda)/2}) / 2)^p.
inline double binding_bound(const CommitmentParams& cp) {
  const double x = (1.0 + std::pow(2.0, -0.5 * static_cast<double>(cp.n - cp.lambda))) / 2.0;
  return 1.0 + std::pow(x, static_cast<double>(cp.p));
}

namespace detail {
inline std::size_t reveal_dim(const CommitmentParams& cp, std::size_t env_dim) {
  return static_cast<std::size_t>(checked_pow(cp.reg_dim(), cp.p)) * env_dim;
}
inline StateVector with_env(const StateVector& pairs, std::size_t env_dim) {
  return tensor(pairs, StateVector::basis(RegisterShape({env_dim}), 0));
}
}  // namespace detail

inline MaliciousSender honest_sender(int b, const StateVector& common, const CommitmentParams& cp) {
  const std::size_t rd = detail::reveal_dim(cp, 2);
  const auto n = static_cast<Eigen::Index>(rd);
  return {b == 0 ? "honest-0" : "honest-1", detail::with_env(commit_state(b, common, cp), 2),
          CMatrix::Identity(n, n), CMatrix::Identity(n, n)};
}

/// Commits to |psi_1>^p; opens 1 honestly and opens 0 after rotating each R
/// register by the unitary maximizing the overlap of (I (x) W)|psi_1> with |psi_0>.
inline MaliciousSender entangled_open_both_sender(const StateVector& common, const CommitmentParams& cp) {
  const auto d = static_cast<Eigen::Index>(cp.reg_dim());
  const CVector psi0 = pair_state(0, common, cp).amplitudes();
  CMatrix a(d, d);  // psi0 = sum a(c, r) |c>|r>
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) a(c, r) = psi0(c * d + r);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix w = (svd.matrixU() * svd.matrixV().adjoint()).transpose();
  CMatrix u = CMatrix::Ones(1, 1);
  for (unsigned i = 0; i < cp.p; ++i) u = Eigen::kroneckerProduct(u, w).eval();
  u = Eigen::kroneckerProduct(u, CMatrix::Identity(2, 2)).eval();
  const auto n = static_cast<Eigen::Index>(detail::reveal_dim(cp, 2));
  return {"commit-psi1-open-both", detail::with_env(commit_state(1, common, cp), 2), u, CMatrix::Identity(n, n)};
}

inline std::vector<MaliciousSender> builtin_senders(const StateVector& common, const CommitmentParams& cp) {
  return {honest_sender(0, common, cp), honest_sender(1, common, cp), entangled_open_both_sender(common, cp)};
}

/// Haar-random joint state on C R E and Haar-random reveal unitaries on R E, with E one qubit.
inline MaliciousSender random_sender(const CommitmentParams& cp, CounterRng& rng, const std::string& name) {
  const auto shape = sender_shape(cp, 2);
  const auto init = sample_haar(shape.total(), rng);
  const std::size_t rd = detail::reveal_dim(cp, 2);
  CMatrix u0 = random_unitary(rd, rng);
  CMatrix u1 = random_unitary(rd, rng);
  return {name, StateVector(shape, init.amplitudes()), std::move(u0), std::move(u1)};
}

}  // namespace chs
