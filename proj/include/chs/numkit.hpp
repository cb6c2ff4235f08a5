#pragma once

// Dense complex linear algebra over explicitly shaped register systems.
//
// Flat-index convention (used everywhere in the library): for a shape with
// per-register dimensions (d_0, ..., d_{r-1}), the basis state
// |i_0 i_1 ... i_{r-1}> has flat index sum_j i_j * prod_{k>j} d_k, i.e.
// register 0 is the most significant digit. Kronecker products follow the
// same order, so tensor(A, B) places A's registers first.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "chs/error.hpp"
#include "chs/limits.hpp"
#include "chs/rng.hpp"

namespace chs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double norm = 1e-10;
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-9;        // eigenvalues in [-psd, 0) are clipped to 0
inline constexpr double fidelity_psd = 1e-8;
inline constexpr double rank_rel = 1e-8;
}  // namespace tol

class RegisterShape {
 public:
  RegisterShape() = default;

  explicit RegisterShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    unsigned __int128 total = 1;
    for (std::size_t d : dims_) {
      require(d >= 2, ErrorKind::ShapeMismatch, "register dimension must be >= 2");
      total *= d;
      require(total <= limits().max_dim, ErrorKind::DimensionOverflow,
              "flat dimension exceeds cap " + std::to_string(limits().max_dim));
    }
    total_ = static_cast<std::size_t>(total);
  }

  static RegisterShape uniform(std::size_t dim, std::size_t count) {
    return RegisterShape(std::vector<std::size_t>(count, dim));
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }
  std::size_t total() const { return total_; }
  std::size_t dim(std::size_t reg) const { return dims_.at(reg); }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(dims_.size(), 1);
    for (std::size_t j = dims_.size(); j-- > 1;) s[j - 1] = s[j] * dims_[j];
    return s;
  }

  RegisterShape concat(const RegisterShape& other) const {
    std::vector<std::size_t> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return RegisterShape(std::move(d));
  }

  RegisterShape select(const std::vector<std::size_t>& regs) const {
    std::vector<std::size_t> d;
    d.reserve(regs.size());
    for (std::size_t r : regs) d.push_back(dims_.at(r));
    return RegisterShape(std::move(d));
  }

  std::vector<std::size_t> digits(std::size_t flat) const {
    std::vector<std::size_t> out(dims_.size());
    for (std::size_t j = dims_.size(); j-- > 0;) {
      out[j] = flat % dims_[j];
      flat /= dims_[j];
    }
    return out;
  }

  std::size_t flat(const std::vector<std::size_t>& digits) const {
    std::size_t f = 0;
    for (std::size_t j = 0; j < dims_.size(); ++j) f = f * dims_[j] + digits[j];
    return f;
  }

  /// Flat-index contributions of the listed registers, enumerated with
  /// regs[0] as the most significant digit.
  std::vector<std::size_t> offsets(const std::vector<std::size_t>& regs) const {
    const auto st = strides();
    std::size_t count = 1;
    for (std::size_t r : regs) count *= dims_.at(r);
    std::vector<std::size_t> out(count, 0);
    std::size_t block = count;
    for (std::size_t r : regs) {
      block /= dims_[r];
      for (std::size_t i = 0; i < count; ++i) out[i] += ((i / block) % dims_[r]) * st[r];
    }
    return out;
  }

  friend bool operator==(const RegisterShape&, const RegisterShape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

inline std::string describe(const RegisterShape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s.dim(i));
  return out + "]";
}

class StateVector {
 public:
  StateVector(RegisterShape shape, CVector amplitudes)
      : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
    require(static_cast<std::size_t>(amps_.size()) == shape_.total(), ErrorKind::ShapeMismatch,
            "amplitude count does not match shape " + describe(shape_));
    require(std::abs(amps_.norm() - 1.0) <= tol::norm, ErrorKind::NotNormalized,
            "state vector norm deviates from 1");
  }

  static StateVector basis(const RegisterShape& shape, std::size_t index) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total()));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(shape, std::move(v));
  }

  /// Normalizes `raw` before construction.
  static StateVector normalized(const RegisterShape& shape, CVector raw) {
    const double n = raw.norm();
    require(n > 0.0, ErrorKind::NotNormalized, "cannot normalize the zero vector");
    raw /= n;
    return StateVector(shape, std::move(raw));
  }

  const RegisterShape& shape() const { return shape_; }
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  RegisterShape shape_;
  CVector amps_;
};

inline double max_hermitian_defect(const CMatrix& m) {
  return m.rows() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

class Operator {
 public:
  Operator(RegisterShape shape, CMatrix entries, bool hermitian_hint = false)
      : shape_(std::move(shape)), m_(std::move(entries)), hermitian_(hermitian_hint) {
    const auto n = static_cast<Eigen::Index>(shape_.total());
    require(m_.rows() == n && m_.cols() == n, ErrorKind::ShapeMismatch,
            "matrix size does not match shape " + describe(shape_));
    if (hermitian_) {
      require(max_hermitian_defect(m_) <= tol::hermitian, ErrorKind::ShapeMismatch,
              "hermitian_hint set on a non-Hermitian matrix");
    }
  }

  static Operator identity(const RegisterShape& shape) {
    const auto n = static_cast<Eigen::Index>(shape.total());
    return Operator(shape, CMatrix::Identity(n, n), true);
  }
  static Operator zero(const RegisterShape& shape) {
    const auto n = static_cast<Eigen::Index>(shape.total());
    return Operator(shape, CMatrix::Zero(n, n), true);
  }
  static Operator maximally_mixed(const RegisterShape& shape) {
    const auto n = static_cast<Eigen::Index>(shape.total());
    return Operator(shape, CMatrix::Identity(n, n) / static_cast<double>(n), true);
  }
  static Operator projector(const StateVector& s) {
    return Operator(s.shape(), s.amplitudes() * s.amplitudes().adjoint(), true);
  }
  /// |a><b| for two flat basis indices.
  static Operator matrix_unit(const RegisterShape& shape, std::size_t row, std::size_t col) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(shape.total()),
                              static_cast<Eigen::Index>(shape.total()));
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
    return Operator(shape, std::move(m), row == col);
  }

  const RegisterShape& shape() const { return shape_; }
  const CMatrix& matrix() const { return m_; }
  bool hermitian() const { return hermitian_; }
  std::size_t dim() const { return shape_.total(); }
  cplx trace() const { return m_.trace(); }

  Operator adjoint() const { return Operator(shape_, m_.adjoint(), hermitian_); }

  friend Operator operator+(const Operator& a, const Operator& b) {
    require(a.shape_ == b.shape_, ErrorKind::ShapeMismatch, "operator sum of different shapes");
    return Operator(a.shape_, a.m_ + b.m_, a.hermitian_ && b.hermitian_);
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    require(a.shape_ == b.shape_, ErrorKind::ShapeMismatch, "operator difference of different shapes");
    return Operator(a.shape_, a.m_ - b.m_, a.hermitian_ && b.hermitian_);
  }
  friend Operator operator*(double s, const Operator& a) {
    return Operator(a.shape_, s * a.m_, a.hermitian_);
  }
  friend Operator operator*(const Operator& a, const Operator& b) {
    require(a.shape_ == b.shape_, ErrorKind::ShapeMismatch, "operator product of different shapes");
    return Operator(a.shape_, a.m_ * b.m_, false);
  }

 private:
  RegisterShape shape_;
  CMatrix m_;
  bool hermitian_ = false;
};

inline double max_abs_diff(const Operator& a, const Operator& b) {
  require(a.shape() == b.shape(), ErrorKind::ShapeMismatch, "comparing operators of different shapes");
  return a.dim() == 0 ? 0.0 : (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Tensor structure

inline Operator tensor(const Operator& a, const Operator& b) {
  RegisterShape shape = a.shape().concat(b.shape());  // enforces the dimension cap
  CMatrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return Operator(std::move(shape), std::move(m), a.hermitian() && b.hermitian());
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  RegisterShape shape = a.shape().concat(b.shape());
  CVector v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return StateVector(std::move(shape), std::move(v));
}

template <class T>
T tensor_power(const T& a, std::size_t copies, const T& unit) {
  T out = unit;
  for (std::size_t i = 0; i < copies; ++i) out = tensor(out, a);
  return out;
}

/// The 1x1 operator [1] on zero registers; neutral element of tensor().
inline Operator scalar_one() { return Operator(RegisterShape{}, CMatrix::Ones(1, 1), true); }

namespace detail {
inline std::vector<std::size_t> checked_register_set(const RegisterShape& shape,
                                                     std::vector<std::size_t> regs) {
  std::sort(regs.begin(), regs.end());
  regs.erase(std::unique(regs.begin(), regs.end()), regs.end());
  for (std::size_t r : regs) {
    require(r < shape.size(), ErrorKind::BadRegisterIndex,
            "register " + std::to_string(r) + " out of range for shape " + describe(shape));
  }
  return regs;
}
inline std::vector<std::size_t> others(const RegisterShape& shape, const std::vector<std::size_t>& regs) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < shape.size(); ++r) {
    if (!std::binary_search(regs.begin(), regs.end(), r)) out.push_back(r);
  }
  return out;
}
}  // namespace detail

/// Traces out every register not in `keep`; kept registers retain their order.
inline Operator partial_trace(const Operator& m, std::vector<std::size_t> keep) {
  const auto& shape = m.shape();
  keep = detail::checked_register_set(shape, std::move(keep));
  const auto traced = detail::others(shape, keep);
  const auto koff = shape.offsets(keep);
  const auto toff = shape.offsets(traced);
  const auto k = static_cast<Eigen::Index>(koff.size());
  CMatrix out = CMatrix::Zero(k, k);
  const CMatrix& src = m.matrix();
  for (Eigen::Index b = 0; b < k; ++b) {
    for (Eigen::Index a = 0; a < k; ++a) {
      cplx acc = 0.0;
      for (std::size_t c : toff) {
        acc += src(static_cast<Eigen::Index>(koff[a] + c), static_cast<Eigen::Index>(koff[b] + c));
      }
      out(a, b) = acc;
    }
  }
  return Operator(shape.select(keep), std::move(out), m.hermitian());
}

/// Transposes the listed tensor factors in the computational basis.
inline Operator partial_transpose(const Operator& m, std::vector<std::size_t> over) {
  const auto& shape = m.shape();
  over = detail::checked_register_set(shape, std::move(over));
  const auto rest = detail::others(shape, over);
  const auto ooff = shape.offsets(over);
  const auto roff = shape.offsets(rest);
  const CMatrix& src = m.matrix();
  CMatrix out(src.rows(), src.cols());
  for (std::size_t b : roff) {
    for (std::size_t y : ooff) {
      for (std::size_t a : roff) {
        for (std::size_t x : ooff) {
          out(static_cast<Eigen::Index>(a + y), static_cast<Eigen::Index>(b + x)) =
              src(static_cast<Eigen::Index>(a + x), static_cast<Eigen::Index>(b + y));
        }
      }
    }
  }
  return Operator(shape, std::move(out), m.hermitian());
}

namespace detail {
inline std::vector<std::size_t> permutation_map(const RegisterShape& shape,
                                                const std::vector<std::size_t>& perm,
                                                RegisterShape& new_shape) {
  require(perm.size() == shape.size(), ErrorKind::BadRegisterIndex, "permutation length mismatch");
  std::vector<std::size_t> seen(perm);
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    require(seen[i] == i, ErrorKind::BadRegisterIndex, "not a permutation of registers");
  }
  new_shape = shape.select(perm);
  const auto new_strides = new_shape.strides();
  // old register perm[j] becomes new register j
  std::vector<std::size_t> stride_of_old(shape.size());
  for (std::size_t j = 0; j < perm.size(); ++j) stride_of_old[perm[j]] = new_strides[j];
  std::vector<std::size_t> map(shape.total());
  for (std::size_t i = 0; i < shape.total(); ++i) {
    const auto dg = shape.digits(i);
    std::size_t f = 0;
    for (std::size_t r = 0; r < dg.size(); ++r) f += dg[r] * stride_of_old[r];
    map[i] = f;
  }
  return map;
}
}  // namespace detail

/// Reorders registers: register j of the result is register perm[j] of the input.
inline Operator permute_registers(const Operator& m, const std::vector<std::size_t>& perm) {
  RegisterShape ns;
  const auto map = detail::permutation_map(m.shape(), perm, ns);
  CMatrix out(m.matrix().rows(), m.matrix().cols());
  for (std::size_t j = 0; j < map.size(); ++j) {
    for (std::size_t i = 0; i < map.size(); ++i) {
      out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
          m.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return Operator(std::move(ns), std::move(out), m.hermitian());
}

inline StateVector permute_registers(const StateVector& s, const std::vector<std::size_t>& perm) {
  RegisterShape ns;
  const auto map = detail::permutation_map(s.shape(), perm, ns);
  CVector out(s.amplitudes().size());
  for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(map[i])) = s[i];
  return StateVector(std::move(ns), std::move(out));
}

/// Applies `u` to the listed registers (regs[0] most significant within `u`)
/// of a raw amplitude vector laid out by `shape`.
inline CVector apply_on_registers(const CVector& v, const RegisterShape& shape,
                                  const std::vector<std::size_t>& regs, const CMatrix& u) {
  for (std::size_t r : regs) {
    require(r < shape.size(), ErrorKind::BadRegisterIndex, "register index out of range");
  }
  std::vector<std::size_t> sorted(regs);
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::BadRegisterIndex,
          "duplicate register in apply_on_registers");
  const auto aoff = shape.offsets(regs);
  const auto roff = shape.offsets(detail::others(shape, sorted));
  require(u.rows() == static_cast<Eigen::Index>(aoff.size()) && u.cols() == u.rows(),
          ErrorKind::ShapeMismatch, "local operator dimension does not match registers");
  require(v.size() == static_cast<Eigen::Index>(shape.total()), ErrorKind::ShapeMismatch,
          "vector length does not match shape");
  CVector out(v.size());
  CVector local(u.rows());
  for (std::size_t b : roff) {
    for (std::size_t k = 0; k < aoff.size(); ++k) local(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(b + aoff[k]));
    const CVector img = u * local;
    for (std::size_t k = 0; k < aoff.size(); ++k) out(static_cast<Eigen::Index>(b + aoff[k])) = img(static_cast<Eigen::Index>(k));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectra

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;
};

inline HermitianEigen hermitian_eigen(const CMatrix& m) {
  const CMatrix sym = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  require(es.info() == Eigen::Success, ErrorKind::EigsFailed, "Hermitian eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  const CMatrix sym = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, ErrorKind::EigsFailed, "Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

inline double trace_norm(const Operator& m) {
  if (m.dim() == 0) return 0.0;
  if (m.hermitian()) return hermitian_eigenvalues(m.matrix()).cwiseAbs().sum();
  Eigen::BDCSVD<CMatrix> svd(m.matrix());
  require(svd.info() == Eigen::Success, ErrorKind::EigsFailed, "SVD did not converge");
  return svd.singularValues().sum();
}

inline double trace_distance(const Operator& a, const Operator& b) {
  require(a.shape() == b.shape(), ErrorKind::ShapeMismatch,
          "trace distance between " + describe(a.shape()) + " and " + describe(b.shape()));
  const Operator diff(a.shape(), a.matrix() - b.matrix(), a.hermitian() && b.hermitian());
  return 0.5 * trace_norm(diff);
}

namespace detail {
inline Eigen::VectorXd clipped(const Eigen::VectorXd& ev, double floor_tol, ErrorKind kind) {
  Eigen::VectorXd out = ev;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    require(out(i) >= -floor_tol, kind, "eigenvalue " + std::to_string(out(i)) + " below tolerance");
    if (out(i) < 0.0) out(i) = 0.0;
  }
  return out;
}
inline CMatrix spectral_apply(const HermitianEigen& e, const Eigen::VectorXd& f) {
  return e.vectors * f.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}
}  // namespace detail

/// Squared convention: F = (Tr sqrt(sqrt(a) b sqrt(a)))^2.
inline double fidelity(const Operator& a, const Operator& b) {
  require(a.shape() == b.shape(), ErrorKind::ShapeMismatch, "fidelity between different shapes");
  const auto ea = hermitian_eigen(a.matrix());
  const auto la = detail::clipped(ea.values, tol::fidelity_psd, ErrorKind::NotPSD);
  const auto lb = hermitian_eigenvalues(b.matrix());
  require(lb.minCoeff() >= -tol::fidelity_psd, ErrorKind::NotPSD, "second fidelity argument not PSD");
  const CMatrix sa = detail::spectral_apply(ea, la.cwiseSqrt());
  const CMatrix inner = sa * b.matrix() * sa;
  const Eigen::VectorXd li = hermitian_eigenvalues(inner).cwiseMax(0.0);
  const double root = li.cwiseSqrt().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

/// Eigenvalues <= cutoff map to 0, the rest to lambda^{-1/2}.
inline Operator pinv_sqrt(const Operator& m, double cutoff) {
  const auto e = hermitian_eigen(m.matrix());
  const auto l = detail::clipped(e.values, tol::psd, ErrorKind::NotPSD);
  Eigen::VectorXd f(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) f(i) = l(i) <= cutoff ? 0.0 : 1.0 / std::sqrt(l(i));
  CMatrix out = detail::spectral_apply(e, f);
  out = (out + out.adjoint()) * 0.5;
  return Operator(m.shape(), std::move(out), true);
}

inline std::size_t numeric_rank(const Operator& m, double rel_threshold = tol::rank_rel) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(m.matrix()).cwiseAbs();
  if (ev.size() == 0) return 0;
  const double cut = rel_threshold * ev.maxCoeff();
  return static_cast<std::size_t>((ev.array() > cut).count());
}

/// Projector onto the eigenvectors counted by numeric_rank.
inline Operator support_projector(const Operator& m, double rel_threshold = tol::rank_rel) {
  const auto e = hermitian_eigen(m.matrix());
  const Eigen::VectorXd mag = e.values.cwiseAbs();
  const double cut = rel_threshold * (mag.size() ? mag.maxCoeff() : 0.0);
  Eigen::VectorXd f(mag.size());
  for (Eigen::Index i = 0; i < mag.size(); ++i) f(i) = mag(i) > cut ? 1.0 : 0.0;
  CMatrix p = detail::spectral_apply(e, f);
  p = (p + p.adjoint()) * 0.5;
  return Operator(m.shape(), std::move(p), true);
}

struct DensityCheck {
  double hermitian_defect = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok = false;
};

inline DensityCheck check_density(const Operator& rho) {
  DensityCheck c;
  c.hermitian_defect = max_hermitian_defect(rho.matrix());
  c.trace_error = std::abs(rho.trace() - 1.0);
  c.min_eigenvalue = hermitian_eigenvalues(rho.matrix()).minCoeff();
  c.ok = c.hermitian_defect <= tol::hermitian && c.trace_error <= tol::trace && c.min_eigenvalue >= -tol::psd;
  return c;
}

inline bool is_unitary(const CMatrix& u, double eps = 1e-10) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= eps;
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
inline CMatrix random_unitary(std::size_t dim, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = complex_normal(rng);
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
  }
  return q;
}

}  // namespace chs
