#pragma once

// Pauli-Z keyed generators applied to a common Haar state, their exact
// key-averaged density matrices, and the distinguishers built on them.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chs/combinatorics.hpp"
#include "chs/error.hpp"
#include "chs/limits.hpp"
#include "chs/numkit.hpp"
#include "chs/rng.hpp"
#include "chs/typespace.hpp"

namespace chs {

// ---------------------------------------------------------------------------
// Keys and inputs. Bit strings are stored as integers whose most significant
// bit is the first bit of the string.

struct PrsKey {
  unsigned lambda = 0;
  std::uint64_t bits = 0;
};

struct PrfsInput {
  unsigned m = 0;
  std::uint64_t bits = 0;

  bool bit(unsigned i) const { return (bits >> (m - 1 - i)) & 1u; }
  friend bool operator==(const PrfsInput&, const PrfsInput&) = default;
};

struct PrfsKey {
  unsigned lambda_prime = 0;
  unsigned m = 0;
  std::vector<std::uint64_t> blocks;  // k_1^0 .. k_m^0, k_1^1 .. k_m^1

  PrfsKey(unsigned lambda_prime_, unsigned m_, std::vector<std::uint64_t> blocks_)
      : lambda_prime(lambda_prime_), m(m_), blocks(std::move(blocks_)) {
    require(blocks.size() == 2 * static_cast<std::size_t>(m), ErrorKind::ParameterError, "PRFS key needs 2m blocks");
    for (auto b : blocks) {
      require(lambda_prime >= 64 || b < (std::uint64_t{1} << lambda_prime), ErrorKind::ParameterError,
              "PRFS key block longer than lambda'");
    }
  }

  /// The key with flat index `index` in [0, 2^(2 m lambda')), blocks in order.
  static PrfsKey from_index(unsigned lambda_prime, unsigned m, std::uint64_t index) {
    std::vector<std::uint64_t> b(2 * static_cast<std::size_t>(m));
    const std::uint64_t mask = (std::uint64_t{1} << lambda_prime) - 1;
    for (std::size_t i = b.size(); i-- > 0;) {
      b[i] = index & mask;
      index >>= lambda_prime;
    }
    return PrfsKey(lambda_prime, m, std::move(b));
  }

  std::uint64_t block(unsigned i, bool bit) const { return blocks[(bit ? m : 0) + i]; }

  /// XOR over i of k_i^{x_i}.
  std::uint64_t effective(const PrfsInput& x) const {
    require(x.m == m, ErrorKind::ShapeMismatch, "PRFS input length does not match key");
    std::uint64_t k = 0;
    for (unsigned i = 0; i < m; ++i) k ^= block(i, x.bit(i));
    return k;
  }
};

inline unsigned qubit_count(std::size_t dim) {
  require(dim >= 1 && std::has_single_bit(dim), ErrorKind::ShapeMismatch, "dimension is not a power of two");
  return static_cast<unsigned>(std::countr_zero(dim));
}

/// (-1)^{<key, first key_bits bits of y>} for a reg_bits-bit basis label y.
inline double z_sign(std::uint64_t key, unsigned key_bits, std::uint64_t y, unsigned reg_bits) {
  return (std::popcount(key & (y >> (reg_bits - key_bits))) & 1) ? -1.0 : 1.0;
}

/// G_k(|s>) = (Z^k (x) I_{n-lambda}) |s>.
inline StateVector prs_apply(const PrsKey& k, const StateVector& s) {
  const unsigned n = qubit_count(s.shape().total());
  require(n >= k.lambda, ErrorKind::ShapeMismatch, "state has fewer qubits than the key length");
  CVector out = s.amplitudes();
  for (Eigen::Index y = 0; y < out.size(); ++y) out(y) *= z_sign(k.bits, k.lambda, static_cast<std::uint64_t>(y), n);
  return StateVector(s.shape(), std::move(out));
}

inline StateVector prfs_apply(const PrfsKey& K, const PrfsInput& x, const StateVector& s) {
  return prs_apply(PrsKey{K.lambda_prime, K.effective(x)}, s);
}

// ---------------------------------------------------------------------------
// Key averaging. A Z-twirl acts on a register layout where every register is
// reg_bits qubits; registers assigned to block b receive Z^{key_b} on their
// first key_bits qubits, registers in block -1 are untouched. Because every
// U_key is diagonal with +-1 entries, E_key[U rho U^dag] = rho o W with
// W = E_key[s_key s_key^T].

struct ZTwirl {
  unsigned reg_bits = 1;
  unsigned key_bits = 0;
  std::vector<int> block_of_register;

  std::size_t blocks() const {
    int mx = -1;
    for (int b : block_of_register) mx = std::max(mx, b);
    return static_cast<std::size_t>(mx + 1);
  }
  RegisterShape shape() const {
    return RegisterShape::uniform(std::size_t{1} << reg_bits, block_of_register.size());
  }

  /// Per-block XOR of key-prefixes of the registers of flat basis index a.
  std::vector<std::uint64_t> block_prefixes(std::size_t a) const {
    std::vector<std::uint64_t> x(blocks(), 0);
    const std::uint64_t mask = (std::uint64_t{1} << reg_bits) - 1;
    for (std::size_t r = block_of_register.size(); r-- > 0;) {
      const std::uint64_t digit = a & mask;
      a >>= reg_bits;
      const int b = block_of_register[r];
      if (b >= 0) x[static_cast<std::size_t>(b)] ^= digit >> (reg_bits - key_bits);
    }
    return x;
  }

  static double sign(const std::vector<std::uint64_t>& keys, const std::vector<std::uint64_t>& prefixes) {
    int parity = 0;
    for (std::size_t b = 0; b < keys.size(); ++b) parity ^= std::popcount(keys[b] & prefixes[b]) & 1;
    return parity ? -1.0 : 1.0;
  }
};

/// Source of per-block effective keys; `count` keys, the i-th given by keys(i).
struct KeySource {
  std::size_t count = 0;
  std::function<std::vector<std::uint64_t>(std::size_t)> keys;
  bool sampled = false;
};

/// Every block receives an independent uniform key_bits-bit key.
inline KeySource independent_keys(std::size_t blocks, unsigned key_bits) {
  const std::size_t per = std::size_t{1} << key_bits;
  const std::uint64_t total = checked_pow(per, static_cast<unsigned>(blocks));
  require(total <= limits().max_enum, ErrorKind::EnumerationTooLarge, "key space exceeds enumeration cap");
  KeySource src;
  src.count = static_cast<std::size_t>(total);
  src.keys = [blocks, per](std::size_t idx) {
    std::vector<std::uint64_t> k(blocks);
    for (std::size_t b = blocks; b-- > 0;) {
      k[b] = idx % per;
      idx /= per;
    }
    return k;
  };
  return src;
}

inline CMatrix twirl_weights(const ZTwirl& tw, const KeySource& src) {
  const auto dim = static_cast<Eigen::Index>(tw.shape().total());
  std::vector<std::vector<std::uint64_t>> prefixes(static_cast<std::size_t>(dim));
  for (Eigen::Index a = 0; a < dim; ++a) prefixes[static_cast<std::size_t>(a)] = tw.block_prefixes(static_cast<std::size_t>(a));
  Eigen::MatrixXd signs(dim, static_cast<Eigen::Index>(src.count));
  for (std::size_t k = 0; k < src.count; ++k) {
    const auto key = src.keys(k);
    for (Eigen::Index a = 0; a < dim; ++a) signs(a, static_cast<Eigen::Index>(k)) = ZTwirl::sign(key, prefixes[static_cast<std::size_t>(a)]);
  }
  const Eigen::MatrixXd w = signs * signs.transpose() / static_cast<double>(src.count);
  return w.cast<cplx>();
}

inline Operator twirl(const Operator& rho, const ZTwirl& tw, const KeySource& src) {
  require(rho.shape() == tw.shape(), ErrorKind::ShapeMismatch, "twirl layout does not match operator shape");
  CMatrix out = rho.matrix().cwiseProduct(twirl_weights(tw, src));
  return Operator(rho.shape(), std::move(out), rho.hermitian());
}

/// E_key of the single coefficient s_key(row) s_key(col); the full average of a
/// matrix unit |row><col| is this value times the same matrix unit.
inline double twirl_entry(const ZTwirl& tw, const KeySource& src, std::size_t row, std::size_t col) {
  const auto pr = tw.block_prefixes(row), pc = tw.block_prefixes(col);
  double acc = 0.0;
  for (std::size_t k = 0; k < src.count; ++k) {
    const auto key = src.keys(k);
    acc += ZTwirl::sign(key, pr) * ZTwirl::sign(key, pc);
  }
  return acc / static_cast<double>(src.count);
}

// ---------------------------------------------------------------------------
// Disentangling lemmas

struct PermSplitResult {
  double value = 0.0;     // coefficient of |v><sigma(v)| in the key average
  double expected = 0.0;  // 1 if sigma maps [ell] to [ell], else 0
  bool maps_ell = false;
  double discrepancy = 0.0;
  bool ok = false;
};

inline bool maps_prefix_to_itself(const std::vector<std::size_t>& sigma, unsigned ell) {
  for (unsigned i = 0; i < ell; ++i) {
    if (sigma[i] >= ell) return false;
  }
  return true;
}

/// A_{v,sigma} = E_k[(Z^k (x) I)^{ell} (x) I^{t-ell} |v><sigma(v)| (...)^dag] over all
/// 2^n keys, with sigma(v)_i = v_{sigma(i)}.
inline PermSplitResult check_perm_split(const std::vector<std::uint64_t>& v, const std::vector<std::size_t>& sigma,
                                        const PrefixParams& p) {
  p.validate();
  require(v.size() == p.t && sigma.size() == p.t, ErrorKind::ParameterError, "v and sigma must have length t");
  std::vector<std::size_t> check(sigma);
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i) require(check[i] == i, ErrorKind::ParameterError, "sigma is not a permutation");
  const auto T = TypeVector::from_elements(p.alphabet_dim(), v);
  require(is_l_fold_prefix_collision_free(T, p), ErrorKind::PreconditionViolated,
          "type of v is not ell-fold prefix collision-free");
  std::vector<std::uint64_t> sv(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sv[i] = v[sigma[i]];

  ZTwirl tw{p.n + p.m, p.n, std::vector<int>(p.t, -1)};
  for (unsigned i = 0; i < p.ell; ++i) tw.block_of_register[i] = 0;
  PermSplitResult r;
  r.value = twirl_entry(tw, independent_keys(1, p.n), tuple_index(v, p.alphabet_dim()), tuple_index(sv, p.alphabet_dim()));
  r.maps_ell = maps_prefix_to_itself(sigma, p.ell);
  r.expected = r.maps_ell ? 1.0 : 0.0;
  r.discrepancy = std::abs(r.value - r.expected);
  r.ok = r.discrepancy < 1e-12;
  return r;
}

struct LemmaCheck {
  double discrepancy = 0.0;
  std::size_t keys = 0;
  std::uint64_t key_space = 0;
  bool sampled = false;
};

namespace detail {
inline Operator type_projector(const TypeVector& T) { return Operator::projector(type_state(T)); }

inline TypeVector sub_type(std::uint64_t d, const std::vector<std::uint64_t>& elems, const std::vector<std::size_t>& idx) {
  TypeVector out(d);
  for (auto i : idx) out.add(elems[i]);
  return out;
}

/// Recursive subset mixture: for each block in turn a uniform subset of the
/// given size is drawn from the remaining positions; the leftover forms the
/// final factor.
inline void subset_mixture(std::uint64_t d, const std::vector<std::uint64_t>& elems,
                           const std::vector<std::size_t>& remaining, const std::vector<unsigned>& sizes,
                           std::size_t level, double weight, const Operator& prefix, CMatrix& acc) {
  if (level == sizes.size()) {
    const auto rest = type_projector(sub_type(d, elems, remaining));
    const Operator full = tensor(prefix, rest);
    if (acc.size() == 0) acc = CMatrix::Zero(full.matrix().rows(), full.matrix().cols());
    acc += weight * full.matrix();
    return;
  }
  const double w = weight / static_cast<double>(binomial(remaining.size(), sizes[level]));
  for_each_combination(remaining.size(), sizes[level], [&](const std::vector<std::size_t>& pick) {
    std::vector<std::size_t> chosen, left;
    for (auto i : pick) chosen.push_back(remaining[i]);
    for (auto i : complement(remaining.size(), pick)) left.push_back(remaining[i]);
    subset_mixture(d, elems, left, sizes, level + 1, w, tensor(prefix, type_projector(sub_type(d, elems, chosen))), acc);
  });
}
}  // namespace detail

/// Compares E_k[(Z^k (x) I)^{ell} (x) I |T><T| (...)] against
/// E_{X subset T, |X| = ell} |X><X| (x) |T\X><T\X|.
inline LemmaCheck lemma_nice_T_check(const TypeVector& T, const PrefixParams& p) {
  p.validate();
  require(is_l_fold_prefix_collision_free(T, p), ErrorKind::PreconditionViolated,
          "type is not ell-fold prefix collision-free");
  ZTwirl tw{p.n + p.m, p.n, std::vector<int>(p.t, -1)};
  for (unsigned i = 0; i < p.ell; ++i) tw.block_of_register[i] = 0;
  const auto src = independent_keys(1, p.n);
  const Operator lhs = twirl(detail::type_projector(T), tw, src);

  const auto elems = T.elements();
  std::vector<std::size_t> all(elems.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  CMatrix rhs;
  detail::subset_mixture(T.alphabet_dim(), elems, all, {p.ell}, 0, 1.0, scalar_one(), rhs);

  LemmaCheck r;
  r.discrepancy = (lhs.matrix() - rhs).cwiseAbs().maxCoeff();
  r.keys = src.count;
  r.key_space = src.count;
  return r;
}

/// Keys for PRFS evaluation on a list of queries: full enumeration of the
/// 2^(2 m lambda') keys when within the cap, otherwise `samples` uniform keys.
inline KeySource prfs_keys(unsigned lambda_prime, unsigned m, const std::vector<PrfsInput>& queries,
                           std::uint64_t samples, std::uint64_t seed) {
  const unsigned bits = 2 * m * lambda_prime;
  require(bits < 63, ErrorKind::ParameterError, "PRFS key too long");
  const std::uint64_t space = std::uint64_t{1} << bits;
  KeySource src;
  auto eval = [=](std::uint64_t index) {
    const auto K = PrfsKey::from_index(lambda_prime, m, index);
    std::vector<std::uint64_t> k;
    k.reserve(queries.size());
    for (const auto& x : queries) k.push_back(K.effective(x));
    return k;
  };
  if (space <= limits().max_enum) {
    src.count = static_cast<std::size_t>(space);
    src.keys = [eval](std::size_t i) { return eval(i); };
  } else {
    require(samples >= 1 && samples <= limits().max_enum, ErrorKind::EnumerationTooLarge,
            "key sample count must be in [1, enumeration cap]");
    std::vector<std::uint64_t> drawn(samples);
    CounterRng rng(seed, 0x6b6579);
    for (auto& k : drawn) k = uniform_below(rng, space);
    src.count = static_cast<std::size_t>(samples);
    src.keys = [eval, drawn](std::size_t i) { return eval(drawn[i]); };
    src.sampled = true;
  }
  return src;
}

inline void require_distinct(const std::vector<PrfsInput>& queries) {
  for (std::size_t i = 0; i < queries.size(); ++i)
    for (std::size_t j = i + 1; j < queries.size(); ++j)
      require(!(queries[i] == queries[j]), ErrorKind::PreconditionViolated, "queries must be pairwise distinct");
}

/// Compares E_K[(x)_i G_K(x^i)^{ell_i} (x) I |T><T|] against the recursive
/// subset mixture. p.n is lambda' (key prefix), p.m the remaining state bits.
inline LemmaCheck lemma_prfs_type_check(const TypeVector& T, const std::vector<PrfsInput>& queries,
                                        const std::vector<unsigned>& ells, const PrefixParams& p,
                                        std::uint64_t key_samples = 4096, std::uint64_t seed = 0) {
  p.validate();
  require(!queries.empty() && queries.size() == ells.size(), ErrorKind::ParameterError,
          "one multiplicity per query required");
  const unsigned m_in = queries.front().m;
  for (const auto& x : queries) require(x.m == m_in, ErrorKind::ParameterError, "queries differ in length");
  require_distinct(queries);
  unsigned ell = 0;
  for (auto l : ells) ell += l;
  require(ell == p.ell, ErrorKind::ParameterError, "multiplicities must sum to ell");
  require(is_l_fold_prefix_collision_free(T, p), ErrorKind::PreconditionViolated,
          "type is not ell-fold prefix collision-free");
  if (queries.size() > 1) {
    require(is_l_fold_prefix_collision_free(T, PrefixParams{p.n, p.m, 1, p.t}), ErrorKind::PreconditionViolated,
            "type has repeated key prefixes");
  }

  ZTwirl tw{p.n + p.m, p.n, std::vector<int>(p.t, -1)};
  std::size_t r = 0;
  for (std::size_t q = 0; q < ells.size(); ++q)
    for (unsigned j = 0; j < ells[q]; ++j) tw.block_of_register[r++] = static_cast<int>(q);
  const auto src = prfs_keys(p.n, m_in, queries, key_samples, seed);
  const Operator lhs = twirl(detail::type_projector(T), tw, src);

  const auto elems = T.elements();
  std::vector<std::size_t> all(elems.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  CMatrix rhs;
  detail::subset_mixture(T.alphabet_dim(), elems, all, ells, 0, 1.0, scalar_one(), rhs);

  LemmaCheck out;
  out.discrepancy = (lhs.matrix() - rhs).cwiseAbs().maxCoeff();
  out.keys = src.count;
  out.key_space = std::uint64_t{1} << (2 * m_in * p.n);
  out.sampled = src.sampled;
  return out;
}

// ---------------------------------------------------------------------------
// Hybrids

struct PseudoParams {
  unsigned lambda = 1;
  unsigned n = 1;
  unsigned m = 1;  // PRFS input length
  unsigned t = 0;
  unsigned ell = 1;
  std::vector<unsigned> ells;  // per-query multiplicities, sum = ell
  std::uint64_t key_samples = 4096;
  std::uint64_t seed = 0;

  void validate_prs() const {
    require(n >= lambda, ErrorKind::ParameterError, "need n >= lambda");
    require(n <= 20, ErrorKind::ParameterError, "n too large");
  }
};

struct HybridResult {
  Operator real;   // key-averaged generator outputs (x) CHS copies
  Operator ideal;  // independent Haar states (x) CHS copies
  double td = 0.0;
  double bound = 0.0;
  std::size_t keys = 0;
  bool sampled = false;
};

inline ZTwirl copies_twirl(unsigned n, unsigned key_bits, const std::vector<unsigned>& block_sizes, unsigned spectators) {
  ZTwirl tw{n, key_bits, {}};
  for (std::size_t b = 0; b < block_sizes.size(); ++b)
    tw.block_of_register.insert(tw.block_of_register.end(), block_sizes[b], static_cast<int>(b));
  tw.block_of_register.insert(tw.block_of_register.end(), spectators, -1);
  return tw;
}

/// rho = E_k[U_k M_{ell+t} U_k^dag], U_k = (Z^k (x) I)^{ell} (x) I^{t};
/// sigma = M_ell (x) M_t, with M_j the j-th Haar moment.
inline HybridResult prs_hybrids(const PseudoParams& p) {
  p.validate_prs();
  const std::uint64_t d = std::uint64_t{1} << p.n;
  const Operator moment = haar_moment(d, p.ell + p.t);
  HybridResult r{moment, tensor(haar_moment(d, p.ell), haar_moment(d, p.t))};
  if (p.ell > 0) {
    const auto src = independent_keys(1, p.lambda);
    r.real = twirl(moment, copies_twirl(p.n, p.lambda, {p.ell}, p.t), src);
    r.keys = src.count;
  }
  r.td = trace_distance(r.real, r.ideal);
  r.bound = std::pow(static_cast<double>(p.ell + p.t), 2.0 * p.ell) / std::ldexp(1.0, static_cast<int>(p.lambda));
  return r;
}

/// p independent keys, each used for ell copies, followed by t CHS copies.
inline HybridResult prs_multikey_hybrids(const PseudoParams& p, unsigned keys) {
  p.validate_prs();
  require(keys >= 1, ErrorKind::ParameterError, "need at least one key");
  const std::uint64_t d = std::uint64_t{1} << p.n;
  const Operator moment = haar_moment(d, keys * p.ell + p.t);
  Operator ideal = scalar_one();
  for (unsigned i = 0; i < keys; ++i) ideal = tensor(ideal, haar_moment(d, p.ell));
  ideal = tensor(ideal, haar_moment(d, p.t));
  HybridResult r{moment, ideal};
  if (p.ell > 0) {
    const auto src = independent_keys(keys, p.lambda);
    r.real = twirl(moment, copies_twirl(p.n, p.lambda, std::vector<unsigned>(keys, p.ell), p.t), src);
    r.keys = src.count;
  }
  r.td = trace_distance(r.real, r.ideal);
  r.bound = keys * std::pow(static_cast<double>(keys * p.ell + p.t), 2.0 * p.ell) /
            std::ldexp(1.0, static_cast<int>(p.lambda));
  return r;
}

/// Query i contributes ells[i] generator copies (in query order), then t CHS
/// copies. Equal queries share one independent Haar state on the ideal side.
inline HybridResult prfs_hybrids(const PseudoParams& p, const std::vector<PrfsInput>& queries) {
  require(p.n >= p.lambda, ErrorKind::ParameterError, "need n >= lambda'");
  require(queries.size() == p.ells.size(), ErrorKind::ParameterError, "one multiplicity per query required");
  const std::uint64_t d = std::uint64_t{1} << p.n;
  unsigned ell = 0;
  for (auto l : p.ells) ell += l;

  // group equal queries: distinct[g] with total multiplicity, register owner per slot
  std::vector<PrfsInput> distinct;
  std::vector<unsigned> group_size;
  std::vector<std::size_t> reg_group;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    std::size_t g = 0;
    while (g < distinct.size() && !(distinct[g] == queries[i])) ++g;
    if (g == distinct.size()) {
      distinct.push_back(queries[i]);
      group_size.push_back(0);
    }
    group_size[g] += p.ells[i];
    reg_group.insert(reg_group.end(), p.ells[i], g);
  }

  const Operator moment = haar_moment(d, ell + p.t);
  HybridResult r{moment, moment};

  // ideal: groups laid out contiguously, then permuted into query layout
  Operator grouped = scalar_one();
  for (auto s : group_size) grouped = tensor(grouped, haar_moment(d, s));
  grouped = tensor(grouped, haar_moment(d, p.t));
  std::vector<std::size_t> group_start(group_size.size(), 0);
  for (std::size_t g = 1; g < group_size.size(); ++g) group_start[g] = group_start[g - 1] + group_size[g - 1];
  std::vector<std::size_t> perm;
  std::vector<std::size_t> used(group_size.size(), 0);
  for (auto g : reg_group) perm.push_back(group_start[g] + used[g]++);
  for (unsigned j = 0; j < p.t; ++j) perm.push_back(ell + j);
  r.ideal = permute_registers(grouped, perm);

  if (ell > 0) {
    ZTwirl tw{p.n, p.lambda, {}};
    for (auto g : reg_group) tw.block_of_register.push_back(static_cast<int>(g));
    tw.block_of_register.insert(tw.block_of_register.end(), p.t, -1);
    const auto src = prfs_keys(p.lambda, p.m, distinct, p.key_samples, p.seed);
    r.real = twirl(moment, tw, src);
    r.keys = src.count;
    r.sampled = src.sampled;
  }
  r.td = trace_distance(r.real, r.ideal);
  r.bound = std::pow(static_cast<double>(ell + p.t), 2.0 * ell) / std::ldexp(1.0, static_cast<int>(p.lambda));
  return r;
}

// ---------------------------------------------------------------------------
// Rank attack

/// A keyed family of unitaries on one n-qubit register.
struct GeneratorFamily {
  std::size_t keys = 0;
  std::function<CMatrix(std::size_t)> unitary;
};

inline GeneratorFamily prs_family(unsigned lambda, unsigned n) {
  GeneratorFamily f;
  f.keys = std::size_t{1} << lambda;
  f.unitary = [lambda, n](std::size_t k) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    CMatrix u = CMatrix::Zero(dim, dim);
    for (Eigen::Index y = 0; y < dim; ++y) u(y, y) = z_sign(k, lambda, static_cast<std::uint64_t>(y), n);
    return u;
  };
  return f;
}

struct RankAttackResult {
  std::size_t rank0 = 0;
  std::size_t rank1 = 0;
  double accept_pseudo = 0.0;  // Tr(Pi rho_0)
  double accept_haar = 0.0;    // Tr(Pi rho_1)
  double ratio_bound = 0.0;    // 2^lambda / C(ell+t, ell) * prod (1 + t/(2^n+i))
  double rank0_bound = 0.0;    // 2^lambda * C(2^n+ell+t-1, ell+t)
  std::uint64_t rank1_formula = 0;
};

/// rho_0 = E_k E_theta[G_k(theta)^{ell} (x) theta^{t}], rho_1 = M_ell (x) M_t,
/// Pi = support projector of rho_0.
inline RankAttackResult rank_attack(const PseudoParams& p, const GeneratorFamily& family) {
  p.validate_prs();
  const std::uint64_t d = std::uint64_t{1} << p.n;
  const Operator moment = haar_moment(d, p.ell + p.t);
  const RegisterShape shape = moment.shape();
  const auto dim = static_cast<Eigen::Index>(shape.total());
  CMatrix rho0 = CMatrix::Zero(dim, dim);
  const CMatrix spect = CMatrix::Identity(static_cast<Eigen::Index>(checked_pow(d, p.t)),
                                          static_cast<Eigen::Index>(checked_pow(d, p.t)));
  for (std::size_t k = 0; k < family.keys; ++k) {
    const CMatrix g = family.unitary(k);
    require(is_unitary(g), ErrorKind::NotUnitary, "generator family member is not unitary");
    CMatrix u = CMatrix::Ones(1, 1);
    for (unsigned j = 0; j < p.ell; ++j) u = Eigen::kroneckerProduct(u, g).eval();
    u = Eigen::kroneckerProduct(u, spect).eval();
    rho0 += u * moment.matrix() * u.adjoint();
  }
  rho0 /= static_cast<double>(family.keys);
  rho0 = (rho0 + rho0.adjoint()) * 0.5;
  const Operator r0(shape, rho0, true);
  const Operator r1 = tensor(haar_moment(d, p.ell), haar_moment(d, p.t));
  const Operator pi = support_projector(r0);

  RankAttackResult r;
  r.rank0 = numeric_rank(r0);
  r.rank1 = numeric_rank(r1);
  r.accept_pseudo = (pi.matrix() * r0.matrix()).trace().real();
  r.accept_haar = (pi.matrix() * r1.matrix()).trace().real();
  double prod = 1.0;
  for (unsigned i = 0; i < p.ell; ++i) prod *= 1.0 + static_cast<double>(p.t) / static_cast<double>(d + i);
  r.ratio_bound = std::ldexp(1.0, static_cast<int>(p.lambda)) / static_cast<double>(binomial(p.ell + p.t, p.ell)) * prod;
  r.rank0_bound = std::ldexp(1.0, static_cast<int>(p.lambda)) * static_cast<double>(binomial(d + p.ell + p.t - 1, p.ell + p.t));
  r.rank1_formula = binomial(d + p.ell - 1, p.ell) * binomial(d + p.t - 1, p.t);
  return r;
}

inline RankAttackResult rank_attack(const PseudoParams& p) { return rank_attack(p, prs_family(p.lambda, p.n)); }

// ---------------------------------------------------------------------------
// One-wayness quantity

struct OnewaynessResult {
  double value = 0.0;
  double bound = 0.0;
};

/// E_x Tr(rho_x S rho_x S) with rho_x = (Z^x (x) I^m) M_{m+1} (Z^x (x) I^m),
/// S = pinv_sqrt(sum_x rho_x), x ranging over all n-bit strings.
inline OnewaynessResult onewayness_quantity(unsigned n, unsigned m) {
  require(n >= 1 && n <= 20, ErrorKind::ParameterError, "n out of range");
  const std::uint64_t d = std::uint64_t{1} << n;
  const Operator moment = haar_moment(d, m + 1);
  const ZTwirl layout = copies_twirl(n, n, {1}, m);
  const auto dim = static_cast<Eigen::Index>(moment.dim());
  std::vector<Eigen::VectorXd> signs;
  CMatrix sigma = CMatrix::Zero(dim, dim);
  std::vector<CMatrix> rhos;
  for (std::uint64_t x = 0; x < d; ++x) {
    Eigen::VectorXd s(dim);
    for (Eigen::Index a = 0; a < dim; ++a) s(a) = ZTwirl::sign({x}, layout.block_prefixes(static_cast<std::size_t>(a)));
    const CMatrix w = (s * s.transpose()).cast<cplx>();
    rhos.push_back(moment.matrix().cwiseProduct(w));
    sigma += rhos.back();
  }
  const Operator S = pinv_sqrt(Operator(moment.shape(), (sigma + sigma.adjoint()) * 0.5, true), 1e-10);
  double acc = 0.0;
  for (const auto& rx : rhos) acc += (rx * S.matrix() * rx * S.matrix()).trace().real();
  return {acc / static_cast<double>(d), static_cast<double>(m + 1) / static_cast<double>(d)};
}

}  // namespace chs
