#pragma once

// Types (multisets over a basis alphabet), type states, the symmetric
// subspace and exact Haar moments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chs/combinatorics.hpp"
#include "chs/error.hpp"
#include "chs/limits.hpp"
#include "chs/numkit.hpp"
#include "chs/rng.hpp"

namespace chs {

class TypeVector {
 public:
  TypeVector() = default;
  explicit TypeVector(std::uint64_t alphabet_dim) : d_(alphabet_dim) {}

  /// Builds a type from a list of elements (repetitions allowed).
  static TypeVector from_elements(std::uint64_t alphabet_dim, const std::vector<std::uint64_t>& elems) {
    TypeVector t(alphabet_dim);
    for (auto e : elems) t.add(e);
    return t;
  }

  void add(std::uint64_t index, unsigned mult = 1) {
    require(index < d_, ErrorKind::ParameterError,
            "type index " + std::to_string(index) + " outside alphabet of size " + std::to_string(d_));
    if (mult == 0) return;
    counts_[index] += mult;
    total_ += mult;
  }

  std::uint64_t alphabet_dim() const { return d_; }
  std::size_t total() const { return total_; }
  const std::map<std::uint64_t, unsigned>& counts() const { return counts_; }
  unsigned count(std::uint64_t index) const {
    auto it = counts_.find(index);
    return it == counts_.end() ? 0u : it->second;
  }

  bool collision_free() const {
    return std::all_of(counts_.begin(), counts_.end(), [](const auto& kv) { return kv.second == 1; });
  }

  /// Elements in ascending order, repeated by multiplicity.
  std::vector<std::uint64_t> elements() const {
    std::vector<std::uint64_t> out;
    out.reserve(total_);
    for (const auto& [i, c] : counts_) out.insert(out.end(), c, i);
    return out;
  }

  /// Canonical order: lexicographic on the sorted (index, multiplicity) list.
  friend bool operator<(const TypeVector& a, const TypeVector& b) {
    return std::lexicographical_compare(a.counts_.begin(), a.counts_.end(), b.counts_.begin(), b.counts_.end());
  }
  friend bool operator==(const TypeVector& a, const TypeVector& b) {
    return a.d_ == b.d_ && a.counts_ == b.counts_;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [i, c] : counts_) {
      s += (first ? "" : ",") + std::to_string(i) + ":" + std::to_string(c);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint64_t d_ = 0;
  std::map<std::uint64_t, unsigned> counts_;
  std::size_t total_ = 0;
};

inline std::uint64_t type_count(std::uint64_t d, std::uint64_t t) { return binomial(d + t - 1, t); }

/// All C(d+t-1, t) types of size t over [0, d), in canonical order.
inline std::vector<TypeVector> enumerate_types(std::uint64_t d, std::size_t t) {
  require(d >= 1, ErrorKind::ParameterError, "alphabet must be nonempty");
  const std::uint64_t n = t == 0 ? 1 : type_count(d, t);
  require(n <= limits().max_enum, ErrorKind::EnumerationTooLarge,
          std::to_string(n) + " types exceed enumeration cap " + std::to_string(limits().max_enum));
  std::vector<TypeVector> out;
  out.reserve(n);
  // non-decreasing tuples are in bijection with types
  std::vector<std::uint64_t> tuple(t, 0);
  while (true) {
    out.push_back(TypeVector::from_elements(d, tuple));
    std::size_t i = t;
    while (i > 0 && tuple[i - 1] == d - 1) --i;
    if (i == 0) break;
    const std::uint64_t v = tuple[i - 1] + 1;
    for (std::size_t j = i - 1; j < t; ++j) tuple[j] = v;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Flat index of the tuple (v_0, ..., v_{t-1}) on t registers of dimension d.
inline std::size_t tuple_index(const std::vector<std::uint64_t>& v, std::uint64_t d) {
  std::size_t f = 0;
  for (auto x : v) f = f * d + x;
  return f;
}

inline RegisterShape copies_shape(std::uint64_t d, std::size_t t) { return RegisterShape::uniform(d, t); }

/// |T> = sqrt(prod T_i! / t!) * sum over arrangements of T.
inline StateVector type_state(const TypeVector& T) {
  const auto d = T.alphabet_dim();
  const auto shape = copies_shape(d, T.total());
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(shape.total()));
  double prod = 1.0;
  for (const auto& kv : T.counts()) prod *= factorial(kv.second);
  const double amp = std::sqrt(prod / factorial(static_cast<unsigned>(T.total())));
  auto v = T.elements();
  do {
    amps(static_cast<Eigen::Index>(tuple_index(v, d))) = amp;
  } while (std::next_permutation(v.begin(), v.end()));
  return StateVector(shape, std::move(amps));
}

/// (1/t!) sum over permutations pi of the register permutation operator P_pi.
/// Built from permutations alone, independently of type states.
inline Operator sym_projector(std::uint64_t d, std::size_t t) {
  const auto shape = copies_shape(d, t);
  const auto n = static_cast<Eigen::Index>(shape.total());
  CMatrix m = CMatrix::Zero(n, n);
  std::vector<std::size_t> perm(t);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const double w = 1.0 / factorial(static_cast<unsigned>(t));
  std::vector<std::uint64_t> digits(t), moved(t);
  do {
    for (Eigen::Index i = 0; i < n; ++i) {
      auto rem = static_cast<std::uint64_t>(i);
      for (std::size_t j = t; j-- > 0;) {
        digits[j] = rem % d;
        rem /= d;
      }
      for (std::size_t j = 0; j < t; ++j) moved[j] = digits[perm[j]];
      m(static_cast<Eigen::Index>(tuple_index(moved, d)), i) += w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Operator(shape, std::move(m), true);
}

/// E_theta |theta><theta|^{(x) t} = Pi_sym / C(d+t-1, t). t = 0 gives [1].
inline Operator haar_moment(std::uint64_t d, std::size_t t) {
  if (t == 0) return scalar_one();
  const Operator p = sym_projector(d, t);
  return (1.0 / binomial_real(static_cast<double>(d + t - 1), static_cast<double>(t))) * p;
}

/// Uniform average of type-state projectors; the right-hand side of the moment identity.
inline Operator type_average(std::uint64_t d, std::size_t t) {
  if (t == 0) return scalar_one();
  const auto types = enumerate_types(d, t);
  const auto shape = copies_shape(d, t);
  const auto n = static_cast<Eigen::Index>(shape.total());
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& T : types) {
    const auto s = type_state(T);
    m.noalias() += s.amplitudes() * s.amplitudes().adjoint();
  }
  m /= static_cast<double>(types.size());
  return Operator(shape, std::move(m), true);
}

inline StateVector sample_haar(std::uint64_t d, CounterRng& rng) {
  CVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal(rng);
  return StateVector::normalized(RegisterShape({static_cast<std::size_t>(d)}), std::move(v));
}

inline StateVector sample_haar(std::uint64_t d, std::uint64_t seed) {
  CounterRng rng(seed);
  return sample_haar(d, rng);
}

// ---------------------------------------------------------------------------
// Prefix collision-freeness

struct PrefixParams {
  unsigned n = 1;    // prefix bits
  unsigned m = 0;    // suffix bits
  unsigned ell = 1;  // fold
  unsigned t = 1;    // type size |T|

  std::uint64_t alphabet_dim() const { return std::uint64_t{1} << (n + m); }
  unsigned spectators() const { return t - ell; }

  void validate() const {
    require(n >= 1, ErrorKind::ParameterError, "prefix length n must be >= 1");
    require(ell >= 1 && ell <= t, ErrorKind::ParameterError, "need 1 <= ell <= t");
    require(n + m <= 62, ErrorKind::ParameterError, "n + m too large");
  }
};

/// Checks that distinct ell-index-subsets of the sorted element tuple of T have
/// distinct n-bit prefixes of their XOR. Subsets are taken over positions, so a
/// repeated element yields colliding subsets whenever |T| > ell.
inline bool is_l_fold_prefix_collision_free(const TypeVector& T, const PrefixParams& p) {
  p.validate();
  require(T.alphabet_dim() == p.alphabet_dim(), ErrorKind::ParameterError,
          "type alphabet does not match 2^(n+m)");
  require(T.total() == p.t, ErrorKind::ParameterError, "type size does not match t");
  const std::uint64_t subsets = binomial(p.t, p.ell);
  require(subsets <= limits().max_enum / std::max<std::uint64_t>(subsets, 1), ErrorKind::EnumerationTooLarge,
          "subset-pair enumeration exceeds cap");
  const auto elems = T.elements();
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(subsets);
  bool ok = true;
  for_each_combination(p.t, p.ell, [&](const std::vector<std::size_t>& idx) {
    if (!ok) return;
    std::uint64_t x = 0;
    for (auto i : idx) x ^= elems[i];
    if (!seen.insert(x >> p.m).second) ok = false;
  });
  return ok;
}

struct GoodTypeProbability {
  std::uint64_t good = 0;
  std::uint64_t total = 0;
  double exact = 0.0;
  double mc = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t trials = 0;
};

/// Exhaustive fraction of good types.
inline GoodTypeProbability prob_good_type_exact(const PrefixParams& p) {
  p.validate();
  GoodTypeProbability r;
  for (const auto& T : enumerate_types(p.alphabet_dim(), p.t)) {
    ++r.total;
    if (is_l_fold_prefix_collision_free(T, p)) ++r.good;
  }
  r.exact = static_cast<double>(r.good) / static_cast<double>(r.total);
  return r;
}

/// Uniform type of size t over [0, d): a uniform t-subset of [0, d+t-1)
/// (Floyd's algorithm) mapped through stars and bars.
inline TypeVector sample_uniform_type(std::uint64_t d, std::size_t t, CounterRng& rng) {
  const std::uint64_t N = d + t - 1;
  std::vector<std::uint64_t> chosen;
  chosen.reserve(t);
  for (std::uint64_t j = N - t; j < N; ++j) {
    const std::uint64_t r = uniform_below(rng, j + 1);
    if (std::find(chosen.begin(), chosen.end(), r) == chosen.end()) {
      chosen.push_back(r);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  TypeVector T(d);
  for (std::size_t i = 0; i < chosen.size(); ++i) T.add(chosen[i] - i);
  return T;
}

inline constexpr std::size_t kMcChunk = 4096;

inline void prob_good_type_mc(const PrefixParams& p, std::uint64_t trials, std::uint64_t seed, unsigned jobs,
                              GoodTypeProbability& r) {
  p.validate();
  const auto d = p.alphabet_dim();
  const auto hits = run_chunks(trials, kMcChunk, jobs, [&](std::size_t c, std::size_t b, std::size_t e) {
    CounterRng rng(seed, c);
    std::uint64_t h = 0;
    for (std::size_t i = b; i < e; ++i) h += is_l_fold_prefix_collision_free(sample_uniform_type(d, p.t, rng), p);
    return h;
  });
  const std::uint64_t total_hits = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  r.trials = trials;
  r.mc = trials ? static_cast<double>(total_hits) / static_cast<double>(trials) : 0.0;
  r.mc_stderr = trials ? std::sqrt(r.mc * (1.0 - r.mc) / static_cast<double>(trials)) : 0.0;
}

inline GoodTypeProbability prob_good_type(const PrefixParams& p, std::uint64_t trials, std::uint64_t seed,
                                          unsigned jobs = 1) {
  auto r = prob_good_type_exact(p);
  prob_good_type_mc(p, trials, seed, jobs, r);
  return r;
}

// ---------------------------------------------------------------------------
// Bipartition

struct Bipartition {
  std::vector<std::pair<TypeVector, TypeVector>> pairs;  // (X, T \ X)
  double coefficient = 1.0;
};

inline Bipartition type_bipartition(const TypeVector& T, std::size_t x) {
  require(T.collision_free(), ErrorKind::NotCollisionFree, "bipartition needs a collision-free type");
  require(x <= T.total(), ErrorKind::ParameterError, "x exceeds |T|");
  const auto elems = T.elements();
  Bipartition b;
  b.coefficient = 1.0 / std::sqrt(static_cast<double>(binomial(T.total(), x)));
  for_each_combination(T.total(), x, [&](const std::vector<std::size_t>& idx) {
    TypeVector X(T.alphabet_dim()), R(T.alphabet_dim());
    for (auto i : idx) X.add(elems[i]);
    for (auto i : complement(T.total(), idx)) R.add(elems[i]);
    b.pairs.emplace_back(std::move(X), std::move(R));
  });
  return b;
}

/// sum coeff |X> (x) |T\X>, the left-hand side of the bipartition identity.
inline CVector bipartition_vector(const Bipartition& b) {
  CVector acc;
  for (const auto& [X, R] : b.pairs) {
    const auto v = tensor(type_state(X), type_state(R));
    if (acc.size() == 0) acc = CVector::Zero(v.amplitudes().size());
    acc += b.coefficient * v.amplitudes();
  }
  return acc;
}

}  // namespace chs
