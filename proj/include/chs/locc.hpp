#pragma once

// Two-party distinguishability of t copies of one Haar state versus t copies
// each of two independent Haar states: the collision distinguisher, the
// partial-transpose relaxation in the subset basis, and Kneser-graph spectra.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chs/combinatorics.hpp"
#include "chs/error.hpp"
#include "chs/limits.hpp"
#include "chs/numkit.hpp"
#include "chs/rng.hpp"
#include "chs/typespace.hpp"

namespace chs {

// ---------------------------------------------------------------------------
// Kneser graphs

struct KneserParams {
  std::uint64_t v = 2;
  std::uint64_t k = 1;
};

inline std::size_t subset_count_checked(std::uint64_t v, std::uint64_t k) {
  const std::uint64_t n = binomial(v, k);
  require(n <= limits().max_enum, ErrorKind::EnumerationTooLarge, "subset enumeration exceeds cap");
  return static_cast<std::size_t>(n);
}

namespace detail {
inline std::vector<std::uint64_t> subset_masks(std::size_t v, std::size_t k) {
  std::vector<std::uint64_t> masks;
  for_each_combination(v, k, [&](const std::vector<std::size_t>& c) {
    std::uint64_t m = 0;
    for (auto i : c) m |= std::uint64_t{1} << i;
    masks.push_back(m);
  });
  return masks;
}
}  // namespace detail

/// Adjacency of K(v, k): k-subsets of [v], adjacent iff disjoint.
inline Operator kneser_adjacency(std::uint64_t v, std::uint64_t k) {
  require(k >= 1 && v >= 2 * k, ErrorKind::ParameterError, "Kneser graph needs k >= 1 and v >= 2k");
  const std::size_t n = subset_count_checked(v, k);
  require(n <= limits().max_dim, ErrorKind::DimensionOverflow, "Kneser graph too large for a dense matrix");
  const auto subsets = combinations(static_cast<std::size_t>(v), static_cast<std::size_t>(k));
  auto disjoint = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return false;
      (a[i] < b[j]) ? ++i : ++j;
    }
    return true;
  };
  CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (disjoint(subsets[i], subsets[j]))
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  return Operator(RegisterShape({n}), std::move(a), true);
}

/// 2^k (v-1)(v-3)...(v-2k+1) / k!
inline double kneser_norm_formula(std::uint64_t v, std::uint64_t k) {
  double r = std::ldexp(1.0, static_cast<int>(k));
  for (std::uint64_t j = 1; j <= k; ++j) r *= static_cast<double>(v) - static_cast<double>(2 * j - 1);
  return r / factorial(static_cast<unsigned>(k));
}

struct KneserNorm {
  double exact = 0.0;
  double formula = 0.0;
};

inline KneserNorm kneser_one_norm(std::uint64_t v, std::uint64_t k) {
  return {trace_norm(kneser_adjacency(v, k)), kneser_norm_formula(v, k)};
}

inline Operator kneser_adjacency(const KneserParams& kp) { return kneser_adjacency(kp.v, kp.k); }
inline KneserNorm kneser_one_norm(const KneserParams& kp) { return kneser_one_norm(kp.v, kp.k); }

// ---------------------------------------------------------------------------
// Collision distinguisher

/// C(d,t) C(d-t,t) / C(d+t-1,t)^2 - C(d,2t) / C(d+2t-1,2t), exactly.
inline boost::multiprecision::cpp_rational locc_advantage_rational(std::uint64_t d, std::uint64_t t) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  require(d >= 2 * t, ErrorKind::ParameterError, "need d >= 2t");
  require(d >= 1, ErrorKind::ParameterError, "need d >= 1");
  auto C = [](std::uint64_t n, std::uint64_t k) {
    if (k > n) return cpp_int(0);
    cpp_int r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  const cpp_int den1 = C(d + t - 1, t);
  const cpp_rational indep(C(d, t) * C(d - t, t), den1 * den1);
  const cpp_rational ident(C(d, 2 * t), C(d + 2 * t - 1, 2 * t));
  return indep - ident;
}

inline double locc_advantage_closed_form(std::uint64_t d, std::uint64_t t) {
  return static_cast<double>(locc_advantage_rational(d, t));
}

enum class SamplerMode { Urn, Materialized };

struct LoccParams {
  std::uint64_t d = 4;
  std::uint64_t t = 1;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  SamplerMode mode = SamplerMode::Urn;
};

struct LoccEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double p_no_collision_identical = 0.0;
  double p_no_collision_independent = 0.0;
  std::uint64_t trials = 0;
};

/// Computational-basis outcomes of `count` copies of one Haar state on C^d.
/// Marginalizing the state gives the Polya urn: the next outcome is i with
/// probability (1 + c_i)/(d + k) after k draws with counts c. A uniform draw
/// below d + k either picks a fresh label or repeats an earlier outcome.
inline void urn_outcomes(std::uint64_t d, std::size_t count, CounterRng& rng, std::vector<std::uint64_t>& out) {
  out.clear();
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t u = uniform_below(rng, d + k);
    out.push_back(u < d ? u : out[static_cast<std::size_t>(u - d)]);
  }
}

/// The same law obtained by sampling explicit Haar amplitudes.
inline void materialized_outcomes(std::uint64_t d, std::size_t count, CounterRng& rng, std::vector<std::uint64_t>& out) {
  std::vector<double> cdf(static_cast<std::size_t>(d));
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    acc += std::norm(complex_normal(rng));
    cdf[i] = acc;
  }
  out.clear();
  for (std::size_t k = 0; k < count; ++k) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
  }
}

inline bool all_distinct(std::vector<std::uint64_t>& v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

inline constexpr std::size_t kLoccChunk = 8192;

/// Distinguisher: measure every copy in the computational basis and output 1
/// when the 2t outcomes are pairwise distinct. Estimates
/// Pr[1 | independent] - Pr[1 | identical].
inline LoccEstimate locc_advantage_mc(const LoccParams& lp, unsigned jobs = 1) {
  require(lp.trials >= 1, ErrorKind::ParameterError, "need at least one trial");
  require(lp.d >= 1, ErrorKind::ParameterError, "need d >= 1");
  struct Counts {
    std::uint64_t ident = 0, indep = 0;
  };
  const auto chunks = run_chunks(lp.trials, kLoccChunk, jobs, [&](std::size_t c, std::size_t b, std::size_t e) {
    CounterRng rng(lp.seed, c);
    Counts cnt;
    std::vector<std::uint64_t> all, part;
    const auto t = static_cast<std::size_t>(lp.t);
    auto draw = [&](std::size_t count, std::vector<std::uint64_t>& out) {
      if (lp.mode == SamplerMode::Urn) {
        urn_outcomes(lp.d, count, rng, out);
      } else {
        materialized_outcomes(lp.d, count, rng, out);
      }
    };
    for (std::size_t i = b; i < e; ++i) {
      draw(2 * t, all);
      cnt.ident += all_distinct(all);
      draw(t, all);
      draw(t, part);
      all.insert(all.end(), part.begin(), part.end());
      cnt.indep += all_distinct(all);
    }
    return cnt;
  });
  Counts tot;
  for (const auto& c : chunks) {
    tot.ident += c.ident;
    tot.indep += c.indep;
  }
  LoccEstimate r;
  const double n = static_cast<double>(lp.trials);
  r.trials = lp.trials;
  r.p_no_collision_identical = static_cast<double>(tot.ident) / n;
  r.p_no_collision_independent = static_cast<double>(tot.indep) / n;
  r.estimate = r.p_no_collision_independent - r.p_no_collision_identical;
  const double vi = r.p_no_collision_identical * (1.0 - r.p_no_collision_identical);
  const double vn = r.p_no_collision_independent * (1.0 - r.p_no_collision_independent);
  r.stderr_ = std::sqrt((vi + vn) / n);
  return r;
}

// ---------------------------------------------------------------------------
// Partial-transpose relaxation

/// Collision-free surrogates in the t-subset basis of each party: rho~ is the
/// average of |T><T| over 2t-subsets T, sigma~ the average of |S_A><S_A| (x)
/// |S_B><S_B| over disjoint t-subsets. Basis index of a party is the
/// lexicographic rank of its subset.
struct SubsetBasisStates {
  Operator rho;
  Operator sigma;
  std::vector<std::uint64_t> subsets;  // bit masks
};

inline SubsetBasisStates subset_basis_states(std::uint64_t d, std::uint64_t t) {
  require(t >= 1 && d > 2 * t, ErrorKind::ParameterError, "need t >= 1 and d > 2t");
  require(d <= 63, ErrorKind::ParameterError, "d too large");
  const std::size_t n = subset_count_checked(d, t);
  require(n <= limits().max_enum / n, ErrorKind::EnumerationTooLarge, "subset-pair basis exceeds cap");
  const RegisterShape shape({n, n});
  require(shape.total() <= limits().max_dim, ErrorKind::DimensionOverflow, "subset-pair basis exceeds dimension cap");
  const auto masks = detail::subset_masks(static_cast<std::size_t>(d), static_cast<std::size_t>(t));
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[masks[i]] = i;
  const double c = 1.0 / (static_cast<double>(binomial(d, 2 * t)) * static_cast<double>(binomial(2 * t, t)));
  const auto N = static_cast<Eigen::Index>(shape.total());
  CMatrix rho = CMatrix::Zero(N, N), sigma = CMatrix::Zero(N, N);
  // |T> = C(2t,t)^{-1/2} sum_X |T\X>_A |X>_B
  for_each_combination(static_cast<std::size_t>(d), static_cast<std::size_t>(2 * t), [&](const std::vector<std::size_t>& T) {
    std::uint64_t tm = 0;
    for (auto i : T) tm |= std::uint64_t{1} << i;
    std::vector<Eigen::Index> rows;
    for_each_combination(T.size(), static_cast<std::size_t>(t), [&](const std::vector<std::size_t>& pick) {
      std::uint64_t xm = 0;
      for (auto i : pick) xm |= std::uint64_t{1} << T[i];
      rows.push_back(static_cast<Eigen::Index>(index.at(tm & ~xm) * n + index.at(xm)));
    });
    for (auto r : rows)
      for (auto s : rows) rho(r, s) += c;
  });
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if ((masks[a] & masks[b]) == 0) sigma(static_cast<Eigen::Index>(a * n + b), static_cast<Eigen::Index>(a * n + b)) = c;
  return {Operator(shape, std::move(rho), true), Operator(shape, std::move(sigma), true), masks};
}

struct PptChain {
  double exact = 0.0;
  double kneser_sum = 0.0;
  double middle = 0.0;
  double factorial_bound = 0.0;
  double series_bound = 0.0;
};

/// 2^{t-s} (t!/s!)^2 / ((t-s)! (d-2s)(d-2s-2)...(d-2t+2)) summed over s < t.
inline double ppt_middle_expression(std::uint64_t d, std::uint64_t t) {
  double sum = 0.0;
  for (std::uint64_t s = 0; s < t; ++s) {
    double num = std::ldexp(1.0, static_cast<int>(t - s));
    const double ratio = factorial(static_cast<unsigned>(t)) / factorial(static_cast<unsigned>(s));
    num *= ratio * ratio;
    double den = factorial(static_cast<unsigned>(t - s));
    for (std::uint64_t j = 0; j < t - s; ++j) den *= static_cast<double>(d) - static_cast<double>(2 * s + 2 * j);
    sum += num / den;
  }
  return sum;
}

inline PptChain ppt_diff_norm(std::uint64_t d, std::uint64_t t) {
  PptChain r;
  if (t == 0) return r;
  const auto states = subset_basis_states(d, t);
  const Operator diff = partial_transpose(states.rho, {1}) - partial_transpose(states.sigma, {1});
  r.exact = trace_norm(diff);
  const double c = 1.0 / (static_cast<double>(binomial(d, 2 * t)) * static_cast<double>(binomial(2 * t, t)));
  for (std::uint64_t s = 0; s < t; ++s) {
    r.kneser_sum += static_cast<double>(binomial(d, s)) * static_cast<double>(binomial(d - s, s)) *
                    kneser_one_norm(d - 2 * s, t - s).exact;
  }
  r.kneser_sum *= c;
  r.middle = ppt_middle_expression(d, t);
  const double base = static_cast<double>(d) - 2.0 * static_cast<double>(t) + 2.0;
  for (std::uint64_t s = 0; s < t; ++s) {
    const double k = static_cast<double>(t - s);
    r.factorial_bound += std::pow(2.0, k) * std::pow(static_cast<double>(t), 2.0 * k) /
                         (factorial(static_cast<unsigned>(t - s)) * std::pow(base, k));
  }
  r.series_bound = std::expm1(2.0 * static_cast<double>(t * t) / base);
  return r;
}

/// Collision-free surrogate of the 2t-copy moment in the computational basis.
inline Operator surrogate_rho_full(std::uint64_t d, std::uint64_t t) {
  const auto shape = copies_shape(d, static_cast<std::size_t>(2 * t));
  const auto N = static_cast<Eigen::Index>(shape.total());
  CMatrix m = CMatrix::Zero(N, N);
  std::size_t count = 0;
  for_each_combination(static_cast<std::size_t>(d), static_cast<std::size_t>(2 * t), [&](const std::vector<std::size_t>& T) {
    std::vector<std::uint64_t> e(T.begin(), T.end());
    const auto s = type_state(TypeVector::from_elements(d, e));
    m.noalias() += s.amplitudes() * s.amplitudes().adjoint();
    ++count;
  });
  m /= static_cast<double>(count);
  return Operator(shape, std::move(m), true);
}

inline Operator surrogate_sigma_full(std::uint64_t d, std::uint64_t t) {
  const auto shape = copies_shape(d, static_cast<std::size_t>(2 * t));
  const auto N = static_cast<Eigen::Index>(shape.total());
  CMatrix m = CMatrix::Zero(N, N);
  const auto subsets = combinations(static_cast<std::size_t>(d), static_cast<std::size_t>(t));
  std::size_t count = 0;
  for (const auto& a : subsets) {
    for (const auto& b : subsets) {
      bool disjoint = true;
      for (auto x : a) disjoint = disjoint && std::find(b.begin(), b.end(), x) == b.end();
      if (!disjoint) continue;
      const auto sa = type_state(TypeVector::from_elements(d, std::vector<std::uint64_t>(a.begin(), a.end())));
      const auto sb = type_state(TypeVector::from_elements(d, std::vector<std::uint64_t>(b.begin(), b.end())));
      const CVector v = tensor(sa, sb).amplitudes();
      m.noalias() += v * v.adjoint();
      ++count;
    }
  }
  m /= static_cast<double>(count);
  return Operator(shape, std::move(m), true);
}

struct PptHaarGap {
  double advantage = 0.0;          // closed-form collision distinguisher
  double half_surrogate_norm = 0.0;  // 1/2 ||rho~^G - sigma~^G||_1
  bool true_states_exact = false;
  double half_true_norm = 0.0;     // 1/2 ||rho^G - sigma^G||_1 on the Haar moments
  double td_rho_surrogate = 0.0;   // TD(rho, rho~)
  double td_sigma_surrogate = 0.0; // TD(sigma, sigma~)
  double slack_reference = 0.0;    // t^2/d, used when the true states are not built
  double combined_upper = 0.0;     // half_surrogate_norm + collision slack
};

/// Compares the collision distinguisher against the partial-transpose bound.
/// True Haar moments are built when d^{2t} <= true_state_max_dim.
inline PptHaarGap ppt_vs_haar_bound(std::uint64_t d, std::uint64_t t, std::size_t true_state_max_dim = 2048) {
  PptHaarGap r;
  if (t == 0) return r;
  r.advantage = locc_advantage_closed_form(d, t);
  r.half_surrogate_norm = 0.5 * ppt_diff_norm(d, t).exact;
  r.slack_reference = static_cast<double>(t * t) / static_cast<double>(d);
  const std::uint64_t full = checked_pow(d, static_cast<unsigned>(2 * t));
  if (full <= true_state_max_dim && full <= limits().max_dim) {
    r.true_states_exact = true;
    const Operator rho = haar_moment(d, static_cast<std::size_t>(2 * t));
    const Operator sigma = tensor(haar_moment(d, static_cast<std::size_t>(t)), haar_moment(d, static_cast<std::size_t>(t)));
    std::vector<std::size_t> bregs(static_cast<std::size_t>(t));
    std::iota(bregs.begin(), bregs.end(), static_cast<std::size_t>(t));
    r.half_true_norm = 0.5 * trace_norm(partial_transpose(rho, bregs) - partial_transpose(sigma, bregs));
    r.td_rho_surrogate = trace_distance(rho, surrogate_rho_full(d, t));
    r.td_sigma_surrogate = trace_distance(sigma, surrogate_sigma_full(d, t));
    r.combined_upper = r.half_surrogate_norm + r.td_rho_surrogate + r.td_sigma_surrogate;
  } else {
    r.combined_upper = r.half_surrogate_norm + r.slack_reference;
  }
  return r;
}

}  // namespace chs
