#include <catch_amalgamated.hpp>

#include <set>

#include "chs/typespace.hpp"
#include "oracles.hpp"

using namespace chs;
using Catch::Approx;

namespace {

// Definition of the predicate by brute force over pairs of index subsets.
bool predicate_by_pairs(const std::vector<std::uint64_t>& elems, unsigned n_bits_suffix, unsigned ell) {
  const auto subsets = combinations(elems.size(), ell);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t j = i + 1; j < subsets.size(); ++j) {
      std::uint64_t a = 0, b = 0;
      for (auto k : subsets[i]) a ^= elems[k];
      for (auto k : subsets[j]) b ^= elems[k];
      if ((a >> n_bits_suffix) == (b >> n_bits_suffix)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("enumerate_types counts and order", "[typespace]") {
  const auto t21 = enumerate_types(2, 1);
  REQUIRE(t21.size() == 2);
  CHECK(t21[0].count(0) == 1);
  CHECK(t21[1].count(1) == 1);
  CHECK(enumerate_types(2, 2).size() == 3);
  CHECK(enumerate_types(4, 2).size() == 10);
  for (std::uint64_t d = 1; d <= 5; ++d) {
    for (std::size_t t = 1; t <= 4; ++t) {
      const auto ts = enumerate_types(d, t);
      CHECK(ts.size() == oracle::binom(d + t - 1, t));
      CHECK(std::is_sorted(ts.begin(), ts.end()));
      std::set<std::string> distinct;
      for (const auto& T : ts) {
        CHECK(T.total() == t);
        distinct.insert(T.to_string());
      }
      CHECK(distinct.size() == ts.size());
    }
  }
  ScopedLimits cap({16384, 5});
  CHECK_THROWS_MATCHES(enumerate_types(4, 2), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::EnumerationTooLarge;
                       }));
}

TEST_CASE("type_state examples", "[typespace]") {
  const auto s = type_state(TypeVector::from_elements(4, {2}));
  CHECK(std::abs(s[2] - cplx(1.0)) < 1e-15);

  const auto s01 = type_state(TypeVector::from_elements(2, {0, 1}));
  CHECK(std::abs(s01[1] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(s01[2] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(s01[0]) == 0.0);

  const auto s00 = type_state(TypeVector::from_elements(2, {0, 0}));
  CHECK(std::abs(s00[0] - cplx(1.0)) < 1e-15);
}

TEST_CASE("type states are orthonormal", "[typespace][property]") {
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::size_t>>{{2, 2}, {2, 3}, {4, 2}}) {
    const auto ts = enumerate_types(d, t);
    CMatrix gram(static_cast<Eigen::Index>(ts.size()), static_cast<Eigen::Index>(ts.size()));
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t j = 0; j < ts.size(); ++j)
        gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            type_state(ts[i]).amplitudes().dot(type_state(ts[j]).amplitudes());
    const auto n = static_cast<Eigen::Index>(ts.size());
    CHECK(oracle::max_diff(gram, CMatrix::Identity(n, n)) < 1e-10);
  }
}

TEST_CASE("sym_projector examples", "[typespace]") {
  CHECK(max_abs_diff(sym_projector(2, 1), Operator::identity(RegisterShape({2}))) < 1e-15);
  const auto p = sym_projector(2, 2);
  CMatrix expect = CMatrix::Zero(4, 4);
  for (const auto& T : enumerate_types(2, 2)) {
    const auto v = type_state(T).amplitudes();
    expect += v * v.adjoint();
  }
  CHECK(oracle::max_diff(p.matrix(), expect) < 1e-15);
  CHECK(numeric_rank(p) == 3);
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::size_t>>{{2, 3}, {3, 3}, {4, 2}}) {
    const auto q = sym_projector(d, t);
    CHECK(oracle::max_diff(q.matrix() * q.matrix(), q.matrix()) < 1e-12);
    CHECK(numeric_rank(q) == oracle::binom(d + t - 1, t));
  }
}

TEST_CASE("haar_moment identity and Monte Carlo", "[typespace]") {
  CHECK(max_abs_diff(haar_moment(2, 1), Operator::maximally_mixed(RegisterShape({2}))) < 1e-15);
  CHECK(haar_moment(5, 0).dim() == 1);
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::size_t>>{{2, 2}, {2, 3}, {4, 2}}) {
    CHECK(max_abs_diff(haar_moment(d, t), type_average(d, t)) < 1e-12);
    CHECK(check_density(haar_moment(d, t)).ok);
  }
  CounterRng rng(2024);
  CMatrix acc = CMatrix::Zero(4, 4);
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    const CVector v = sample_haar(2, rng).amplitudes();
    const CVector vv = oracle::kron(v, v);
    acc += vv * vv.adjoint();
  }
  acc /= samples;
  CHECK(oracle::max_diff(acc, haar_moment(2, 2).matrix()) < 5e-3);
}

TEST_CASE("sample_haar examples", "[typespace]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(std::abs(sample_haar(8, seed).amplitudes().norm() - 1.0) < 1e-12);
  }
  CounterRng rng(77);
  double acc = 0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) acc += std::norm(sample_haar(4, rng)[0]);
  CHECK(acc / samples == Approx(0.25).margin(0.005));

  const auto a = Operator::projector(sample_haar(4, std::uint64_t{42}));
  const auto b = Operator::projector(sample_haar(4, std::uint64_t{43}));
  CHECK(fidelity(a, b) < 0.999);
}

TEST_CASE("prefix collision-free examples", "[typespace]") {
  const PrefixParams p11{1, 1, 1, 2};
  CHECK(is_l_fold_prefix_collision_free(TypeVector::from_elements(4, {0b00, 0b10}), p11));
  CHECK_FALSE(is_l_fold_prefix_collision_free(TypeVector::from_elements(4, {0b00, 0b01}), p11));
  const PrefixParams p21{2, 1, 2, 4};
  CHECK_FALSE(is_l_fold_prefix_collision_free(TypeVector::from_elements(8, {0b000, 0b001, 0b010, 0b011}), p21));
  CHECK_THROWS_AS(is_l_fold_prefix_collision_free(TypeVector::from_elements(8, {0}), p11), Error);
}

TEST_CASE("predicate agrees with pairwise definition", "[typespace][property]") {
  for (unsigned n = 1; n <= 2; ++n) {
    for (unsigned m = 0; m <= 1; ++m) {
      for (unsigned t = 1; t <= 4; ++t) {
        for (unsigned ell = 1; ell <= t; ++ell) {
          const PrefixParams p{n, m, ell, t};
          for (const auto& T : enumerate_types(p.alphabet_dim(), t)) {
            CHECK(is_l_fold_prefix_collision_free(T, p) == predicate_by_pairs(T.elements(), m, ell));
          }
        }
      }
    }
  }
}

TEST_CASE("ell-fold implies i-fold when t > 2 ell", "[typespace][property]") {
  for (unsigned n = 2; n <= 3; ++n) {
    for (unsigned t = 3; t <= 5; ++t) {
      for (unsigned ell = 1; 2 * ell < t; ++ell) {
        const PrefixParams p{n, 0, ell, t};
        for (const auto& T : enumerate_types(p.alphabet_dim(), t)) {
          if (!is_l_fold_prefix_collision_free(T, p)) continue;
          for (unsigned i = 1; i <= ell; ++i) CHECK(is_l_fold_prefix_collision_free(T, PrefixParams{n, 0, i, t}));
        }
      }
    }
  }
}

TEST_CASE("prob_good_type exact and Monte Carlo", "[typespace]") {
  CHECK(prob_good_type_exact({1, 0, 1, 1}).exact == 1.0);
  const auto r = prob_good_type({2, 0, 1, 2}, 100000, 5);
  CHECK(r.good == 6);
  CHECK(r.total == 10);
  CHECK(std::abs(r.mc - 0.6) <= 4 * r.mc_stderr);

  const auto r2 = prob_good_type({2, 1, 2, 3}, 100000, 6);
  CHECK(std::abs(r2.mc - r2.exact) <= 4 * r2.mc_stderr);

  // reproducible and independent of worker count
  const auto a = prob_good_type({3, 0, 1, 3}, 20000, 9, 1);
  const auto b = prob_good_type({3, 0, 1, 3}, 20000, 9, 3);
  CHECK(a.mc == b.mc);
}

TEST_CASE("prob_good_type is nondecreasing in n", "[typespace][property]") {
  for (unsigned m = 0; m <= 1; ++m) {
    for (unsigned t = 2; t <= 3; ++t) {
      for (unsigned ell = 1; ell <= 2 && ell <= t; ++ell) {
        double prev = -1.0;
        for (unsigned n = 1; n + m <= 4; ++n) {
          const double v = prob_good_type_exact({n, m, ell, t}).exact;
          CHECK(v >= prev - 1e-15);
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("uniform type sampler matches the type distribution", "[typespace]") {
  CounterRng rng(31);
  const auto ts = enumerate_types(4, 2);
  std::map<std::string, int> hist;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) ++hist[sample_uniform_type(4, 2, rng).to_string()];
  CHECK(hist.size() == ts.size());
  double chi2 = 0;
  const double expect = samples / static_cast<double>(ts.size());
  for (const auto& T : ts) {
    const double o = hist[T.to_string()];
    chi2 += (o - expect) * (o - expect) / expect;
  }
  CHECK(chi2 < 27.9);  // 9 dof, p = 0.001
}

TEST_CASE("type_bipartition examples", "[typespace]") {
  const auto T = TypeVector::from_elements(2, {0, 1});
  const auto b = type_bipartition(T, 1);
  REQUIRE(b.pairs.size() == 2);
  CHECK(b.coefficient == Approx(1.0 / std::sqrt(2.0)));
  CHECK(b.pairs[0].first.count(0) == 1);
  CHECK(b.pairs[0].second.count(1) == 1);
  CHECK(b.pairs[1].first.count(1) == 1);

  const auto b0 = type_bipartition(T, 0);
  REQUIRE(b0.pairs.size() == 1);
  CHECK(b0.pairs[0].first.total() == 0);
  CHECK(b0.coefficient == 1.0);

  const auto T3 = TypeVector::from_elements(4, {0, 1, 2});
  const auto b3 = type_bipartition(T3, 1);
  CHECK(b3.pairs.size() == 3);
  CHECK(b3.coefficient == Approx(1.0 / std::sqrt(3.0)));
  CHECK((bipartition_vector(b3) - type_state(T3).amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t x = 0; x <= 3; ++x) {
    CHECK((bipartition_vector(type_bipartition(T3, x)) - type_state(T3).amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(type_bipartition(TypeVector::from_elements(2, {0, 0}), 1), Error);
}
