#include <catch_amalgamated.hpp>

#include "chs/locc.hpp"
#include "oracles.hpp"

using namespace chs;
using Catch::Approx;

namespace {

// Spectrum of K(v,k): eigenvalue (-1)^j C(v-k-j, k-j) with multiplicity C(v,j) - C(v,j-1).
double kneser_norm_from_spectrum(std::uint64_t v, std::uint64_t k) {
  double s = 0.0;
  for (std::uint64_t j = 0; j <= k; ++j) {
    const double mult = static_cast<double>(binomial(v, j)) - (j ? static_cast<double>(binomial(v, j - 1)) : 0.0);
    s += mult * static_cast<double>(binomial(v - k - j, k - j));
  }
  return s;
}

bool distinct(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

// Pr[all outcomes distinct] read off the diagonal of a moment operator.
double no_collision_prob(const Operator& moment, std::uint64_t d, std::size_t copies) {
  const std::vector<std::size_t> dims(copies, static_cast<std::size_t>(d));
  double p = 0.0;
  for (std::size_t i = 0; i < oracle::total(dims); ++i)
    if (distinct(oracle::digits(i, dims))) p += moment.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  return p;
}

}  // namespace

TEST_CASE("Kneser one-norm", "[locc]") {
  for (auto [v, k] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{2, 1}, {3, 1}, {5, 2}, {6, 2}, {7, 3}, {8, 3}, {9, 4}, {10, 2}}) {
    const auto r = kneser_one_norm(v, k);
    CHECK(r.exact == Approx(r.formula).epsilon(1e-10));
    CHECK(r.formula == Approx(kneser_norm_from_spectrum(v, k)).epsilon(1e-12));
  }
  const auto k52 = kneser_adjacency(5, 2);
  CHECK(k52.matrix().rows() == 10);
  CHECK(k52.matrix().real().sum() == Approx(30.0));
  const auto k42 = kneser_adjacency(4, 2);
  CHECK(k42.matrix().rows() == 6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    CHECK(k42.matrix()(i, i) == cplx(0.0));
    CHECK(k42.matrix().row(i).real().sum() == 1.0);
  }
  CHECK(k42.matrix() == k42.matrix().transpose());
  CHECK(kneser_one_norm(2, 1).exact == Approx(2.0));
  CHECK_THROWS_AS(kneser_adjacency(3, 2), Error);
  CHECK_THROWS_AS(kneser_adjacency(4, 0), Error);
}

TEST_CASE("closed-form advantage against moment diagonals", "[locc]") {
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{2, 1}, {4, 1}, {4, 2}, {5, 2}, {6, 1}, {7, 1}}) {
    const double ident = no_collision_prob(haar_moment(d, 2 * t), d, 2 * t);
    const Operator single = haar_moment(d, t);
    const double indep = no_collision_prob(tensor(single, single), d, 2 * t);
    CHECK(locc_advantage_closed_form(d, t) == Approx(indep - ident).margin(1e-12));
  }
  CHECK(locc_advantage_closed_form(4, 1) == Approx(0.75 - 0.6).margin(1e-15));
  CHECK(locc_advantage_closed_form(10, 0) == 0.0);
  CHECK_THROWS_AS(locc_advantage_closed_form(3, 2), Error);
  // the advantage decays with d for fixed t
  double prev = 1.0;
  for (std::uint64_t d = 16; d <= 4096; d *= 2) {
    const double a = locc_advantage_closed_form(d, 2);
    CHECK(a > 0.0);
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("urn sampler matches the Haar outcome law", "[locc][statistical]") {
  // chi-squared over the 16 outcome pairs at d = 4, t = 2
  const std::uint64_t d = 4;
  const Operator moment = haar_moment(d, 2);
  CounterRng rng(11);
  std::vector<std::uint64_t> out;
  const std::size_t n = 200000;
  for (auto mode : {SamplerMode::Urn, SamplerMode::Materialized}) {
    std::vector<double> hist(16, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mode == SamplerMode::Urn) {
        urn_outcomes(d, 2, rng, out);
      } else {
        materialized_outcomes(d, 2, rng, out);
      }
      hist[static_cast<std::size_t>(out[0] * d + out[1])] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
      const double e = n * moment.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      chi2 += (hist[i] - e) * (hist[i] - e) / e;
    }
    // 15 degrees of freedom; the 0.999 quantile is 37.7
    CHECK(chi2 < 37.7);
  }
}

TEST_CASE("identical-branch collision counts follow the uniform type law", "[locc][statistical]") {
  // 2t = 4 outcomes at d = 4; collisions = 4 - #distinct values
  const std::uint64_t d = 4;
  const std::size_t copies = 4;
  std::vector<double> expected(copies, 0.0);
  const auto types = enumerate_types(d, copies);
  for (const auto& T : types) expected[copies - T.counts().size()] += 1.0 / static_cast<double>(types.size());
  CounterRng rng(12);
  std::vector<std::uint64_t> out;
  const std::size_t n = 100000;
  std::vector<double> hist(copies, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    urn_outcomes(d, copies, rng, out);
    std::sort(out.begin(), out.end());
    const auto distinct_values = static_cast<std::size_t>(std::unique(out.begin(), out.end()) - out.begin());
    hist[copies - distinct_values] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t c = 0; c < copies; ++c) chi2 += (hist[c] - n * expected[c]) * (hist[c] - n * expected[c]) / (n * expected[c]);
  // 3 degrees of freedom; the 0.999 quantile is 16.27
  CHECK(chi2 < 16.27);
}

TEST_CASE("Monte Carlo advantage", "[locc][statistical]") {
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{4, 1}, {8, 2}, {16, 3}}) {
    for (auto mode : {SamplerMode::Urn, SamplerMode::Materialized}) {
      LoccParams lp{d, t, 100000, 7, mode};
      const auto r = locc_advantage_mc(lp);
      CHECK(std::abs(r.estimate - locc_advantage_closed_form(d, t)) < 4.0 * r.stderr_);
    }
  }
  LoccParams lp{16, 2, 50000, 3, SamplerMode::Urn};
  const auto a = locc_advantage_mc(lp, 1);
  const auto b = locc_advantage_mc(lp, 3);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
  CHECK_THROWS_AS(locc_advantage_mc(LoccParams{4, 1, 0, 0, SamplerMode::Urn}), Error);
}

TEST_CASE("subset-basis partial transpose matches the computational basis", "[locc]") {
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{3, 1}, {5, 1}, {5, 2}}) {
    const auto sb = subset_basis_states(d, t);
    CHECK(sb.rho.matrix().trace().real() == Approx(1.0));
    CHECK(sb.sigma.matrix().trace().real() == Approx(1.0));
    CHECK(max_abs_diff(partial_transpose(sb.sigma, {1}), sb.sigma) == 0.0);
    const Operator rho = surrogate_rho_full(d, t);
    const Operator sigma = surrogate_sigma_full(d, t);
    std::vector<std::size_t> dims(2 * t, static_cast<std::size_t>(d)), bregs;
    for (std::size_t i = t; i < 2 * t; ++i) bregs.push_back(i);
    const CMatrix diff = oracle::partial_transpose(rho.matrix(), dims, bregs) - oracle::partial_transpose(sigma.matrix(), dims, bregs);
    const double full_norm = oracle::eig_abs_sum(diff);
    CHECK(ppt_diff_norm(d, t).exact == Approx(full_norm).epsilon(1e-9));
  }
}

TEST_CASE("partial-transpose bound chain", "[locc]") {
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{3, 1}, {6, 1}, {5, 2}, {7, 2}, {8, 2}, {7, 3}}) {
    const auto c = ppt_diff_norm(d, t);
    INFO("d=" << d << " t=" << t);
    CHECK(c.exact <= c.kneser_sum * (1.0 + 1e-9) + 1e-12);
    CHECK(c.kneser_sum == Approx(c.middle).epsilon(1e-9));
    CHECK(c.middle <= c.factorial_bound * (1.0 + 1e-12));
    CHECK(c.factorial_bound <= c.series_bound * (1.0 + 1e-12));
  }
  // t = 1 has a single Kneser term: 2(d-1) / (C(d,2) * 2)
  CHECK(ppt_diff_norm(6, 1).middle == Approx(2.0 / 6.0));
  CHECK_THROWS_AS(ppt_diff_norm(4, 2), Error);
  CHECK(ppt_diff_norm(4, 0).exact == 0.0);
}

TEST_CASE("distinguisher sits below the partial-transpose gap", "[locc]") {
  for (auto [d, t] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{4, 1}, {6, 1}, {5, 2}}) {
    const auto g = ppt_vs_haar_bound(d, t, 4096);
    INFO("d=" << d << " t=" << t);
    REQUIRE(g.true_states_exact);
    CHECK(g.advantage <= g.half_true_norm + 1e-10);
    CHECK(g.half_true_norm <= g.combined_upper + 1e-10);
    CHECK(g.td_rho_surrogate > 0.0);
  }
  const auto big = ppt_vs_haar_bound(9, 2);
  CHECK_FALSE(big.true_states_exact);
  CHECK(big.advantage <= big.combined_upper);
}
