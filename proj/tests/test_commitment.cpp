#include <catch_amalgamated.hpp>

#include "chs/commitment.hpp"
#include "oracles.hpp"

using namespace chs;
using Catch::Approx;

namespace {

CommitmentParams params(unsigned lambda, unsigned n, unsigned p, unsigned t = 0) { return {lambda, n, p, t}; }

Operator proj(const StateVector& s) { return Operator::projector(s); }

// Literal E_k over independent keys of (x)_i Z^{k_i} on the first `keyed` registers.
CMatrix dense_independent_twirl(const CMatrix& rho, unsigned key_bits, unsigned reg_bits, unsigned keyed, unsigned total) {
  const Eigen::Index reg_dim = Eigen::Index{1} << reg_bits;
  const std::uint64_t per = std::uint64_t{1} << key_bits;
  std::uint64_t all = 1;
  for (unsigned i = 0; i < keyed; ++i) all *= per;
  CMatrix acc = CMatrix::Zero(rho.rows(), rho.cols());
  for (std::uint64_t idx = 0; idx < all; ++idx) {
    CMatrix u = CMatrix::Ones(1, 1);
    std::uint64_t rem = idx;
    for (unsigned r = 0; r < total; ++r) {
      CMatrix f = CMatrix::Identity(reg_dim, reg_dim);
      if (r < keyed) {
        const std::uint64_t k = rem % per;
        rem /= per;
        for (Eigen::Index y = 0; y < reg_dim; ++y)
          f(y, y) = (std::popcount(k & (static_cast<std::uint64_t>(y) >> (reg_bits - key_bits))) % 2) ? -1.0 : 1.0;
      }
      u = oracle::kron(u, f);
    }
    acc += u * rho * u.adjoint();
  }
  return acc / static_cast<double>(all);
}

}  // namespace

TEST_CASE("commit state examples", "[commitment]") {
  const auto cp = params(1, 2, 1);
  CounterRng rng(1);
  const auto theta = sample_haar(4, rng);

  const auto c1 = commit_state(1, theta, cp);
  CHECK(max_abs_diff(partial_trace(proj(c1), {0}), Operator::maximally_mixed(RegisterShape({4}))) < 1e-14);

  const auto zero = StateVector::basis(RegisterShape({4}), 0);
  const auto c0 = commit_state(0, zero, cp);
  CHECK(std::abs(c0[0] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(c0[2] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(c0.amplitudes().cwiseAbs().sum() == Approx(std::sqrt(2.0)));

  const auto l0 = commit_state(0, theta, params(0, 2, 1));
  CHECK((l0.amplitudes() - tensor(theta, StateVector::basis(RegisterShape({4}), 0)).amplitudes()).norm() < 1e-15);

  const auto two = commit_state(1, theta, params(1, 2, 2));
  CHECK(two.shape() == RegisterShape::uniform(4, 4));
  CHECK(std::abs(two.amplitudes().norm() - 1.0) < 1e-14);

  // Tr_R of the b = 0 pair is the key-twirled common state
  for (auto [lambda, n] : std::vector<std::pair<unsigned, unsigned>>{{1, 2}, {2, 3}, {1, 3}}) {
    const auto th = sample_haar(std::size_t{1} << n, rng);
    const auto reduced = partial_trace(proj(pair_state(0, th, params(lambda, n, 1))), {0});
    CHECK(max_abs_diff(reduced, committed_register_state(lambda, n, th)) < 1e-14);
  }
}

TEST_CASE("receiver acceptance", "[commitment]") {
  CounterRng rng(2);
  const auto theta = sample_haar(4, rng);
  for (unsigned p = 1; p <= 2; ++p) {
    const auto cp = params(1, 2, p);
    for (int b = 0; b < 2; ++b) {
      const auto honest = commit_state(b, theta, cp);
      CHECK(std::abs(receiver_accept_prob(b, proj(honest), theta, cp) - 1.0) < 1e-10);
      CHECK(std::abs(receiver_accept_prob(b, honest, theta, cp) - 1.0) < 1e-10);

      // a state orthogonal to psi_b on every pair
      const CVector psi = pair_state(b, theta, cp).amplitudes();
      CVector g(psi.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = complex_normal(rng);
      g -= psi * psi.dot(g);
      const auto perp = StateVector::normalized(RegisterShape({4, 4}), g);
      StateVector orth = perp;
      for (unsigned i = 1; i < p; ++i) orth = tensor(orth, perp);
      CHECK(receiver_accept_prob(b, proj(orth), theta, cp) == Approx(std::pow(0.5, p)).margin(1e-12));

      const auto mixed = Operator::maximally_mixed(cp.pairs_shape());
      CHECK(receiver_accept_prob(b, mixed, theta, cp) ==
            Approx(std::pow(0.5 * (1.0 + 1.0 / 16.0), p)).margin(1e-12));
      CHECK(receiver_accept_prob(b, mixed, theta, cp) ==
            Approx((verification_povm(b, theta, cp).matrix() * mixed.matrix()).trace().real()).margin(1e-12));
    }
  }
  CHECK_THROWS_AS(receiver_accept_prob(0, Operator::maximally_mixed(RegisterShape({4})), theta, params(1, 2, 1)), Error);
}

TEST_CASE("verification POVM is between 0 and I", "[commitment][property]") {
  CounterRng rng(3);
  for (unsigned p = 1; p <= 2; ++p) {
    const auto cp = params(1, 2, p);
    const auto theta = sample_haar(4, rng);
    for (int b = 0; b < 2; ++b) {
      const auto ev = hermitian_eigenvalues(verification_povm(b, theta, cp).matrix());
      CHECK(ev.minCoeff() >= -1e-12);
      CHECK(ev.maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("hiding distance", "[commitment]") {
  CHECK(hiding_distance(params(1, 2, 1, 0)).td < 1e-14);
  // the key space, not n, controls hiding: td shrinks with lambda and saturates in n
  const auto a = hiding_distance(params(1, 2, 1, 1));
  const auto b = hiding_distance(params(1, 3, 1, 1));
  const auto c = hiding_distance(params(2, 3, 1, 1));
  const auto e = hiding_distance(params(3, 4, 1, 1));
  CHECK(a.td > 0.0);
  CHECK(b.td >= a.td);
  CHECK(c.td < b.td);
  CHECK(e.td < hiding_distance(params(2, 4, 1, 1)).td);
  for (auto cp : {params(1, 2, 1, 1), params(2, 3, 1, 1), params(3, 4, 1, 1), params(1, 2, 2, 1)}) {
    const double bound = cp.p * std::pow(cp.p + cp.t, 2.0) / std::ldexp(1.0, static_cast<int>(cp.lambda));
    CHECK(hiding_distance(cp).td <= bound);
  }
  CHECK_THROWS_AS(hiding_distance(params(2, 2, 1, 1)), Error);

  // against an explicit Kronecker twirl of the type-state average
  for (auto cp : {params(1, 2, 1, 1), params(1, 2, 2, 0), params(1, 2, 2, 1)}) {
    const auto h = hiding_distance(cp);
    const CMatrix moment = type_average(4, cp.p + cp.t).matrix();
    CHECK(oracle::max_diff(h.committed0.matrix(), dense_independent_twirl(moment, cp.lambda, cp.n, cp.p, cp.p + cp.t)) < 1e-13);
    CHECK(check_density(h.committed0).ok);
  }
}

TEST_CASE("fidelity bound", "[commitment]") {
  for (auto [lambda, n] : std::vector<std::pair<unsigned, unsigned>>{{1, 2}, {2, 3}}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto theta = sample_haar(std::size_t{1} << n, seed);
      const auto r = fidelity_bound_check(lambda, n, theta);
      CHECK(r.ok);
      CHECK(r.bound == std::ldexp(1.0, -static_cast<int>(n - lambda)));
    }
    const auto zero = fidelity_bound_check(lambda, n, StateVector::basis(RegisterShape({std::size_t{1} << n}), 0));
    CHECK(zero.fidelity == Approx(std::ldexp(1.0, -static_cast<int>(n))).margin(1e-12));
  }
}

TEST_CASE("sum-binding for built-in and random strategies", "[commitment]") {
  CounterRng rng(4);
  for (auto cp : {params(1, 2, 1), params(1, 2, 2), params(1, 3, 1), params(1, 3, 2)}) {
    const auto theta = sample_haar(cp.reg_dim(), rng);
    const double bound = binding_bound(cp);
    const auto builtin = builtin_senders(theta, cp);
    const auto h0 = binding_sum(builtin[0], theta, cp);
    const auto h1 = binding_sum(builtin[1], theta, cp);
    CHECK(std::abs(h0.p0 - 1.0) < 1e-10);
    CHECK(std::abs(h1.p1 - 1.0) < 1e-10);
    // each SWAP test accepts with probability at least 1/2
    CHECK(h0.p1 >= std::pow(0.5, cp.p) - 1e-12);
    if (std::pow(0.5, cp.p) < std::pow(2.0, -0.5 * cp.p * (cp.n - cp.lambda)))
      CHECK(h0.sum() <= 1.0 + std::pow(2.0, -0.5 * cp.p * (cp.n - cp.lambda)) + 1e-9);
    for (const auto& s : builtin) CHECK(binding_sum(s, theta, cp).sum() <= bound + 1e-9);
    const auto both = binding_sum(builtin[2], theta, cp);
    CHECK(both.p1 == Approx(1.0).margin(1e-10));
    CHECK(both.p0 >= std::pow(0.5, cp.p));
    for (int i = 0; i < 20; ++i) {
      const auto r = binding_sum(random_sender(cp, rng, "random"), theta, cp);
      CHECK(r.sum() <= bound + 1e-9);
      CHECK(r.p0 >= 0.0);
      CHECK(r.p1 <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("pure-state acceptance matches the reduced-state route", "[commitment]") {
  CounterRng rng(5);
  const auto cp = params(1, 2, 1);
  const auto theta = sample_haar(4, rng);
  const auto s = random_sender(cp, rng, "random");
  const auto r = binding_sum(s, theta, cp);
  const CVector phi0 = apply_on_registers(s.initial.amplitudes(), s.initial.shape(), reveal_registers(cp), s.reveal0);
  const Operator full(s.initial.shape(), phi0 * phi0.adjoint(), true);
  CHECK(receiver_accept_prob(0, partial_trace(full, {0, 1}), theta, cp) == Approx(r.p0).margin(1e-12));
  CHECK_THROWS_AS(binding_sum({"bad", s.initial, CMatrix::Ones(8, 8), s.reveal1}, theta, cp), Error);
}
