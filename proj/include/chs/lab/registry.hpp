#pragma once

// The fixed experiment registry and the named suites built from it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "chs/commitment.hpp"
#include "chs/lab/experiment.hpp"
#include "chs/locc.hpp"
#include "chs/numkit.hpp"
#include "chs/pseudorandomness.hpp"
#include "chs/rng.hpp"
#include "chs/typespace.hpp"

namespace chs::lab {

namespace detail {

inline std::vector<PrfsInput> parse_queries(const Params& p, unsigned bits) {
  std::vector<PrfsInput> out;
  for (auto q : p.list("queries")) {
    require(bits < 64 && q < (std::uint64_t{1} << bits), ErrorKind::ParameterError, "query longer than input length");
    out.push_back(PrfsInput{bits, q});
  }
  return out;
}

inline std::vector<unsigned> to_unsigned(const std::vector<std::uint64_t>& v) {
  return std::vector<unsigned>(v.begin(), v.end());
}

inline double sum_of(const std::vector<unsigned>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

/// Good types of size p.t for the ell-fold predicate.
inline std::vector<TypeVector> good_types(const PrefixParams& p, bool also_one_fold = false) {
  std::vector<TypeVector> out;
  for (auto& T : enumerate_types(p.alphabet_dim(), p.t)) {
    if (!is_l_fold_prefix_collision_free(T, p)) continue;
    if (also_one_fold && !is_l_fold_prefix_collision_free(T, PrefixParams{p.n, p.m, 1, p.t})) continue;
    out.push_back(std::move(T));
  }
  return out;
}

inline Operator haar_moment_mc(std::uint64_t d, std::size_t t, std::uint64_t trials, std::uint64_t seed, unsigned jobs) {
  const auto shape = copies_shape(d, t);
  const auto N = static_cast<Eigen::Index>(shape.total());
  const auto parts = run_chunks(trials, 4096, jobs, [&](std::size_t c, std::size_t b, std::size_t e) {
    CounterRng rng(seed, c);
    CMatrix acc = CMatrix::Zero(N, N);
    for (std::size_t i = b; i < e; ++i) {
      const auto psi = sample_haar(d, rng);
      const CVector v = tensor_power(psi, t, StateVector(RegisterShape{}, CVector::Ones(1))).amplitudes();
      acc.noalias() += v * v.adjoint();
    }
    return acc;
  });
  CMatrix total = CMatrix::Zero(N, N);
  for (const auto& m : parts) total += m;
  return Operator(shape, total / static_cast<double>(trials), true);
}

}  // namespace detail

inline const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> reg = [] {
    std::vector<Experiment> r;

    // ---------------------------------------------------------------- lemmas
    r.push_back({"haar-moment", "symmetric projector over its dimension equals the type-state average",
                 {{"d", "2"}, {"t", "2"}},
                 [](const Params& p, Context& ctx) {
                   const auto d = p.u64("d");
                   const auto t = p.uint("t");
                   const Operator lhs = haar_moment(d, t);
                   ctx.record("dimension", static_cast<double>(lhs.dim()));
                   ctx.check("max entry |Pi_sym/C - type average|", max_abs_diff(lhs, type_average(d, t)), Relation::Le,
                             0.0, 1e-12, Mode::Exact);
                   ctx.check("trace", lhs.matrix().trace().real(), Relation::Eq, 1.0, 1e-12, Mode::Exact);
                 }});

    r.push_back({"type-basis", "type states form an orthonormal basis of the symmetric subspace",
                 {{"d", "3"}, {"t", "3"}},
                 [](const Params& p, Context& ctx) {
                   const auto d = p.u64("d");
                   const auto t = p.uint("t");
                   const auto types = enumerate_types(d, t);
                   ctx.check("type count", static_cast<double>(types.size()), Relation::Eq,
                             static_cast<double>(type_count(d, t)), 0.0, Mode::Exact);
                   CMatrix basis(static_cast<Eigen::Index>(checked_pow(d, t)), static_cast<Eigen::Index>(types.size()));
                   for (std::size_t i = 0; i < types.size(); ++i)
                     basis.col(static_cast<Eigen::Index>(i)) = type_state(types[i]).amplitudes();
                   const CMatrix gram = basis.adjoint() * basis;
                   const auto n = gram.rows();
                   ctx.check("max |Gram - I|", (gram - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff(), Relation::Le, 0.0,
                             1e-12, Mode::Exact);
                   const Operator proj(copies_shape(d, t), basis * basis.adjoint(), true);
                   ctx.check("max |sum |T><T| - Pi_sym|", max_abs_diff(proj, sym_projector(d, t)), Relation::Le, 0.0,
                             1e-12, Mode::Exact);
                 }});

    r.push_back({"bipartition", "collision-free type state as a uniform superposition of sub-type pairs",
                 {{"d", "4"}, {"size", "3"}, {"x", "1"}},
                 [](const Params& p, Context& ctx) {
                   const auto d = p.u64("d");
                   const auto size = p.uint("size");
                   const auto x = p.uint("x");
                   double worst = 0.0;
                   std::size_t count = 0;
                   for (const auto& T : enumerate_types(d, size)) {
                     if (!T.collision_free()) continue;
                     ++count;
                     const CVector lhs = bipartition_vector(type_bipartition(T, x));
                     worst = std::max(worst, (lhs - type_state(T).amplitudes()).cwiseAbs().maxCoeff());
                   }
                   ctx.record("collision-free types", static_cast<double>(count));
                   ctx.check("max entry discrepancy", worst, Relation::Le, 0.0, 1e-12, Mode::Exact);
                 }});

    r.push_back({"perm-split", "key average of |v><sigma(v)| is 1 iff sigma maps [ell] to itself",
                 {{"n", "2"}, {"m", "0"}, {"ell", "1"}, {"spectators", "1"}},
                 [](const Params& p, Context& ctx) {
                   const PrefixParams pp{p.uint("n"), p.uint("m"), p.uint("ell"), p.uint("ell") + p.uint("spectators")};
                   const auto types = detail::good_types(pp);
                   double worst = 0.0;
                   std::size_t pairs = 0;
                   for (const auto& T : types) {
                     const auto v = T.elements();
                     std::vector<std::size_t> sigma(pp.t);
                     std::iota(sigma.begin(), sigma.end(), std::size_t{0});
                     do {
                       worst = std::max(worst, check_perm_split(v, sigma, pp).discrepancy);
                       ++pairs;
                     } while (std::next_permutation(sigma.begin(), sigma.end()));
                   }
                   ctx.check("good types", static_cast<double>(types.size()), Relation::Gt, 0.0, 0.0, Mode::Exact);
                   ctx.record("(type, permutation) pairs", static_cast<double>(pairs));
                   ctx.check("max discrepancy", worst, Relation::Lt, 1e-12, 0.0, Mode::Exact);
                 }});

    r.push_back({"nice-t", "random Z on ell copies of a good type state splits it into sub-type mixtures",
                 {{"n", "2"}, {"m", "0"}, {"ell", "1"}, {"spectators", "1"}},
                 [](const Params& p, Context& ctx) {
                   const PrefixParams pp{p.uint("n"), p.uint("m"), p.uint("ell"), p.uint("ell") + p.uint("spectators")};
                   const auto types = detail::good_types(pp);
                   double worst = 0.0;
                   for (const auto& T : types) worst = std::max(worst, lemma_nice_T_check(T, pp).discrepancy);
                   ctx.check("good types", static_cast<double>(types.size()), Relation::Gt, 0.0, 0.0, Mode::Exact);
                   ctx.check("max discrepancy", worst, Relation::Lt, 1e-12, 0.0, Mode::Exact);
                 }});

    r.push_back({"prfs-type", "PRFS keys on distinct queries split a good type state by query blocks",
                 {{"lambda_prime", "1"}, {"suffix", "1"}, {"input_bits", "1"}, {"queries", "0,1"}, {"ells", "1,1"},
                  {"spectators", "0"}, {"key_samples", "4096"}},
                 [](const Params& p, Context& ctx) {
                   const auto ells = detail::to_unsigned(p.list("ells"));
                   const auto queries = detail::parse_queries(p, p.uint("input_bits"));
                   const unsigned ell = static_cast<unsigned>(detail::sum_of(ells));
                   const PrefixParams pp{p.uint("lambda_prime"), p.uint("suffix"), ell, ell + p.uint("spectators")};
                   const auto types = detail::good_types(pp, queries.size() > 1);
                   double worst = 0.0;
                   LemmaCheck last;
                   for (const auto& T : types) {
                     last = lemma_prfs_type_check(T, queries, ells, pp, p.u64("key_samples"), ctx.seed());
                     worst = std::max(worst, last.discrepancy);
                   }
                   const Mode mode = last.sampled ? Mode::Sampled : Mode::Exact;
                   ctx.check("good types", static_cast<double>(types.size()), Relation::Gt, 0.0, 0.0, Mode::Exact);
                   ctx.record("keys averaged", static_cast<double>(last.keys), mode);
                   ctx.record("key space", static_cast<double>(last.key_space));
                   ctx.check("max discrepancy", worst, Relation::Lt, 1e-12, 0.0, mode);
                 }});

    r.push_back({"kneser", "Kneser graph spectral one-norm against its closed form",
                 {{"v", "5"}, {"k", "2"}},
                 [](const Params& p, Context& ctx) {
                   const auto res = kneser_one_norm(KneserParams{p.u64("v"), p.u64("k")});
                   ctx.record("formula", res.formula);
                   ctx.check("exact one-norm", res.exact, Relation::Eq, res.formula, 1e-8, Mode::Exact);
                 }});

    r.push_back({"kneser-sweep", "Kneser one-norm identity for every v >= 2k+1 with C(v,k) <= max_vertices",
                 {{"max_vertices", "200"}},
                 [](const Params& p, Context& ctx) {
                   const auto cap = p.u64("max_vertices");
                   double worst = 0.0;
                   std::size_t graphs = 0;
                   for (std::uint64_t k = 1; binomial(2 * k + 1, k) <= cap; ++k) {
                     for (std::uint64_t v = 2 * k + 1; binomial(v, k) <= cap; ++v) {
                       const auto res = kneser_one_norm(v, k);
                       worst = std::max(worst, std::abs(res.exact - res.formula));
                       ++graphs;
                     }
                   }
                   ctx.record("graphs", static_cast<double>(graphs));
                   ctx.check("max |exact - formula|", worst, Relation::Le, 0.0, 1e-8, Mode::Exact);
                   ctx.check("K(5,2)", kneser_one_norm(5, 2).exact, Relation::Eq, 16.0, 1e-8, Mode::Exact);
                   ctx.check("K(7,3)", kneser_one_norm(7, 3).exact, Relation::Eq, 64.0, 1e-8, Mode::Exact);
                 }});

    r.push_back({"locc-closed-form", "collision distinguisher advantage as an exact rational",
                 {{"d", "4"}, {"t", "1"}, {"numerator", "3"}, {"denominator", "20"}},
                 [](const Params& p, Context& ctx) {
                   const auto q = locc_advantage_rational(p.u64("d"), p.u64("t"));
                   const boost::multiprecision::cpp_rational want(p.u64("numerator"), p.u64("denominator"));
                   ctx.record("advantage", static_cast<double>(q));
                   ctx.holds("equals numerator/denominator exactly", q == want);
                 }});

    // ---------------------------------------------------------------- bounds
    r.push_back({"prs-hybrid", "ell generator copies and t CHS copies against independent Haar states",
                 {{"lambda", "2"}, {"n", "2"}, {"ell", "1"}, {"t", "1"}},
                 [](const Params& p, Context& ctx) {
                   PseudoParams pp;
                   pp.lambda = p.uint("lambda");
                   pp.n = p.uint("n");
                   pp.ell = p.uint("ell");
                   pp.t = p.uint("t");
                   const auto h = prs_hybrids(pp);
                   ctx.record("trace distance", h.td);
                   ctx.record("reference (ell+t)^(2 ell)/2^lambda", h.bound);
                   ctx.holds("real state is a density matrix", check_density(h.real).ok);
                   ctx.holds("ideal state is a density matrix", check_density(h.ideal).ok);
                   ctx.check("trace distance <= 1", h.td, Relation::Le, 1.0, 1e-12, Mode::Exact);
                   if (pp.ell == 0) ctx.check("ell = 0 gives zero distance", h.td, Relation::Eq, 0.0, 0.0, Mode::Exact);
                 }});

    r.push_back({"prs-hybrid-decay", "PRS trace distance decreases from lambda=n=a to lambda=n=b",
                 {{"from", "2"}, {"to", "3"}, {"ell", "1"}, {"t", "1"}},
                 [](const Params& p, Context& ctx) {
                   auto at = [&](unsigned lam) {
                     PseudoParams pp;
                     pp.lambda = pp.n = lam;
                     pp.ell = p.uint("ell");
                     pp.t = p.uint("t");
                     return prs_hybrids(pp).td;
                   };
                   const double a = at(p.uint("from"));
                   const double b = at(p.uint("to"));
                   ctx.record("td at from", a);
                   ctx.check("td at to < td at from", b, Relation::Lt, a, 0.0, Mode::Exact);
                 }});

    r.push_back({"prs-multikey", "several independent keys with ell copies each plus t CHS copies",
                 {{"lambda", "2"}, {"n", "2"}, {"ell", "1"}, {"t", "1"}, {"keys", "2"}},
                 [](const Params& p, Context& ctx) {
                   PseudoParams pp;
                   pp.lambda = p.uint("lambda");
                   pp.n = p.uint("n");
                   pp.ell = p.uint("ell");
                   pp.t = p.uint("t");
                   const auto h = prs_multikey_hybrids(pp, p.uint("keys"));
                   ctx.record("trace distance", h.td);
                   ctx.record("reference p(p ell+t)^(2 ell)/2^lambda", h.bound);
                   ctx.holds("real state is a density matrix", check_density(h.real).ok);
                   ctx.check("trace distance <= 1", h.td, Relation::Le, 1.0, 1e-12, Mode::Exact);
                 }});

    r.push_back({"prfs-hybrid", "PRFS outputs on a query list against per-query Haar states",
                 {{"lambda_prime", "2"}, {"n", "2"}, {"input_bits", "1"}, {"queries", "0,1"}, {"ells", "1,1"},
                  {"t", "0"}, {"key_samples", "4096"}},
                 [](const Params& p, Context& ctx) {
                   PseudoParams pp;
                   pp.lambda = p.uint("lambda_prime");
                   pp.n = p.uint("n");
                   pp.m = p.uint("input_bits");
                   pp.t = p.uint("t");
                   pp.ells = detail::to_unsigned(p.list("ells"));
                   pp.ell = static_cast<unsigned>(detail::sum_of(pp.ells));
                   pp.key_samples = p.u64("key_samples");
                   pp.seed = ctx.seed();
                   const auto h = prfs_hybrids(pp, detail::parse_queries(p, pp.m));
                   const Mode mode = h.sampled ? Mode::Sampled : Mode::Exact;
                   ctx.record("trace distance", h.td, mode);
                   ctx.record("keys averaged", static_cast<double>(h.keys), mode);
                   ctx.holds("real state is a density matrix", check_density(h.real).ok, mode);
                   ctx.check("trace distance <= 1", h.td, Relation::Le, 1.0, 1e-12, mode);
                 }});

    r.push_back({"rank-attack", "support projector of the keyed mixture distinguishes it from Haar",
                 {{"lambda", "2"}, {"n", "2"}, {"ell", "1"}, {"t", "2"}},
                 [](const Params& p, Context& ctx) {
                   PseudoParams pp;
                   pp.lambda = p.uint("lambda");
                   pp.n = p.uint("n");
                   pp.ell = p.uint("ell");
                   pp.t = p.uint("t");
                   const auto r = rank_attack(pp);
                   ctx.record("rank rho0", static_cast<double>(r.rank0));
                   ctx.check("rank rho0 <= 2^lambda C(2^n+ell+t-1, ell+t)", static_cast<double>(r.rank0), Relation::Le,
                             r.rank0_bound, 0.0, Mode::Exact);
                   ctx.check("rank rho1", static_cast<double>(r.rank1), Relation::Eq, static_cast<double>(r.rank1_formula),
                             0.0, Mode::Exact);
                   ctx.check("Tr(Pi rho0)", r.accept_pseudo, Relation::Eq, 1.0, 1e-9, Mode::Exact);
                   ctx.check("Tr(Pi rho1) <= rank0/rank1", r.accept_haar, Relation::Le,
                             static_cast<double>(r.rank0) / static_cast<double>(r.rank1), 1e-9, Mode::Exact);
                   ctx.record("ratio reference", r.ratio_bound);
                 }});

    r.push_back({"onewayness", "E_x Tr(rho_x S rho_x S) against (m+1)/d",
                 {{"n", "1"}, {"m", "1"}},
                 [](const Params& p, Context& ctx) {
                   const auto r = onewayness_quantity(p.uint("n"), p.uint("m"));
                   ctx.check("quantity <= (m+1)/d", r.value, Relation::Le, r.bound, 1e-9, Mode::Exact);
                 }});

    r.push_back({"commitment-completeness", "honest commit and reveal are accepted with certainty",
                 {{"lambda", "1"}, {"n", "2"}, {"p", "1"}},
                 [](const Params& p, Context& ctx) {
                   const CommitmentParams cp{p.uint("lambda"), p.uint("n"), p.uint("p")};
                   CounterRng rng(ctx.seed());
                   const auto theta = sample_haar(cp.reg_dim(), rng);
                   for (int b = 0; b < 2; ++b) {
                     const auto tag = std::to_string(b);
                     const auto honest = commit_state(b, theta, cp);
                     ctx.check("accept honest " + tag, receiver_accept_prob(b, honest, theta, cp), Relation::Eq, 1.0,
                               1e-10, Mode::Exact);
                     const auto ev = hermitian_eigenvalues(verification_povm(b, theta, cp).matrix());
                     ctx.check("min eigenvalue of M" + tag, ev.minCoeff(), Relation::Ge, 0.0, 1e-12, Mode::Exact);
                     ctx.check("max eigenvalue of M" + tag, ev.maxCoeff(), Relation::Le, 1.0, 1e-12, Mode::Exact);
                   }
                 }});

    r.push_back({"fidelity-bound", "F(rho0, I/2^n) <= 2^-(n-lambda) over Haar common states",
                 {{"lambda", "1"}, {"n", "2"}, {"samples", "100"}},
                 [](const Params& p, Context& ctx) {
                   const auto lambda = p.uint("lambda");
                   const auto n = p.uint("n");
                   double worst = -1.0, bound = 0.0;
                   for (std::uint64_t s = 0; s < p.u64("samples"); ++s) {
                     CounterRng rng(ctx.seed(), s);
                     const auto r = fidelity_bound_check(lambda, n, sample_haar(std::uint64_t{1} << n, rng));
                     worst = std::max(worst, r.fidelity);
                     bound = r.bound;
                   }
                   ctx.check("max fidelity", worst, Relation::Le, bound, 1e-9, Mode::Exact);
                 }});

    r.push_back({"binding", "p0 + p1 for built-in and random malicious senders",
                 {{"lambda", "1"}, {"n", "2"}, {"p", "1"}, {"random", "20"}},
                 [](const Params& p, Context& ctx) {
                   const CommitmentParams cp{p.uint("lambda"), p.uint("n"), p.uint("p")};
                   CounterRng rng(ctx.seed());
                   const auto theta = sample_haar(cp.reg_dim(), rng);
                   const double bound = binding_bound(cp);
                   for (const auto& s : builtin_senders(theta, cp)) {
                     const auto b = binding_sum(s, theta, cp);
                     ctx.record(s.name + " p0", b.p0);
                     ctx.record(s.name + " p1", b.p1);
                     ctx.check(s.name + " p0+p1", b.sum(), Relation::Le, bound, 1e-9, Mode::Exact);
                   }
                   double worst = 0.0;
                   for (std::uint64_t i = 0; i < p.u64("random"); ++i) {
                     CounterRng srng(ctx.seed(), i + 1);
                     worst = std::max(worst, binding_sum(random_sender(cp, srng, "random"), theta, cp).sum());
                   }
                   ctx.check("max p0+p1 over random senders", worst, Relation::Le, bound, 1e-9, Mode::Exact);
                 }});

    r.push_back({"hiding", "exact distance between the receiver's views of commitments to 0 and 1",
                 {{"lambda", "1"}, {"n", "2"}, {"p", "1"}, {"t", "1"}},
                 [](const Params& p, Context& ctx) {
                   const CommitmentParams cp{p.uint("lambda"), p.uint("n"), p.uint("p"), p.uint("t")};
                   const auto h = hiding_distance(cp);
                   ctx.record("trace distance", h.td);
                   ctx.record("reference p(p+t)^2/2^lambda",
                              cp.p * std::pow(cp.p + cp.t, 2.0) / std::ldexp(1.0, static_cast<int>(cp.lambda)));
                   ctx.holds("committed state is a density matrix", check_density(h.committed0).ok);
                   ctx.check("trace distance <= 1", h.td, Relation::Le, 1.0, 1e-12, Mode::Exact);
                 }});

    r.push_back({"hiding-lambda-decay", "hiding distance decreases with the key length at fixed n",
                 {{"n", "3"}, {"from", "1"}, {"to", "2"}, {"p", "1"}, {"t", "1"}},
                 [](const Params& p, Context& ctx) {
                   const auto n = p.uint("n");
                   const auto a = hiding_distance({p.uint("from"), n, p.uint("p"), p.uint("t")}).td;
                   const auto b = hiding_distance({p.uint("to"), n, p.uint("p"), p.uint("t")}).td;
                   ctx.record("td at from", a);
                   ctx.check("td at to < td at from", b, Relation::Lt, a, 0.0, Mode::Exact);
                 }});

    r.push_back({"ppt-chain", "partial-transpose difference norm and its bound chain",
                 {{"d", "6"}, {"t", "1"}},
                 [](const Params& p, Context& ctx) {
                   const auto d = p.u64("d");
                   const auto t = p.u64("t");
                   const auto c = ppt_diff_norm(d, t);
                   ctx.check("exact <= kneser sum", c.exact, Relation::Le, c.kneser_sum, 1e-8, Mode::Exact);
                   ctx.check("kneser sum = explicit expression", c.kneser_sum, Relation::Eq, c.middle, 1e-8, Mode::Exact);
                   ctx.check("explicit expression <= factorial bound", c.middle, Relation::Le, c.factorial_bound, 1e-12,
                             Mode::Exact);
                   ctx.check("factorial bound <= exp(2t^2/(d-2t+2)) - 1", c.factorial_bound, Relation::Le, c.series_bound,
                             1e-12, Mode::Exact);
                 }});

    r.push_back({"ppt-sandwich", "collision advantage below half the partial-transpose norm on true states",
                 {{"d", "4"}, {"t", "1"}, {"true_state_max_dim", "2048"}},
                 [](const Params& p, Context& ctx) {
                   const auto g = ppt_vs_haar_bound(p.u64("d"), p.u64("t"), p.u64("true_state_max_dim"));
                   ctx.record("half surrogate norm", g.half_surrogate_norm);
                   if (g.true_states_exact) {
                     ctx.record("TD(rho, rho~)", g.td_rho_surrogate);
                     ctx.record("TD(sigma, sigma~)", g.td_sigma_surrogate);
                     ctx.check("advantage <= half true norm", g.advantage, Relation::Le, g.half_true_norm, 1e-10,
                               Mode::Exact);
                   } else {
                     ctx.record("collision slack reference t^2/d", g.slack_reference);
                   }
                   ctx.check("advantage <= combined upper", g.advantage, Relation::Le, g.combined_upper, 1e-10,
                             Mode::Exact);
                 }});

    r.push_back({"locc-ratio", "advantage * d / t^2 over a grid (recorded)",
                 {{"d", "16,64,1024"}, {"t", "1,2,4"}},
                 [](const Params& p, Context& ctx) {
                   for (auto d : p.list("d"))
                     for (auto t : p.list("t"))
                       ctx.record("ratio d=" + std::to_string(d) + " t=" + std::to_string(t),
                                  locc_advantage_closed_form(d, t) * static_cast<double>(d) /
                                      static_cast<double>(t * t),
                                  Mode::Info);
                 }});

    // ------------------------------------------------------------ montecarlo
    r.push_back({"haar-moment-mc", "sampled mean of psi^t against the exact Haar moment",
                 {{"d", "2"}, {"t", "2"}, {"trials", "100000"}},
                 [](const Params& p, Context& ctx) {
                   const auto d = p.u64("d");
                   const auto t = p.uint("t");
                   const auto mc = detail::haar_moment_mc(d, t, p.u64("trials"), ctx.seed(), ctx.jobs());
                   ctx.check("max entry deviation", max_abs_diff(mc, haar_moment(d, t)), Relation::Le, 5e-3, 0.0,
                             Mode::Sampled);
                 }});

    r.push_back({"good-type-probability", "sampled fraction of good types against exhaustive enumeration",
                 {{"n", "2"}, {"m", "1"}, {"ell", "1"}, {"t", "3"}, {"trials", "100000"}},
                 [](const Params& p, Context& ctx) {
                   const PrefixParams pp{p.uint("n"), p.uint("m"), p.uint("ell"), p.uint("t")};
                   const auto r = prob_good_type(pp, p.u64("trials"), ctx.seed(), ctx.jobs());
                   ctx.record("exact", r.exact);
                   ctx.record("standard error", r.mc_stderr, Mode::Sampled);
                   ctx.check("|mc - exact| within 4 standard errors", std::abs(r.mc - r.exact), Relation::Le,
                             4.0 * std::max(r.mc_stderr, 1.0 / static_cast<double>(r.trials)), 0.0, Mode::Sampled);
                 }});

    r.push_back({"locc-advantage", "sampled collision advantage against the closed form",
                 {{"d", "4"}, {"t", "1"}, {"trials", "100000"}, {"materialized", "0"}},
                 [](const Params& p, Context& ctx) {
                   LoccParams lp{p.u64("d"), p.u64("t"), p.u64("trials"), ctx.seed(),
                                 p.u64("materialized") ? SamplerMode::Materialized : SamplerMode::Urn};
                   const double exact = locc_advantage_closed_form(lp.d, lp.t);
                   const auto r = locc_advantage_mc(lp, ctx.jobs());
                   ctx.record("closed form", exact);
                   ctx.record("estimate", r.estimate, Mode::Sampled);
                   ctx.record("standard error", r.stderr_, Mode::Sampled);
                   ctx.check("|estimate - closed form| within 4 standard errors", std::abs(r.estimate - exact),
                             Relation::Le, 4.0 * r.stderr_, 0.0, Mode::Sampled);
                 }});

    return r;
  }();
  return reg;
}

inline const Experiment* find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

struct SuiteEntry {
  std::string experiment;
  ParamMap params;
};

inline std::vector<std::string> suite_names() { return {"lemmas", "bounds", "montecarlo", "all"}; }

inline std::vector<SuiteEntry> suite_entries(const std::string& name) {
  const std::vector<SuiteEntry> lemmas = {
      {"haar-moment", {{"d", "2"}, {"t", "2"}}},
      {"haar-moment", {{"d", "2"}, {"t", "3"}}},
      {"haar-moment", {{"d", "4"}, {"t", "2"}}},
      {"type-basis", {{"d", "3"}, {"t", "3"}}},
      {"bipartition", {{"d", "4"}, {"size", "3"}, {"x", "1"}}},
      {"bipartition", {{"d", "5"}, {"size", "4"}, {"x", "2"}}},
      {"perm-split", {{"n", "2"}, {"m", "0"}, {"ell", "1"}, {"spectators", "1"}}},
      {"perm-split", {{"n", "2"}, {"m", "0"}, {"ell", "1"}, {"spectators", "2"}}},
      {"perm-split", {{"n", "2"}, {"m", "1"}, {"ell", "1"}, {"spectators", "1"}}},
      {"perm-split", {{"n", "2"}, {"m", "1"}, {"ell", "1"}, {"spectators", "2"}}},
      {"nice-t", {{"n", "2"}, {"m", "0"}, {"ell", "1"}, {"spectators", "1"}}},
      {"nice-t", {{"n", "2"}, {"m", "0"}, {"ell", "1"}, {"spectators", "2"}}},
      {"nice-t", {{"n", "2"}, {"m", "1"}, {"ell", "1"}, {"spectators", "1"}}},
      {"nice-t", {{"n", "2"}, {"m", "1"}, {"ell", "1"}, {"spectators", "2"}}},
      {"prfs-type", {{"lambda_prime", "1"}, {"suffix", "1"}, {"spectators", "0"}}},
      {"prfs-type", {{"lambda_prime", "1"}, {"suffix", "2"}, {"spectators", "0"}}},
      {"prfs-type", {{"lambda_prime", "2"}, {"suffix", "1"}, {"spectators", "1"}}},
      {"kneser", {{"v", "2"}, {"k", "1"}}},
      {"kneser", {{"v", "5"}, {"k", "2"}}},
      {"kneser", {{"v", "7"}, {"k", "3"}}},
      {"kneser-sweep", {}},
      {"locc-closed-form", {}},
  };
  const std::vector<SuiteEntry> bounds = {
      {"prs-hybrid", {{"lambda", "2"}, {"n", "2"}, {"ell", "1"}, {"t", "1"}}},
      {"prs-hybrid", {{"lambda", "3"}, {"n", "3"}, {"ell", "1"}, {"t", "1"}}},
      {"prs-hybrid", {{"lambda", "2"}, {"n", "2"}, {"ell", "0"}, {"t", "1"}}},
      {"prs-hybrid-decay", {}},
      {"prs-multikey", {}},
      {"prfs-hybrid", {}},
      {"rank-attack", {}},
      {"onewayness", {{"n", "1"}, {"m", "1"}}},
      {"onewayness", {{"n", "2"}, {"m", "1"}}},
      {"commitment-completeness", {{"p", "1"}}},
      {"commitment-completeness", {{"p", "2"}}},
      {"fidelity-bound", {{"lambda", "1"}, {"n", "2"}}},
      {"fidelity-bound", {{"lambda", "2"}, {"n", "3"}}},
      {"binding", {{"n", "2"}, {"p", "1"}}},
      {"binding", {{"n", "2"}, {"p", "2"}}},
      {"binding", {{"n", "3"}, {"p", "1"}}},
      {"binding", {{"n", "3"}, {"p", "2"}}},
      {"hiding", {{"lambda", "1"}, {"n", "2"}, {"p", "1"}, {"t", "0"}}},
      {"hiding", {{"lambda", "1"}, {"n", "2"}, {"p", "1"}, {"t", "1"}}},
      {"hiding-lambda-decay", {}},
      {"ppt-chain", {{"d", "6"}, {"t", "1"}}},
      {"ppt-chain", {{"d", "6"}, {"t", "2"}}},
      {"ppt-chain", {{"d", "8"}, {"t", "2"}}},
      {"ppt-sandwich", {{"d", "4"}, {"t", "1"}}},
      {"ppt-sandwich", {{"d", "6"}, {"t", "1"}}},
      {"locc-ratio", {}},
  };
  const std::vector<SuiteEntry> montecarlo = {
      {"haar-moment-mc", {{"d", "2"}, {"t", "2"}}},
      {"haar-moment-mc", {{"d", "4"}, {"t", "2"}}},
      {"good-type-probability", {}},
      {"locc-advantage", {{"d", "4"}, {"t", "1"}}},
      {"locc-advantage", {{"d", "16"}, {"t", "2"}}},
      {"locc-advantage", {{"d", "1024"}, {"t", "1"}}},
      {"locc-advantage", {{"d", "8"}, {"t", "2"}, {"materialized", "1"}}},
  };
  if (name == "lemmas") return lemmas;
  if (name == "bounds") return bounds;
  if (name == "montecarlo") return montecarlo;
  if (name == "all") {
    std::vector<SuiteEntry> all = lemmas;
    all.insert(all.end(), bounds.begin(), bounds.end());
    all.insert(all.end(), montecarlo.begin(), montecarlo.end());
    return all;
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown suite '" + name + "'");
}

}  // namespace chs::lab
