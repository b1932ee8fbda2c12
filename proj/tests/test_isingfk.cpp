#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "loopon/isingfk.hpp"
#include "loopon/stats.hpp"

using namespace loopon;

TEST_CASE("coupling strength and edge weight are inverse bijections") {
  for (double x : {0.1, 0.5, 1.0, 1.5, std::sqrt(3.0)})
    CHECK(x_from_beta(beta_from_x(x)) == doctest::Approx(x).epsilon(1e-14));
  CHECK(beta_from_x(1.0) == 0.0);
  CHECK(beta_from_x(std::sqrt(3.0)) ==
        doctest::Approx(-0.25 * std::log(3.0)));
  CHECK_THROWS(beta_from_x(0.0));
}

TEST_CASE("dual graph structure") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  CHECK(g.n_vertices() == 7);
  CHECK(g.n_primal() == 6);
  CHECK(g.n_edges() == 12);  // six spokes plus the outer ring

  Region b1 = Region::ball({0, 0}, 1);
  DualGraph g1(b1);
  CHECK(g1.n_vertices() == 19);
  CHECK(g1.n_edges() == b1.n_edges() + 12);
  // primal pairing: edge i separates the faces of primal edge i
  for (int e = 0; e < g1.n_primal(); ++e) {
    auto [a, b] = g1.ends(e);
    CHECK(a == b1.edge_dual_id(e, 0));
    CHECK(b == b1.edge_dual_id(e, 1));
  }
  CHECK_THROWS(DualGraph(Region::torus(2, 2)));
}

TEST_CASE("cluster counts") {
  Region b1 = Region::ball({0, 0}, 1);
  DualGraph g(b1);
  Bitset none = g.empty_edge_set();
  CHECK(free_cluster_count(g, none) == g.n_vertices());
  CHECK(wired_cluster_count(g, none) == b1.n_faces() + 1);
  Bitset all = g.empty_edge_set();
  all.set();
  CHECK(free_cluster_count(g, all) == 1);
  CHECK(wired_cluster_count(g, all) == 1);

  int boundary = g.n_vertices() - b1.n_faces();
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Bitset eta = g.empty_edge_set();
    for (int e = 0; e < g.n_edges(); ++e)
      if (rng() & 1u) eta.set(e);
    int k0 = free_cluster_count(g, eta), k1 = wired_cluster_count(g, eta);
    CHECK(k1 <= k0);
    CHECK(k0 <= k1 + boundary - 1);
  }
}

TEST_CASE("ferromagnetic cluster weight endpoints") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  Rational x{1, 2};
  CHECK(fk_weight_ferro(g, g.empty_edge_set(), x) == Rational(4));  // 2^{1+1}
  Bitset all = g.empty_edge_set();
  all.set();
  CHECK(fk_weight_ferro(g, all, x) == ipow(Rational(1), 12) * 2);
}

TEST_CASE("proper colorability with pinned outer layer") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  SpinConfig plus = all_plus_spins(hex);
  CHECK(is_bipartite_with_boundary(g, g.empty_edge_set(), plus));

  // one spoke: the center takes the opposite sign
  Bitset spoke = g.empty_edge_set();
  spoke.set(0);
  CHECK(is_bipartite_with_boundary(g, spoke, plus));

  // one ring edge joins two pinned equal spins
  Bitset rim = g.empty_edge_set();
  rim.set(g.n_primal());
  CHECK(!is_bipartite_with_boundary(g, rim, plus));

  // exhaustive cross-check against the pinned spin enumeration
  auto sat = detail::constraint_masks(g, plus, true, nullptr, 1u << 22);
  for (std::uint64_t m = 0; m < (1u << g.n_edges()); ++m) {
    bool feasible = false;
    for (std::uint64_t s : sat)
      if ((m & ~s) == 0) feasible = true;
    CHECK(is_bipartite_with_boundary(g, Bitset(g.n_edges(), m), plus) ==
          feasible);
  }
}

TEST_CASE("spin pair sum and weight") {
  Region hex = Region::ball({0, 0}, 0);
  SpinConfig plus = all_plus_spins(hex);
  CHECK(pair_sum(hex, plus) == 6);
  CHECK(ising_weight(hex, plus, 0.7) == doctest::Approx(std::exp(0.7 * 6)));
  CHECK(ising_weight(hex, plus, 0.0) == 1.0);

  std::mt19937_64 rng(11);
  Region b1 = Region::ball({0, 0}, 1);
  for (int t = 0; t < 50; ++t) {
    SpinConfig s = all_plus_spins(b1);
    for (auto& v : s.s) v = rng() & 1u ? 1 : -1;
    int expect = 0;
    for (int e = 0; e < b1.n_edges(); ++e)
      expect += s.spin(b1.edge_dual_id(e, 0)) * s.spin(b1.edge_dual_id(e, 1));
    CHECK(pair_sum(b1, s) == expect);
  }
}

TEST_CASE("spin enumeration pushes forward onto the loop classes") {
  Region hex = Region::ball({0, 0}, 0);
  SpinConfig plus = all_plus_spins(hex);
  CHECK(loop_ising_equivalence_check(hex, Rational(1, 2), plus).ok);
  CHECK(loop_ising_equivalence_check(hex, Rational(1), plus).ok);
  CHECK(loop_ising_equivalence_check(hex, Quad::sqrt3(), plus).ok);

  Region b1 = Region::ball({0, 0}, 1);
  auto rep = loop_ising_equivalence_check(b1, 0.6, all_plus_spins(b1));
  CHECK(rep.ok);
  CHECK(!rep.exact);
  CHECK(rep.cases == 128);
  CHECK(rep.max_rel_error < 1e-9);

  // mixed pinned boundary from an existing configuration's spins
  SpinConfig tau = spin_rep(LoopConfig(b1, b1.face_boundary(1)));
  CHECK(loop_ising_equivalence_check(b1, Rational(2, 3), tau).ok);
}

TEST_CASE("spin and defect marginals agree with the closed forms") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  SpinConfig plus = all_plus_spins(hex);

  for (Rational x : {Rational(1, 2), Rational(2, 3)}) {
    auto rep = es_consistency_check(g, x, plus, false);
    CHECK(rep.ok);
    CHECK(rep.exact);
    CHECK(rep.cases == 4096);
  }
  // critical edge weight 1/sqrt(3) = sqrt(3)/3, exactly
  CHECK(es_consistency_check(g, Quad{0, Quad::Rat(1, 3)}, plus, false).ok);
  CHECK(es_consistency_check(g, Quad{1, 0}, plus, false).ok);

  for (Rational x : {Rational(3, 2), Rational(3)})
    CHECK(es_consistency_check(g, x, plus, true).ok);
  CHECK(es_consistency_check(g, Quad::sqrt3(), plus, true).ok);

  auto rep = es_consistency_check(g, std::sqrt(3.0), plus, true);
  CHECK(rep.ok);
  CHECK(rep.max_rel_error < 1e-9);
}

TEST_CASE("disagreement marginal is the conditioned agreement marginal") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  SpinConfig plus = all_plus_spins(hex);
  for (Rational x : {Rational(3, 2), Rational(2)}) {
    auto rep = antiferro_ferro_relation_check(g, x, plus);
    CHECK(rep.ok);
    CHECK(rep.exact);
  }
  auto rep = antiferro_ferro_relation_check(g, Quad::sqrt3(), plus);
  CHECK(rep.ok);
  CHECK(rep.exact);

  // nontrivial pinned boundary
  SpinConfig tau = spin_rep(LoopConfig(hex, hex.face_boundary(0)));
  CHECK(antiferro_ferro_relation_check(g, Rational(2), tau).ok);
}

TEST_CASE("alternating resampler reproduces the loop marginal, hexagon") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  SpinConfig plus = all_plus_spins(hex);

  struct Setting {
    double x, expect;
  };
  double s3 = std::pow(std::sqrt(3.0), 6);
  for (auto [x, expect] : {Setting{0.5, std::pow(0.5, 6) / (1 + std::pow(0.5, 6))},
                           Setting{1.0, 0.5},
                           Setting{std::sqrt(3.0), s3 / (1 + s3)}}) {
    EsChain chain(g, x, plus, 99);
    chain.burnin();
    int hits = 0, samples = 20000;
    for (int i = 0; i < samples; ++i) {
      chain.sweep();
      if (domain_walls(chain.sigma()).any()) ++hits;
    }
    double est = (double)hits / samples;
    double sigma = std::sqrt(expect * (1 - expect) / samples) + 1e-9;
    CHECK(std::abs(est - expect) < 5 * sigma);
  }
}

TEST_CASE("defect inclusion rate on satisfied pairs") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  // ring edges join pinned equal spins: agreement defects fire at rate 1-x
  EsChain chain(g, 0.5, all_plus_spins(hex), 4);
  chain.burnin();
  int hits = 0, samples = 20000;
  for (int i = 0; i < samples; ++i) {
    chain.sweep();
    if (chain.eta().test(g.n_primal())) ++hits;
  }
  CHECK(std::abs(hits / (double)samples - 0.5) < 0.02);
}

TEST_CASE("resampler at x = 1 gives independent fair spins") {
  Region hex = Region::ball({0, 0}, 0);
  DualGraph g(hex);
  EsChain chain(g, 1.0, all_plus_spins(hex), 7);
  int plus_count = 0, samples = 20000;
  for (int i = 0; i < samples; ++i) {
    chain.sweep();
    CHECK(chain.eta().none());
    if (chain.sigma().spin(0) == 1) ++plus_count;
  }
  CHECK(std::abs(plus_count / (double)samples - 0.5) < 0.02);
}

namespace {

bool has_surrounding(const Region& r, const LoopConfig& w, int k) {
  for (const Loop& loop : w.decompose())
    if (loop_diameter(r, loop) >= k && surrounds(r, loop, {0, 0})) return true;
  return false;
}

}  // namespace

TEST_CASE("flip experiment matches exact enumeration at the smallest scale") {
  // exact surrounding probability on the radius-2 ball at edge weight
  // sqrt(3), via the loop measure with a power table
  Region r = Region::ball({0, 0}, 2);
  BoundaryCondition bc = BoundaryCondition::whole(r);
  std::vector<Quad> pow_x(r.n_edges() + 1, Quad{1, 0});
  for (int i = 1; i <= r.n_edges(); ++i)
    pow_x[i] = pow_x[i - 1] * Quad::sqrt3();
  Quad num{0}, den{0};
  for_each_config(bc, [&](const LoopConfig& w) {
    const Quad& weight = pow_x[(int)w.edges().count()];
    den += weight;
    if (has_surrounding(r, w, 1)) num += weight;
  });
  double exact = (double)(num / den);
  CHECK(exact > 0.01);

  auto rep = antiferro_xor_experiment(1, std::sqrt(3.0), 123, 2000);
  CHECK(rep.implication_failures == 0);
  CHECK(rep.circuit_found > 0);
  double sigma = std::sqrt(exact * (1 - exact) / rep.trials);
  CHECK(std::abs(rep.surround_freq() - exact) < 5 * sigma + 0.02);
}

TEST_CASE("surrounding walls have constant opposite spins on both sides") {
  Region r = Region::ball({0, 0}, 4);
  DualGraph g(r);
  EsChain chain(g, std::sqrt(3.0), all_plus_spins(r), 21);
  chain.burnin();
  int inspected = 0;
  for (int t = 0; t < 100 && inspected < 10; ++t) {
    chain.sweep();
    LoopConfig w(r, domain_walls(chain.sigma()));
    for (const Loop& loop : w.decompose()) {
      if (!surrounds(r, loop, {0, 0})) continue;
      ++inspected;
      int inner_spin = 0, outer_spin = 0;
      for (FaceCoord f : bordered_faces(r, loop)) {
        int d = r.dual_id(f);
        if (r.dual_is_inner(d) && surrounds(r, loop, f)) {
          if (!inner_spin) inner_spin = chain.sigma().spin(d);
          CHECK(chain.sigma().spin(d) == inner_spin);
        } else {
          if (!outer_spin) outer_spin = chain.sigma().spin(d);
          CHECK(chain.sigma().spin(d) == outer_spin);
        }
      }
      CHECK(inner_spin == -outer_spin);
    }
  }
  CHECK(inspected > 0);
}

TEST_CASE("connection profile starts at one and decreases") {
  Region r = Region::ball({0, 0}, 2);
  DualGraph g(r);
  auto prof = connection_profile(g, 0.8, 2000, 31);
  CHECK(prof[0] == 1.0);
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] <= prof[i - 1]);
}

TEST_CASE("proportion interval and chi-square helpers") {
  Proportion p{480, 1000};
  CHECK(p.estimate() == doctest::Approx(0.48));
  CHECK(p.wilson_lower(3) < 0.48);
  CHECK(p.wilson_upper(3) > 0.48);
  CHECK(p.wilson_lower(3) > 0.43);

  CHECK(normal_quantile(0.999) == doctest::Approx(3.0902).epsilon(1e-3));
  CHECK(chi_square_quantile(1, 0.001) == doctest::Approx(10.828).epsilon(5e-3));
  CHECK(chi_square_quantile(10, 0.001) == doctest::Approx(29.59).epsilon(5e-3));

  // simulated fair coin passes against the true law
  std::mt19937_64 rng(3);
  std::vector<long> counts(2, 0);
  for (int i = 0; i < 10000; ++i) ++counts[rng() & 1u];
  auto res = chi_square_test({0.5, 0.5}, counts);
  CHECK(res.df == 1);
  CHECK(res.pass);
  // grossly wrong law fails
  CHECK(!chi_square_test({0.9, 0.1}, counts).pass);
}
