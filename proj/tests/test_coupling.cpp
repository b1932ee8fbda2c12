#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "loopon/coupling.hpp"

using namespace loopon;

namespace {

Bitset loop_mask(const Region& r, const Loop& loop) {
  Bitset m(r.n_edges());
  for (int e : loop.edges) m.set(e);
  return m;
}

// every simple cycle is itself an even subgraph, so enumerating the even
// subgraphs and keeping single loops lists all simple cycles
std::vector<Bitset> all_simple_cycles(const Region& r) {
  std::vector<Bitset> out;
  for_each_config(BoundaryCondition::whole(r), [&](const LoopConfig& w) {
    auto loops = w.decompose();
    if (loops.size() == 1 && loop_mask(r, loops[0]) == w.edges())
      out.push_back(w.edges());
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<int> surrounded_faces(const Region& r, const Bitset& cycle) {
  std::set<int> out;
  for (int f = 0; f < r.n_faces(); ++f)
    if (surrounds(r, cycle, r.face(f))) out.insert(f);
  return out;
}

}  // namespace

TEST_CASE("color_loops basics") {
  Region r = Region::ball({0, 0}, 1);
  BoundaryCondition bc = BoundaryCondition::whole(r);
  std::mt19937_64 rng(5);
  LoopConfig empty(r);
  ColoredConfig c = color_loops(empty, bc, 2.0, rng);
  CHECK(c.red.edges().none());
  CHECK(c.blue.edges().none());

  LoopConfig rim(r, r.boundary_edges());
  for (int i = 0; i < 20; ++i) {
    ColoredConfig cc = color_loops(rim, bc, 1.0, rng);
    CHECK(cc.blue.edges().none());
    CHECK(cc.red.edges() == rim.edges());
  }
  int blue = 0, trials = 4000;
  for (int i = 0; i < trials; ++i)
    if (color_loops(rim, bc, 2.0, rng).blue.edges().any()) ++blue;
  CHECK(std::abs(blue / (double)trials - 0.5) < 0.04);
  CHECK_THROWS(color_loops(rim, bc, 0.5, rng));
}

TEST_CASE("sample_eta basics") {
  Region r = Region::ball({0, 0}, 1);
  BoundaryCondition bc = BoundaryCondition::whole(r);
  std::mt19937_64 rng(6);
  LoopConfig rim(r, r.boundary_edges());
  CHECK(sample_eta(rim, bc, 1.0, rng).none());
  double total = 0;
  int trials = 2000;
  int nfree = r.n_edges() - (int)rim.edges().count();
  for (int i = 0; i < trials; ++i) {
    Bitset eta = sample_eta(rim, bc, 0.5, rng);
    CHECK((eta & rim.edges()).none());
    total += (double)eta.count();
  }
  double mean = total / trials, expect = nfree / 2.0;
  CHECK(std::abs(mean - expect) < 3 * std::sqrt(nfree * 0.25 / trials) + 0.2);
  CHECK_THROWS(sample_eta(rim, bc, 1.5, rng));
}

TEST_CASE("triple weight") {
  Region r = Region::ball({0, 0}, 1);
  BoundaryCondition bc = BoundaryCondition::whole(r);
  CoherentTriple empty{LoopConfig(r), LoopConfig(r), Bitset(r.n_edges())};
  CHECK(triple_weight<Rational>(bc, empty, 1, 1) == 1);  // 0^0 convention

  CoherentTriple blue_face{LoopConfig(r),
                           LoopConfig(r, r.face_boundary(0)),
                           Bitset(r.n_edges())};
  CHECK(triple_weight<Rational>(bc, blue_face, 1, Rational(1, 2)) == 0);
  // independent evaluation
  Bitset eta(r.n_edges());
  eta.set(0);
  CoherentTriple t{LoopConfig(r), LoopConfig(r, r.face_boundary(3)), eta};
  if (t.blue.edges().test(0)) eta.reset(0);  // keep eta off the loops
  t.eta = eta;
  validate_triple(bc, t);
  Rational n{3, 2}, x{4, 5};
  Rational expect = (n - 1) * ipow(Rational(1 / x - 1), (int)t.eta.count());
  CHECK(triple_weight<Rational>(bc, t, n, x) == expect);
}

TEST_CASE("triple validation") {
  Region r = Region::ball({0, 0}, 1);
  BoundaryCondition bc = BoundaryCondition::whole(r);
  LoopConfig f0(r, r.face_boundary(0));
  CHECK_THROWS(validate_colored({f0, f0}));  // overlap
  Bitset bad = r.face_boundary(0);
  CoherentTriple t{f0, LoopConfig(r), bad};
  CHECK_THROWS(validate_triple(bc, t));  // eta meets loops
}

TEST_CASE("marginal identity exact on hexagon and torus") {
  Region hex = Region::ball({0, 0}, 0);
  auto rep = marginal_check<Rational>(BoundaryCondition::whole(hex),
                                      Rational(3, 2), Rational(4, 5), true,
                                      true);
  CHECK(rep.exact);
  CHECK(rep.max_rel_error == 0.0);
  CHECK(rep.groups == 2);

  Region t = Region::torus(2, 2);
  auto trep = marginal_check<Rational>(BoundaryCondition::whole(t), Rational(2),
                                       Rational(1), false);
  CHECK(trep.exact);
  CHECK(trep.max_rel_error == 0.0);
  CHECK(trep.groups == 32);
}

TEST_CASE("marginal identity in floating point on the radius-1 ball") {
  Region r = Region::ball({0, 0}, 1);
  auto rep =
      marginal_check<double>(BoundaryCondition::whole(r), 1.5, 0.8, true);
  CHECK(rep.max_rel_error < 1e-10);
  auto uniform =
      marginal_check<double>(BoundaryCondition::whole(r), 1.0, 1.0, true);
  CHECK(uniform.max_rel_error < 1e-12);
}

TEST_CASE("defect-free circuit, trivial cases") {
  Region r = Region::ball({0, 0}, 2);
  std::vector<int> protect{r.face_id_checked({0, 0})};
  Bitset none_blocked(r.n_edges());
  auto c = find_defect_free_circuit(r, none_blocked, protect);
  REQUIRE(c.has_value());
  CHECK(loop_mask(r, c->loop) == r.boundary_edges());  // outermost

  Bitset all_blocked(r.n_edges());
  all_blocked.set();
  CHECK(!find_defect_free_circuit(r, all_blocked, protect).has_value());
}

TEST_CASE("defect-free circuit vs brute-force cycle search") {
  Region r = Region::ball({0, 0}, 1);
  auto cycles = all_simple_cycles(r);
  std::vector<int> protect{r.face_id_checked({0, 0})};
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 150; ++iter) {
    Bitset blocked(r.n_edges());
    for (int e = 0; e < r.n_edges(); ++e)
      if (rng() % 3 == 0) blocked.set(e);
    auto found = find_defect_free_circuit(r, blocked, protect);
    // oracle: any simple cycle avoiding blocked and surrounding the center
    std::vector<Bitset> qualifying;
    for (const Bitset& cyc : cycles)
      if ((cyc & blocked).none() && surrounds(r, cyc, {0, 0}))
        qualifying.push_back(cyc);
    CHECK(found.has_value() == !qualifying.empty());
    if (found) {
      Bitset gmask = loop_mask(r, found->loop);
      CHECK((gmask & blocked).none());
      CHECK(surrounds(r, gmask, {0, 0}));
      // outermost: every qualifying cycle fits inside it
      auto outer = surrounded_faces(r, gmask);
      for (const Bitset& cyc : qualifying) {
        for (int f : surrounded_faces(r, cyc)) CHECK(outer.count(f) == 1);
      }
    }
  }
}

TEST_CASE("defect-free circuit with restricted search region") {
  Region r = Region::ball({0, 0}, 2);
  std::vector<int> protect, search;
  for (int f = 0; f < r.n_faces(); ++f) {
    if (face_distance({0, 0}, r.face(f)) == 0) protect.push_back(f);
    if (face_distance({0, 0}, r.face(f)) <= 1) search.push_back(f);
  }
  Bitset blocked(r.n_edges());
  auto c = find_defect_free_circuit(r, blocked, protect, &search);
  REQUIRE(c.has_value());
  // circuit edges border only search faces
  for (int e : c->loop.edges) {
    const auto& ed = r.edge(e);
    bool ok = false;
    for (int f : search)
      if (ed.fa_id == f || ed.fb_id == f) ok = true;
    CHECK(ok);
  }
  CHECK_THROWS(find_defect_free_circuit(r, blocked, {0}, &protect));
}

TEST_CASE("xor_resample invariants") {
  Region r = Region::ball({0, 0}, 2);
  BoundaryCondition bc = BoundaryCondition::whole(r);
  std::mt19937_64 rng(21);
  Rational n{3, 2}, x{4, 5};
  int found_cases = 0;
  for (int iter = 0; iter < 200; ++iter) {
    LoopConfig w = random_even_subgraph(bc, rng);
    ColoredConfig cc = color_loops(w, bc, 1.5, rng);
    Bitset eta = sample_eta(w, bc, 0.8, rng);
    CoherentTriple t{cc.red, cc.blue, eta};
    validate_triple(bc, t);
    auto gamma = find_defect_free_circuit(r, t.blue.edges() | t.eta,
                                          {r.face_id_checked({0, 0})});
    if (!gamma) continue;
    ++found_cases;
    CoherentTriple t2 = xor_resample(bc, t, *gamma);
    CHECK(triple_weight<Rational>(bc, t2, n, x) ==
          triple_weight<Rational>(bc, t, n, x));
    CoherentTriple t3 = xor_resample(bc, t2, *gamma);  // involution
    CHECK(t3.red.edges() == t.red.edges());
  }
  CHECK(found_cases > 50);
}

TEST_CASE("xor_resample rejects circuits through the defects") {
  Region r = Region::ball({0, 0}, 1);
  BoundaryCondition bc = BoundaryCondition::whole(r);
  LoopConfig blue(r, r.face_boundary(0));
  CoherentTriple t{LoopConfig(r), blue, Bitset(r.n_edges())};
  Circuit gamma{LoopConfig(r, r.face_boundary(0)).decompose()[0]};
  CHECK_THROWS(xor_resample(bc, t, gamma));
}

TEST_CASE("monotonicity of red over blue") {
  Region t = Region::torus(2, 2);
  BoundaryCondition bc = BoundaryCondition::whole(t);
  auto any_edge = [](const Bitset& b) { return b.any(); };
  auto rep = monotonicity_check(bc, Rational(3, 2), any_edge);
  CHECK(rep.holds);
  CHECK(rep.red_prob > rep.blue_prob);

  auto rep1 = monotonicity_check(bc, Rational(1), any_edge);
  CHECK(rep1.blue_prob == 0);
  CHECK(rep1.holds);

  auto full = monotonicity_check(bc, Rational(3, 2),
                                 [](const Bitset&) { return true; });
  CHECK(full.red_prob == full.blue_prob);

  CHECK_THROWS(monotonicity_check(bc, Rational(3, 2), [](const Bitset& b) {
    return b.none();  // decreasing, not increasing
  }));
}

TEST_CASE("torus duality witness, exhaustive on torus(2,2)") {
  Region t = Region::torus(2, 2);
  BoundaryCondition bc = BoundaryCondition::whole(t);
  int cases = 0;
  for_each_config(bc, [&](const LoopConfig& w) {
    auto loops = w.decompose();
    for (std::uint32_t mask = 0; mask < (1u << loops.size()); ++mask) {
      ColoredConfig cc{LoopConfig(t), LoopConfig(t)};
      for (std::size_t i = 0; i < loops.size(); ++i) {
        Bitset& tgt = (mask >> i & 1u) ? cc.blue.edges() : cc.red.edges();
        for (int e : loops[i].edges) tgt.set(e);
      }
      DualityWitness wit = torus_duality_check(cc);
      ++cases;
      CHECK(wit.found);
      if (wit.found) {
        auto h = homology_class(t, wit.circuit);
        CHECK((h.first != 0 || h.second != 0));
        Bitset cmask = loop_mask(t, wit.circuit);
        const Bitset& avoid =
            wit.blue_free ? cc.blue.edges() : cc.red.edges();
        CHECK((cmask & avoid).none());
      }
    }
  });
  CHECK(cases >= 32);
}

TEST_CASE("noncontractible search respects avoid set") {
  Region t = Region::torus(3, 3);
  Bitset all(t.n_edges());
  all.set();
  CHECK(!noncontractible_avoiding(t, all).has_value());
  Bitset none(t.n_edges());
  auto loop = noncontractible_avoiding(t, none);
  REQUIRE(loop.has_value());
  auto h = homology_class(t, *loop);
  CHECK((h.first != 0 || h.second != 0));
}
