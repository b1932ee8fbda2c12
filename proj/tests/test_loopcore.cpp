#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <vector>

#include "loopon/loopcore.hpp"

using namespace loopon;

namespace {

// all configurations spanned by the face boundaries (plus optional extra
// generators), XOR-combined
std::vector<Bitset> span_configs(const Region& r,
                                 std::vector<Bitset> extra = {}) {
  std::vector<Bitset> gens;
  int nf = r.n_faces() - (r.is_torus() ? 1 : 0);  // torus faces have one relation
  for (int f = 0; f < nf; ++f) gens.push_back(r.face_boundary(f));
  for (auto& g : extra) gens.push_back(g);
  std::vector<Bitset> out{Bitset(r.n_edges())};
  for (const Bitset& g : gens) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] ^ g);
  }
  return out;
}

// parity of loop-edge crossings along the dual ray from f in +k direction
bool surrounds_ray_oracle(const Region& r, const Bitset& loop, FaceCoord f) {
  int crossings = 0;
  // walk until well past the region
  for (int step = 0; step < 64; ++step) {
    FaceCoord a{f.k + step, f.l}, b{f.k + step + 1, f.l};
    int e = r.edge_between(a, b);
    if (e >= 0 && loop.test(e)) ++crossings;
  }
  return crossings % 2 == 1;
}

int diameter_pairwise_oracle(const Region& r, const Loop& loop) {
  auto fs = bordered_faces(r, loop);
  int d = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j)
      d = std::max(d, face_distance(fs[i], fs[j]));
  return d;
}

// homology via displacement sums in thirds of a lattice step
std::pair<int, int> homology_disp_oracle(const Region& r, const Loop& loop) {
  long X = 0, Y = 0;
  for (std::size_t i = 0; i < loop.edges.size(); ++i) {
    const auto& ed = r.edge(loop.edges[i]);
    int sgn = loop.vertices[i] == ed.vup ? 1 : -1;
    X += sgn * ed.disp[0];
    Y += sgn * ed.disp[1];
  }
  REQUIRE(X % (3 * r.torus_k()) == 0);
  REQUIRE(Y % (3 * r.torus_l()) == 0);
  return {(int)(X / (3 * r.torus_k())), (int)(Y / (3 * r.torus_l()))};
}

}  // namespace

TEST_CASE("face boundary decomposes into one hexagon") {
  Region r = Region::ball({0, 0}, 1);
  LoopConfig w(r, r.face_boundary(r.face_id_checked({0, 0})));
  CHECK(w.is_even());
  auto loops = w.decompose();
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].length() == 6);
  std::set<int> vs(loops[0].vertices.begin(), loops[0].vertices.end());
  CHECK(vs.size() == 6);
}

TEST_CASE("domain boundary is one loop") {
  for (int rad : {1, 2, 3}) {
    Region r = Region::ball({0, 0}, rad);
    LoopConfig w(r, r.boundary_edges());
    CHECK(w.is_even());
    auto loops = w.decompose();
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].length() == (int)r.boundary_edges().count());
  }
}

TEST_CASE("span of face boundaries is exactly the even subgraphs, hexagon") {
  Region r = Region::ball({0, 0}, 0);
  auto span = span_configs(r);
  std::set<Bitset> span_set(span.begin(), span.end());
  CHECK(span_set.size() == 2);
  // brute force over all 64 subsets of the six edges
  int even_count = 0;
  for (unsigned m = 0; m < 64; ++m) {
    Bitset b(6, m);
    if (LoopConfig(r, b).is_even()) {
      ++even_count;
      CHECK(span_set.count(b) == 1);
    }
  }
  CHECK(even_count == 2);
}

TEST_CASE("even subgraph count on small regions") {
  // cycle space dimension: faces for a domain, faces+1 for a torus
  Region b1 = Region::ball({0, 0}, 1);
  CHECK(span_configs(b1).size() == 128);
  std::set<Bitset> distinct;
  for (auto& c : span_configs(b1)) {
    distinct.insert(c);
    CHECK(LoopConfig(b1, c).is_even());
  }
  CHECK(distinct.size() == 128);

  Region t = Region::torus(2, 2);
  auto tspan = span_configs(t, {t.generator(0), t.generator(1)});
  std::set<Bitset> tdistinct(tspan.begin(), tspan.end());
  CHECK(tdistinct.size() == 32);
  for (auto& c : tspan) CHECK(LoopConfig(t, c).is_even());
}

TEST_CASE("odd configurations rejected") {
  Region r = Region::ball({0, 0}, 0);
  Bitset one(6);
  one.set(0);
  LoopConfig w(r, one);
  CHECK(!w.is_even());
  CHECK_THROWS(w.require_even());
  CHECK_THROWS(w.decompose());
}

TEST_CASE("symmetric difference") {
  Region r = Region::ball({0, 0}, 1);
  LoopConfig a(r, r.face_boundary(0));
  LoopConfig b(r, r.face_boundary(1));
  LoopConfig c = a.symmetric_difference(b);
  CHECK(c.edges() == (r.face_boundary(0) ^ r.face_boundary(1)));
  CHECK(c.symmetric_difference(b).edges() == a.edges());
  CHECK(a.symmetric_difference(a).edges().none());
}

TEST_CASE("surrounds against ray parity oracle") {
  Region r = Region::ball({0, 0}, 1);
  for (const Bitset& cfg : span_configs(r)) {
    LoopConfig w(r, cfg);
    for (const Loop& loop : w.decompose()) {
      Bitset mask(r.n_edges());
      for (int e : loop.edges) mask.set(e);
      for (int f = 0; f < r.n_faces(); ++f)
        CHECK(surrounds(r, loop, r.face(f)) ==
              surrounds_ray_oracle(r, mask, r.face(f)));
    }
  }
}

TEST_CASE("surrounds basics") {
  Region r = Region::ball({0, 0}, 1);
  int c = r.face_id_checked({0, 0});
  LoopConfig hexagon(r, r.face_boundary(c));
  auto loops = hexagon.decompose();
  REQUIRE(loops.size() == 1);
  CHECK(surrounds(r, loops[0], {0, 0}));
  CHECK(!surrounds(r, loops[0], {1, 0}));
  LoopConfig rim(r, r.boundary_edges());
  auto rim_loops = rim.decompose();
  REQUIRE(rim_loops.size() == 1);
  for (int f = 0; f < r.n_faces(); ++f)
    CHECK(surrounds(r, rim_loops[0], r.face(f)));
  CHECK_THROWS(surrounds(r, rim_loops[0], {9, 9}));
}

TEST_CASE("loop diameter") {
  Region r = Region::ball({0, 0}, 2);
  LoopConfig hexagon(r, r.face_boundary(r.face_id_checked({0, 0})));
  auto loops = hexagon.decompose();
  CHECK(loop_diameter(r, loops[0]) == 2);
  LoopConfig rim(r, r.boundary_edges());
  CHECK(loop_diameter(r, rim.decompose()[0]) ==
        diameter_pairwise_oracle(r, rim.decompose()[0]));

  Region b1 = Region::ball({0, 0}, 1);
  for (const Bitset& cfg : span_configs(b1))
    for (const Loop& loop : LoopConfig(b1, cfg).decompose())
      CHECK(loop_diameter(b1, loop) == diameter_pairwise_oracle(b1, loop));
}

TEST_CASE("homology classes on the torus") {
  Region t = Region::torus(2, 2);
  auto g0 = LoopConfig(t, t.generator(0)).decompose();
  auto g1 = LoopConfig(t, t.generator(1)).decompose();
  REQUIRE(g0.size() == 1);
  REQUIRE(g1.size() == 1);
  auto h0 = homology_class(t, g0[0]);
  auto h1 = homology_class(t, g1[0]);
  CHECK(std::abs(h0.first) == 1);
  CHECK(h0.second == 0);
  CHECK(h1.first == 0);
  CHECK(std::abs(h1.second) == 1);
  LoopConfig face(t, t.face_boundary(0));
  CHECK(homology_class(t, face.decompose()[0]) == std::pair{0, 0});

  for (auto [k, l] : {std::pair{2, 2}, {3, 4}}) {
    Region tor = Region::torus(k, l);
    for (const Bitset& cfg :
         span_configs(tor, {tor.generator(0), tor.generator(1)}))
      for (const Loop& loop : LoopConfig(tor, cfg).decompose())
        CHECK(homology_class(tor, loop) == homology_disp_oracle(tor, loop));
  }
}

TEST_CASE("spin representation round trip on domains") {
  for (int rad : {0, 1}) {
    Region r = Region::ball({0, 0}, rad);
    for (const Bitset& cfg : span_configs(r)) {
      LoopConfig w(r, cfg);
      SpinConfig s = spin_rep(w);
      CHECK(domain_walls(s) == cfg);
    }
  }
}

TEST_CASE("spin representation on the torus") {
  Region t = Region::torus(2, 2);
  for (const Bitset& cfg : span_configs(t)) {
    LoopConfig w(t, cfg);
    SpinConfig s = spin_rep(w);  // contractible: fine
    CHECK(domain_walls(s) == cfg);
  }
  CHECK_THROWS_AS(spin_rep(LoopConfig(t, t.generator(0))),
                  NoSpinRepresentation);
  CHECK_THROWS_AS(spin_rep(LoopConfig(t, t.generator(1))),
                  NoSpinRepresentation);
}

TEST_CASE("loop config serialization") {
  Region r = Region::ball({0, 0}, 1);
  LoopConfig w(r, r.boundary_edges());
  LoopConfig back = LoopConfig::from_text(w.to_text(), r);
  CHECK(back.edges() == w.edges());
  CHECK_THROWS(LoopConfig::from_text("nope", r));
  Region t = Region::torus(2, 2);
  CHECK_THROWS(LoopConfig::from_text(w.to_text(), t));  // size mismatch
}
