#include "loopon/coupling.hpp"

#include <algorithm>
#include <deque>

namespace loopon {

void validate_colored(const ColoredConfig& c) {
  if (&c.red.region() != &c.blue.region())
    throw std::invalid_argument("colored config: region mismatch");
  if ((c.red.edges() & c.blue.edges()).any())
    throw std::invalid_argument("colored config: overlapping colors");
  c.red.require_even();
  c.blue.require_even();
  c.red.symmetric_difference(c.blue).require_even();
}

void validate_triple(const BoundaryCondition& bc, const CoherentTriple& t) {
  validate_colored({t.red, t.blue});
  Bitset omega = t.red.edges() | t.blue.edges();
  if ((t.eta & omega).any())
    throw std::invalid_argument("triple: eta meets the loops");
  if ((t.eta & ~bc.inner_edges()).any())
    throw std::invalid_argument("triple: eta leaves the sub-domain");
}

ColoredConfig color_loops(const LoopConfig& omega, const BoundaryCondition& bc,
                          double n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("color_loops: n must be at least 1");
  const Region& r = omega.region();
  ColoredConfig out{LoopConfig(r), LoopConfig(r)};
  std::uniform_real_distribution<> unif(0, 1);
  for (const Loop& loop : omega.decompose()) {
    bool blue = bc.loop_active(loop) && unif(rng) < (n - 1) / n;
    Bitset& target = blue ? out.blue.edges() : out.red.edges();
    for (int e : loop.edges) target.set(e);
  }
  return out;
}

Bitset sample_eta(const LoopConfig& omega, const BoundaryCondition& bc,
                  double x, std::mt19937_64& rng) {
  if (!(x > 0) || x > 1)
    throw std::invalid_argument("sample_eta: x must lie in (0,1]");
  Bitset eta(omega.region().n_edges());
  std::uniform_real_distribution<> unif(0, 1);
  Bitset free = bc.inner_edges() & ~omega.edges();
  for (auto e = free.find_first(); e != Bitset::npos; e = free.find_next(e))
    if (unif(rng) < 1 - x) eta.set(e);
  return eta;
}

template <class S>
MarginalReport marginal_check(const BoundaryCondition& bc, const S& n,
                              const S& x, bool with_eta, bool enumerate_eta) {
  std::vector<S> grouped, target;
  for_each_config(bc, [&](const LoopConfig& w) {
    auto loops = w.decompose();
    std::vector<const Loop*> active;
    for (const Loop& loop : loops)
      if (bc.loop_active(loop)) active.push_back(&loop);
    int m_omega = bc.edge_count(w.edges());

    // sum over colorings of the active loops
    S color_sum{0};
    for (std::uint32_t mask = 0; mask < (1u << active.size()); ++mask)
      color_sum += ipow(S(n - S{1}), std::popcount(mask));

    // sum over defect sets inside the sub-domain off the loops
    S eta_sum{1};
    if (with_eta) {
      int free = (int)(bc.inner_edges() & ~w.edges()).count();
      if (enumerate_eta) {
        if (free > 20)
          throw std::invalid_argument("marginal_check: too many defect sets");
        S y = S{1} / x - S{1};
        eta_sum = S{0};
        for (std::uint32_t mask = 0; mask < (1u << free); ++mask)
          eta_sum += ipow(y, std::popcount(mask));
      } else {
        eta_sum = ipow(S(S{1} / x), free);
      }
    }
    grouped.push_back(color_sum * eta_sum);
    target.push_back(ipow(x, m_omega) * ipow(n, (int)active.size()));
  });

  S zg{0}, zt{0};
  for (std::size_t i = 0; i < grouped.size(); ++i) {
    zg += grouped[i];
    zt += target[i];
  }
  MarginalReport rep;
  rep.exact = !std::is_floating_point_v<S>;
  rep.groups = grouped.size();
  for (std::size_t i = 0; i < grouped.size(); ++i) {
    S lhs = grouped[i] / zg, rhs = target[i] / zt;
    double err = std::abs((double)(lhs - rhs)) /
                 std::max(1e-300, std::abs((double)rhs));
    rep.max_rel_error = std::max(rep.max_rel_error, err);
    if (rep.exact && lhs != rhs) rep.max_rel_error = std::max(rep.max_rel_error, 1.0);
  }
  return rep;
}

template MarginalReport marginal_check<Rational>(const BoundaryCondition&,
                                                 const Rational&,
                                                 const Rational&, bool, bool);
template MarginalReport marginal_check<double>(const BoundaryCondition&,
                                               const double&, const double&,
                                               bool, bool);

std::optional<Circuit> find_defect_free_circuit(
    const Region& r, const Bitset& blocked, const std::vector<int>& protect,
    const std::vector<int>* search_faces) {
  if (r.is_torus())
    throw std::invalid_argument("defect-free circuit: domains only");
  if (protect.empty())
    throw std::invalid_argument("defect-free circuit: empty protect set");

  std::vector<char> in_search(r.n_faces(), search_faces == nullptr);
  if (search_faces)
    for (int f : *search_faces) in_search.at(f) = 1;
  for (int f : protect)
    if (!in_search.at(f))
      throw std::invalid_argument("defect-free circuit: protect outside search");

  // grow the exterior cluster across blocked edges
  std::vector<char> ext(r.n_dual_vertices(), 0);
  std::deque<int> q;
  for (int d = 0; d < r.n_dual_vertices(); ++d)
    if (!r.dual_is_inner(d) || !in_search[d]) {
      ext[d] = 1;
      q.push_back(d);
    }
  auto visit = [&](int e, int d) {
    if (!blocked.test(e)) return;
    int other = r.edge_dual_id(e, r.edge_dual_id(e, 0) == d ? 1 : 0);
    if (!ext[other]) {
      ext[other] = 1;
      q.push_back(other);
    }
  };
  while (!q.empty()) {
    int d = q.front();
    q.pop_front();
    if (r.dual_is_inner(d)) {
      for (int e : r.edges_of_face(d)) visit(e, d);
    } else {
      FaceCoord f = r.dual_coord(d);
      for (FaceCoord g : face_neighbors(f)) {
        int e = r.edge_between(f, g);
        if (e >= 0) visit(e, d);
      }
    }
  }
  for (int f : protect)
    if (ext[f]) return std::nullopt;  // blocked crossing reaches protect

  // interface between the exterior cluster and the rest
  Bitset mask(r.n_edges());
  for (int f = 0; f < r.n_faces(); ++f)
    if (!ext[f]) mask ^= r.face_boundary(f);
  for (const Loop& loop : LoopConfig(r, mask).decompose())
    if (surrounds(r, loop, r.face(protect[0]))) return Circuit{loop};
  return std::nullopt;  // not reachable for valid protect sets
}

CoherentTriple xor_resample(const BoundaryCondition& bc,
                            const CoherentTriple& t, const Circuit& gamma) {
  Bitset gmask(bc.region().n_edges());
  for (int e : gamma.loop.edges) gmask.set(e);
  if ((gmask & (t.blue.edges() | t.eta)).any())
    throw std::invalid_argument("xor_resample: circuit is not defect-free");
  CoherentTriple out{t.red.symmetric_difference(gmask), t.blue, t.eta};
  validate_triple(bc, out);
  return out;
}

MonotonicityReport monotonicity_check(
    const BoundaryCondition& bc, const Rational& n,
    const std::function<bool(const Bitset&)>& event) {
  const Region& r = bc.region();
  if (r.n_edges() > 20)
    throw std::invalid_argument("monotonicity_check: region too large");
  // certify the event is increasing on the whole edge-set lattice
  for (std::uint32_t s = 0; s < (1u << r.n_edges()); ++s) {
    Bitset b(r.n_edges(), s);
    if (!event(b)) continue;
    for (int e = 0; e < r.n_edges(); ++e) {
      Bitset up = b;
      up.set(e);
      if (!event(up))
        throw std::invalid_argument("monotonicity_check: event not increasing");
    }
  }

  Rational red{0}, blue{0}, z{0};
  for_each_config(bc, [&](const LoopConfig& w) {
    auto loops = w.decompose();
    std::vector<const Loop*> active;
    for (const Loop& loop : loops)
      if (bc.loop_active(loop)) active.push_back(&loop);
    for (std::uint32_t mask = 0; mask < (1u << active.size()); ++mask) {
      Bitset bmask(r.n_edges());
      for (std::size_t i = 0; i < active.size(); ++i)
        if (mask >> i & 1u)
          for (int e : active[i]->edges) bmask.set(e);
      Rational weight = ipow(Rational(n - 1), std::popcount(mask));
      z += weight;
      if (event(w.edges() & ~bmask)) red += weight;
      if (event(bmask)) blue += weight;
    }
  });
  MonotonicityReport rep;
  rep.red_prob = red / z;
  rep.blue_prob = blue / z;
  rep.holds = rep.red_prob >= rep.blue_prob;
  return rep;
}

std::optional<Loop> noncontractible_avoiding(const Region& r,
                                             const Bitset& avoid) {
  if (!r.is_torus())
    throw std::invalid_argument("noncontractible_avoiding: torus only");
  std::vector<std::array<long, 2>> lift(r.n_vertices());
  std::vector<int> parent_v(r.n_vertices(), -1), parent_e(r.n_vertices(), -1);
  std::vector<char> seen(r.n_vertices(), 0);

  auto disp_from = [&](int e, int v) {
    const auto& ed = r.edge(e);
    int sgn = ed.vup == v ? 1 : -1;
    return std::array<long, 2>{sgn * ed.disp[0], sgn * ed.disp[1]};
  };

  for (int root = 0; root < r.n_vertices(); ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    lift[root] = {0, 0};
    std::deque<int> q{root};
    std::vector<int> comp{root};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int e : r.edges_of_vertex(v)) {
        if (e < 0 || avoid.test(e)) continue;
        int u = r.edge_other_vertex(e, v);
        if (!seen[u]) {
          seen[u] = 1;
          auto d = disp_from(e, v);
          lift[u] = {lift[v][0] + d[0], lift[v][1] + d[1]};
          parent_v[u] = v;
          parent_e[u] = e;
          q.push_back(u);
          comp.push_back(u);
        }
      }
    }
    // non-tree edges with a winding lift defect close a non-contractible
    // fundamental cycle
    for (int v : comp) {
      for (int e : r.edges_of_vertex(v)) {
        if (e < 0 || avoid.test(e) || parent_e[v] == e) continue;
        int u = r.edge_other_vertex(e, v);
        if (parent_e[u] == e) continue;
        auto d = disp_from(e, v);
        long dx = lift[v][0] + d[0] - lift[u][0];
        long dy = lift[v][1] + d[1] - lift[u][1];
        if (dx == 0 && dy == 0) continue;
        // tree path u -> lca -> v plus the chord
        Bitset cyc(r.n_edges());
        cyc.set(e);
        std::vector<char> on_path(r.n_vertices(), 0);
        for (int a = v; a >= 0; a = parent_v[a]) on_path[a] = 1;
        int meet = u;
        while (!on_path[meet]) {
          cyc.set(parent_e[meet]);
          meet = parent_v[meet];
        }
        for (int a = v; a != meet; a = parent_v[a]) cyc.set(parent_e[a]);
        auto loops = LoopConfig(r, cyc).decompose();
        for (const Loop& loop : loops) {
          auto h = homology_class(r, loop);
          if (h.first != 0 || h.second != 0) return loop;
        }
      }
    }
  }
  return std::nullopt;
}

DualityWitness torus_duality_check(const ColoredConfig& c) {
  validate_colored(c);
  const Region& r = c.red.region();
  DualityWitness w;
  if (auto loop = noncontractible_avoiding(r, c.blue.edges())) {
    w.circuit = *loop;
    w.blue_free = true;
    w.found = true;
    return w;
  }
  if (auto loop = noncontractible_avoiding(r, c.red.edges())) {
    w.circuit = *loop;
    w.blue_free = false;
    w.found = true;
    return w;
  }
  return w;
}

}  // namespace loopon
