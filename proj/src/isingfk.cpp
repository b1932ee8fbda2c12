#include "loopon/isingfk.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <numeric>

namespace loopon {

double beta_from_x(double x) {
  if (!(x > 0)) throw std::invalid_argument("beta_from_x: x must be positive");
  return -0.5 * std::log(x);
}

double x_from_beta(double beta) { return std::exp(-2.0 * beta); }

DualGraph::DualGraph(const Region& r) : r_(&r) {
  if (r.is_torus())
    throw std::invalid_argument("dual graph: domains only");
  for (int e = 0; e < r.n_edges(); ++e)
    ends_.push_back({r.edge_dual_id(e, 0), r.edge_dual_id(e, 1)});
  // outer-layer faces that are lattice neighbors share a rim edge
  for (int d = r.n_faces(); d < r.n_dual_vertices(); ++d) {
    FaceCoord f = r.dual_coord(d);
    for (FaceCoord nb : face_neighbors(f)) {
      int d2 = r.dual_id(nb);
      if (d2 > d && !r.dual_is_inner(d2)) ends_.push_back({d, d2});
    }
  }
  incident_.resize(n_vertices());
  for (int e = 0; e < n_edges(); ++e) {
    incident_[ends_[e].first].push_back(e);
    incident_[ends_[e].second].push_back(e);
  }
}

Bitset DualGraph::primal_defects(const Bitset& eta) const {
  Bitset out(n_primal());
  for (auto e = eta.find_first(); e != Bitset::npos; e = eta.find_next(e)) {
    if ((int)e >= n_primal()) break;
    out.set(e);
  }
  return out;
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
  int roots() {
    int n = 0;
    for (int v = 0; v < (int)parent.size(); ++v)
      if (find(v) == v) ++n;
    return n;
  }
};

}  // namespace

int free_cluster_count(const DualGraph& g, const Bitset& eta) {
  Dsu dsu(g.n_vertices());
  for (auto e = eta.find_first(); e != Bitset::npos; e = eta.find_next(e))
    dsu.join(g.ends((int)e).first, g.ends((int)e).second);
  return dsu.roots();
}

int wired_cluster_count(const DualGraph& g, const Bitset& eta) {
  Dsu dsu(g.n_vertices() + 1);
  for (int d = 0; d < g.n_vertices(); ++d)
    if (g.is_boundary(d)) dsu.join(d, g.n_vertices());
  for (auto e = eta.find_first(); e != Bitset::npos; e = eta.find_next(e))
    dsu.join(g.ends((int)e).first, g.ends((int)e).second);
  return dsu.roots();
}

SpinConfig all_plus_spins(const Region& r) {
  SpinConfig s;
  s.region = &r;
  s.s.assign(r.n_dual_vertices(), 1);
  return s;
}

int pair_sum(const Region& r, const SpinConfig& s) {
  int sum = 0;
  for (int e = 0; e < r.n_edges(); ++e)
    sum += s.spin(r.edge_dual_id(e, 0)) * s.spin(r.edge_dual_id(e, 1));
  return sum;
}

double ising_weight(const Region& r, const SpinConfig& s, double beta) {
  return std::exp(beta * pair_sum(r, s));
}

bool is_bipartite_with_boundary(const DualGraph& g, const Bitset& eta,
                                const SpinConfig& tau) {
  std::vector<std::int8_t> color(g.n_vertices(), 0);
  auto bfs = [&](int root) {
    std::deque<int> q{root};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int e : g.edges_at(v)) {
        if (!eta.test(e)) continue;
        auto [a, b] = g.ends(e);
        int u = a == v ? b : a;
        std::int8_t want = -color[v];
        if (g.is_boundary(u) && tau.spin(u) != want) return false;
        if (color[u] == 0) {
          color[u] = want;
          q.push_back(u);
        } else if (color[u] != want) {
          return false;
        }
      }
    }
    return true;
  };
  // clusters touching the outer layer are seeded by the pinned values
  for (int v = 0; v < g.n_vertices(); ++v)
    if (g.is_boundary(v)) {
      if (color[v] != 0 && color[v] != tau.spin(v)) return false;
      color[v] = (std::int8_t)tau.spin(v);
    }
  for (int v = 0; v < g.n_vertices(); ++v)
    if (g.is_boundary(v) && !bfs(v)) return false;
  for (int v = 0; v < g.n_vertices(); ++v)
    if (color[v] == 0) {
      color[v] = 1;
      if (!bfs(v)) return false;
    }
  return true;
}

void for_each_spin(const Region& r, const SpinConfig& tau,
                   const std::function<void(const SpinConfig&)>& fn,
                   std::uint64_t max_configs) {
  if ((int)tau.s.size() != r.n_dual_vertices())
    throw std::invalid_argument("for_each_spin: tau size mismatch");
  if (r.n_faces() >= 63 ||
      (std::uint64_t{1} << r.n_faces()) > max_configs)
    throw std::invalid_argument("spin enumeration larger than the cap");
  SpinConfig s = tau;
  s.region = &r;
  for (int f = 0; f < r.n_faces(); ++f) s.s[f] = 1;
  fn(s);
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << r.n_faces()); ++i) {
    int f = std::countr_zero(i);
    s.s[f] = (std::int8_t)-s.s[f];
    fn(s);
  }
}

namespace detail {

std::vector<std::uint64_t> constraint_masks(const DualGraph& g,
                                            const SpinConfig& tau,
                                            bool antiferro,
                                            std::vector<int>* primal_walls,
                                            std::uint64_t max_configs) {
  if (g.n_edges() > 62)
    throw std::invalid_argument("constraint masks: too many dual edges");
  std::vector<std::uint64_t> out;
  for_each_spin(
      g.region(), tau,
      [&](const SpinConfig& s) {
        std::uint64_t mask = 0;
        int walls = 0;
        for (int e = 0; e < g.n_edges(); ++e) {
          auto [a, b] = g.ends(e);
          bool differ = s.spin(a) != s.spin(b);
          if (differ == antiferro) mask |= std::uint64_t{1} << e;
          if (differ && e < g.n_primal()) ++walls;
        }
        out.push_back(mask);
        if (primal_walls) primal_walls->push_back(walls);
      },
      max_configs);
  return out;
}

}  // namespace detail

EsChain::EsChain(const DualGraph& g, double x, const SpinConfig& tau,
                 std::uint64_t seed)
    : g_(&g),
      x_(x),
      antiferro_(x > 1),
      tau_(tau),
      sigma_(tau),
      eta_(g.n_edges()),
      rng_(seed) {
  if (!(x > 0)) throw std::invalid_argument("es chain: x must be positive");
  if ((int)tau.s.size() != g.n_vertices())
    throw std::invalid_argument("es chain: tau size mismatch");
  for (int f = 0; f < g.region().n_faces(); ++f) sigma_.s[f] = 1;
}

void EsChain::resample_defects() {
  double p = antiferro_ ? (x_ - 1) / x_ : 1 - x_;
  std::uniform_real_distribution<> unif(0, 1);
  for (int e = 0; e < g_->n_edges(); ++e) {
    auto [a, b] = g_->ends(e);
    bool differ = sigma_.spin(a) != sigma_.spin(b);
    eta_[e] = differ == antiferro_ && unif(rng_) < p;
  }
}

void EsChain::resample_spins() {
  std::vector<char> seen(g_->n_vertices(), 0);
  auto grow = [&](int root, std::int8_t val) {
    seen[root] = 1;
    sigma_.s[root] = val;
    std::deque<int> q{root};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int e : g_->edges_at(v)) {
        if (!eta_.test(e)) continue;
        auto [a, b] = g_->ends(e);
        int u = a == v ? b : a;
        std::int8_t want =
            antiferro_ ? (std::int8_t)-sigma_.s[v] : sigma_.s[v];
        if (!seen[u]) {
          if (g_->is_boundary(u) && tau_.spin(u) != want)
            throw std::logic_error("es chain: defect cluster conflict");
          seen[u] = 1;
          sigma_.s[u] = want;
          q.push_back(u);
        } else if (sigma_.s[u] != want) {
          throw std::logic_error("es chain: defect cluster conflict");
        }
      }
    }
  };
  // boundary-touching clusters are forced; the rest get a fair coin
  for (int v = 0; v < g_->n_vertices(); ++v)
    if (g_->is_boundary(v) && !seen[v]) grow(v, (std::int8_t)tau_.spin(v));
  for (int v = 0; v < g_->n_vertices(); ++v)
    if (!seen[v]) grow(v, rng_() & 1u ? 1 : -1);
}

void EsChain::sweep() {
  resample_defects();
  resample_spins();
}

void EsChain::burnin(int sweeps) {
  for (int i = 0; i < sweeps; ++i) sweep();
}

namespace {

bool has_large_surrounding_loop(const Region& r, const LoopConfig& omega,
                                FaceCoord center, int k) {
  for (const Loop& loop : omega.decompose())
    if (loop_diameter(r, loop) >= k && surrounds(r, loop, center))
      return true;
  return false;
}

}  // namespace

XorExperimentReport antiferro_xor_experiment(int k, double x,
                                             std::uint64_t seed, int trials,
                                             const LoopConfig* xi) {
  if (k < 1) throw std::invalid_argument("xor experiment: k must be positive");
  Region r = Region::ball({0, 0}, 2 * k);
  DualGraph g(r);
  SpinConfig tau = xi ? spin_rep(*xi) : all_plus_spins(r);
  std::vector<int> protect;
  for (int f = 0; f < r.n_faces(); ++f)
    if (face_distance({0, 0}, r.face(f)) <= k) protect.push_back(f);

  EsChain chain(g, x, tau, seed);
  chain.burnin(200);
  XorExperimentReport rep;
  rep.k = k;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < 3; ++i) chain.sweep();
    LoopConfig omega(r, domain_walls(chain.sigma()));
    bool before = has_large_surrounding_loop(r, omega, {0, 0}, k);
    if (before) ++rep.surrounded;
    Bitset blocked = g.primal_defects(chain.eta());
    auto circ = find_defect_free_circuit(r, blocked, protect);
    if (!circ) continue;
    ++rep.circuit_found;
    Bitset cmask(r.n_edges());
    for (int e : circ->loop.edges) cmask.set(e);
    LoopConfig flipped = omega.symmetric_difference(cmask);
    bool after = has_large_surrounding_loop(r, flipped, {0, 0}, k);
    if (before || after)
      ++rep.either_side;
    else
      ++rep.implication_failures;
  }
  return rep;
}

std::vector<double> connection_profile(const DualGraph& g, double x,
                                       int trials, std::uint64_t seed) {
  if (!(x > 0) || x >= 1)
    throw std::invalid_argument("connection profile: needs x in (0,1)");
  const Region& r = g.region();
  int center = r.face_id({0, 0});
  if (center < 0) center = 0;
  FaceCoord cf = r.face(center);
  int radius = 0;
  for (int d = 0; d < r.n_dual_vertices(); ++d)
    radius = std::max(radius, face_distance(cf, r.dual_coord(d)));

  std::vector<int> hits(radius + 1, 0);
  EsChain chain(g, x, all_plus_spins(r), seed);
  chain.burnin();
  for (int t = 0; t < trials; ++t) {
    chain.sweep();
    // farthest face in the defect cluster of the center
    std::vector<char> seen(g.n_vertices(), 0);
    std::deque<int> q{center};
    seen[center] = 1;
    int far = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      far = std::max(far, face_distance(cf, r.dual_coord(v)));
      for (int e : g.edges_at(v)) {
        if (!chain.eta().test(e)) continue;
        auto [a, b] = g.ends(e);
        int u = a == v ? b : a;
        if (!seen[u]) {
          seen[u] = 1;
          q.push_back(u);
        }
      }
    }
    for (int d = 0; d <= far; ++d) ++hits[d];
  }
  std::vector<double> out(radius + 1);
  for (int d = 0; d <= radius; ++d) out[d] = (double)hits[d] / trials;
  return out;
}

}  // namespace loopon
