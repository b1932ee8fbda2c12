#include "loopon/auxgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace loopon {

namespace {

// loop index per edge, -1 off the loops
std::vector<int> loop_membership(const Region& r, const std::vector<Loop>& ls) {
  std::vector<int> m(r.n_edges(), -1);
  for (int i = 0; i < (int)ls.size(); ++i)
    for (int e : ls[i].edges) m[e] = i;
  return m;
}

}  // namespace

AuxGraph AuxGraph::build(const Region& r, const LoopConfig& omega) {
  omega.require_even();
  AuxGraph g;
  g.region_ = &r;
  g.loops_ = omega.decompose();
  std::vector<int> member = loop_membership(r, g.loops_);

  g.loop_vertex_.assign(g.loops_.size(), -1);
  g.edge_vertex_.assign(r.n_edges(), -1);
  g.face_vertex_.assign(r.n_faces(), -1);
  for (int i = 0; i < (int)g.loops_.size(); ++i) {
    g.loop_vertex_[i] = (int)g.vertices_.size();
    g.vertices_.push_back({AuxVertex::Kind::loop, i});
  }
  for (int e = 0; e < r.n_edges(); ++e) {
    if (member[e] >= 0) {
      g.edge_vertex_[e] = g.loop_vertex_[member[e]];
    } else {
      g.edge_vertex_[e] = (int)g.vertices_.size();
      g.vertices_.push_back({AuxVertex::Kind::free_edge, e});
    }
  }
  for (int f = 0; f < r.n_faces(); ++f) {
    g.face_vertex_[f] = (int)g.vertices_.size();
    g.vertices_.push_back({AuxVertex::Kind::face, f});
  }

  // adjacency: faces meet the images of their bordering edges, and edge
  // images meet when two edges share a lattice vertex
  std::vector<std::pair<int, int>> pairs;
  for (int f = 0; f < r.n_faces(); ++f)
    for (int e : r.edges_of_face(f))
      pairs.emplace_back(g.face_vertex_[f], g.edge_vertex_[e]);
  for (int v = 0; v < r.n_vertices(); ++v) {
    const auto& es = r.edges_of_vertex(v);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        if (es[i] < 0 || es[j] < 0) continue;
        int a = g.edge_vertex_[es[i]], b = g.edge_vertex_[es[j]];
        if (a != b) pairs.emplace_back(a, b);
      }
  }
  g.adj_.assign(g.vertices_.size(), {});
  for (auto& [a, b] : pairs) {
    if (a > b) std::swap(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (auto [a, b] : pairs) {
    g.adj_[a].push_back(b);
    g.adj_[b].push_back(a);
  }
  for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());

  g.boundary_.assign(g.vertices_.size(), 0);
  const Bitset& be = r.boundary_edges();
  for (int e = 0; e < r.n_edges(); ++e)
    if (be.test(e)) g.boundary_[g.edge_vertex_[e]] = 1;
  return g;
}

std::vector<int> AuxGraph::distances_from(int v) const {
  std::vector<int> dist(vertices_.size(), -1);
  std::deque<int> q{v};
  dist[v] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int w : adj_[u])
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
  }
  return dist;
}

Association associate(const AuxGraph& g) {
  const Region& r = g.region();
  int nl = (int)g.loops().size();

  // loop adjacency via commonly bordered faces, keeping the minimal
  // witnessing face per pair
  std::vector<int> member = loop_membership(r, g.loops());
  std::map<std::pair<int, int>, int> witness;
  for (int f = 0; f < r.n_faces(); ++f) {
    std::vector<int> here;
    for (int e : r.edges_of_face(f))
      if (member[e] >= 0) here.push_back(member[e]);
    std::sort(here.begin(), here.end());
    here.erase(std::unique(here.begin(), here.end()), here.end());
    for (std::size_t i = 0; i < here.size(); ++i)
      for (std::size_t j = i + 1; j < here.size(); ++j)
        witness.try_emplace({here[i], here[j]}, f);
  }
  std::vector<std::set<int>> nb(nl);
  for (auto& [pr, f] : witness) {
    nb[pr.first].insert(pr.second);
    nb[pr.second].insert(pr.first);
  }

  // peel minimal-id vertices of degree at most five; a planar simple graph
  // always has one
  Association a;
  a.faces.assign(nl, {});
  std::vector<char> alive(nl, 1);
  for (int step = 0; step < nl; ++step) {
    int pick = -1;
    for (int i = 0; i < nl; ++i)
      if (alive[i] && (int)nb[i].size() <= 5) {
        pick = i;
        break;
      }
    if (pick < 0) throw std::logic_error("associate: no low-degree loop");
    std::set<int> faces;
    for (int m : nb[pick]) {
      auto key = std::minmax(pick, m);
      faces.insert(witness.at({key.first, key.second}));
      nb[m].erase(pick);
    }
    a.faces[pick].assign(faces.begin(), faces.end());
    nb[pick].clear();
    alive[pick] = 0;
  }
  return a;
}

void derive_face_sites(const AuxGraph& g, const Association& assoc,
                       SiteConfig& s) {
  for (int v = 0; v < g.n_vertices(); ++v)
    if (g.vertex(v).kind == AuxVertex::Kind::face) s.open.reset(v);
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (g.vertex(v).kind != AuxVertex::Kind::face) continue;
    for (int w : g.neighbors(v))
      if (g.vertex(w).kind == AuxVertex::Kind::free_edge && s.open.test(w)) {
        s.open.set(v);
        break;
      }
  }
  for (int i = 0; i < (int)g.loops().size(); ++i) {
    if (!s.open.test(g.loop_vertex(i))) continue;
    for (int f : assoc.faces[i]) s.open.set(g.face_vertex(f));
  }
}

static void check_params(ModelParams p) {
  if (!(p.n >= 1) || !(p.x > 0) || !(p.x <= 1))
    throw std::invalid_argument("site process needs n >= 1 and 0 < x <= 1");
}

SiteConfig sample_zeta(const AuxGraph& g, const Association& assoc,
                       ModelParams p, std::mt19937_64& rng) {
  check_params(p);
  std::bernoulli_distribution loop_bit((p.n - 1) / p.n), edge_bit(1 - p.x);
  SiteConfig s{Bitset(g.n_vertices())};
  for (int v = 0; v < g.n_vertices(); ++v) {
    switch (g.vertex(v).kind) {
      case AuxVertex::Kind::loop:
        if (loop_bit(rng)) s.open.set(v);
        break;
      case AuxVertex::Kind::free_edge:
        if (edge_bit(rng)) s.open.set(v);
        break;
      case AuxVertex::Kind::face:
        break;
    }
  }
  derive_face_sites(g, assoc, s);
  return s;
}

double domination_intensity(ModelParams p) {
  return 6 * std::cbrt(1 - p.x) + 3 * std::pow((p.n - 1) / p.n, 1.0 / 6);
}

std::pair<SiteConfig, SiteConfig> domination_coupling(const AuxGraph& g,
                                                      const Association& assoc,
                                                      ModelParams p,
                                                      std::mt19937_64& rng) {
  check_params(p);
  std::bernoulli_distribution edge_coin(std::cbrt(1 - p.x));
  std::bernoulli_distribution loop_coin(std::pow((p.n - 1) / p.n, 1.0 / 6));
  SiteConfig zeta{Bitset(g.n_vertices())}, bern{Bitset(g.n_vertices())};

  const Region& r = g.region();
  for (int e = 0; e < r.n_edges(); ++e) {
    int v = g.edge_vertex(e);
    if (g.vertex(v).kind != AuxVertex::Kind::free_edge) continue;
    // three coins on the edge and its inner faces; missing faces keep a
    // phantom coin so the group probability stays 1 - x
    int sites[3] = {v, -1, -1};
    const Region::Edge& ed = r.edge(e);
    if (ed.fa_id >= 0) sites[1] = g.face_vertex(ed.fa_id);
    if (ed.fb_id >= 0) sites[2] = g.face_vertex(ed.fb_id);
    bool all = true;
    for (int s : sites) {
      bool c = edge_coin(rng);
      if (!c) all = false;
      if (c && s >= 0) bern.open.set(s);
    }
    if (all) zeta.open.set(v);
  }
  for (int i = 0; i < (int)g.loops().size(); ++i) {
    // six coins on the associated faces and the loop itself, padded with
    // phantoms so the group probability stays (n-1)/n
    std::vector<int> sites(assoc.faces[i].size() + 1, -1);
    sites[0] = g.loop_vertex(i);
    for (std::size_t k = 0; k < assoc.faces[i].size(); ++k)
      sites[k + 1] = g.face_vertex(assoc.faces[i][k]);
    if (sites.size() > 6)
      throw std::logic_error("domination: association too large");
    sites.resize(6, -1);
    bool all = true;
    for (int s : sites) {
      bool c = loop_coin(rng);
      if (!c) all = false;
      if (c && s >= 0) bern.open.set(s);
    }
    if (all) zeta.open.set(sites[0]);
  }
  derive_face_sites(g, assoc, zeta);
  return {zeta, bern};
}

bool connectivity(const AuxGraph& g, const SiteConfig& sites,
                  const std::vector<int>& from, const std::vector<int>& to) {
  std::vector<char> target(g.n_vertices(), 0), seen(g.n_vertices(), 0);
  for (int v : to) target[v] = 1;
  std::deque<int> q;
  for (int v : from)
    if (sites.open.test(v) && !seen[v]) {
      seen[v] = 1;
      q.push_back(v);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (target[u]) return true;
    for (int w : g.neighbors(u))
      if (sites.open.test(w) && !seen[w]) {
        seen[w] = 1;
        q.push_back(w);
      }
  }
  return false;
}

double DegreeReport::truncated_statistic(int r) const {
  if (degrees.empty()) return 0.0;
  long sum = 0;
  for (int d : degrees)
    if (d >= r) sum += d;
  return (double)sum / degrees.size();
}

DegreeReport degree_diagnostics(const AuxGraph& g) {
  DegreeReport rep;
  rep.degrees.resize(g.n_vertices());
  for (int v = 0; v < g.n_vertices(); ++v) {
    int d = (int)g.neighbors(v).size();
    rep.degrees[v] = d;
    rep.max_degree = std::max(rep.max_degree, d);
    if (g.vertex(v).kind == AuxVertex::Kind::loop) {
      int len = (int)g.loops()[g.vertex(v).id].edges.size();
      if (d > 4 * len) rep.loop_bound_ok = false;
    } else if (d > 6) {
      rep.other_bound_ok = false;
    }
  }
  return rep;
}

namespace {

// canonical string of the ball around root: color refinement seeded by the
// root distance, then a minimal adjacency encoding over the residual
// symmetry, which stays tiny for the balls that occur here
std::string canonical_ball(const AuxGraph& g, int root, int radius) {
  std::vector<int> dist = g.distances_from(root);
  std::vector<int> verts;
  for (int v = 0; v < g.n_vertices(); ++v)
    if (dist[v] >= 0 && dist[v] <= radius) verts.push_back(v);
  int n = (int)verts.size();
  std::vector<int> local(g.n_vertices(), -1);
  for (int i = 0; i < n; ++i) local[verts[i]] = i;
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int w : g.neighbors(verts[i]))
      if (local[w] >= 0) adj[i].push_back(local[w]);

  // color refinement to a stable partition
  auto refine = [&](std::vector<int> color) {
    for (int round = 0; round < n; ++round) {
      std::vector<std::pair<std::vector<int>, int>> sig(n);
      for (int i = 0; i < n; ++i) {
        std::vector<int> s{color[i]};
        for (int w : adj[i]) s.push_back(color[w]);
        std::sort(s.begin() + 1, s.end());
        sig[i] = {std::move(s), i};
      }
      std::sort(sig.begin(), sig.end());
      std::vector<int> next(n);
      int c = -1;
      for (int k = 0; k < n; ++k) {
        if (k == 0 || sig[k].first != sig[k - 1].first) ++c;
        next[sig[k].second] = c;
      }
      if (next == color) break;
      color = std::move(next);
    }
    return color;
  };
  auto encode = [&](const std::vector<int>& color) {
    std::vector<int> pos(n, -1);
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(),
              [&](int a, int b) { return color[a] < color[b]; });
    for (int i = 0; i < n; ++i) pos[ord[i]] = i;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int w : adj[ord[i]])
        if (pos[w] > i) pairs.emplace_back(i, pos[w]);
    std::sort(pairs.begin(), pairs.end());
    std::string s;
    s.reserve(2 * pairs.size() + n + 16);
    s += std::to_string(n);
    s += ':';
    for (int i = 0; i < n; ++i) s += (char)('0' + (dist[verts[ord[i]]] % 10));
    s += ':';
    for (auto [a, b] : pairs) {
      s += (char)(1 + a);
      s += (char)(1 + b);
    }
    return s;
  };

  // individualization with refinement: split the first ambiguous class on
  // each member in turn and keep the minimal encoding
  std::string best;
  long budget = 200000;  // refinement calls, ample for desk-size balls
  std::function<void(std::vector<int>)> search = [&](std::vector<int> color) {
    if (--budget < 0)
      throw std::runtime_error("ball census: symmetry search too large");
    color = refine(std::move(color));
    int target = -1;
    std::vector<int> count(n, 0);
    for (int c : color) ++count[c];
    for (int i = 0; i < n; ++i)
      if (count[color[i]] > 1) {
        target = color[i];
        break;
      }
    if (target < 0) {
      std::string s = encode(color);
      if (best.empty() || s < best) best = std::move(s);
      return;
    }
    for (int i = 0; i < n; ++i)
      if (color[i] == target) {
        std::vector<int> next = color;
        next[i] = n;  // fresh color
        search(std::move(next));
      }
  };
  std::vector<int> init(n);
  for (int i = 0; i < n; ++i) init[i] = dist[verts[i]];
  search(std::move(init));
  return best;
}

}  // namespace

std::map<std::string, int> rooted_ball_census(const AuxGraph& g, int radius) {
  if (radius < 0 || radius > 4)
    throw std::invalid_argument("ball census: radius must be in [0, 4]");
  std::map<std::string, int> census;
  for (int v = 0; v < g.n_vertices(); ++v)
    ++census[canonical_ball(g, v, radius)];
  return census;
}

PercolationBoundReport percolation_bound_check(const Region& r,
                                               const LoopConfig& omega,
                                               ModelParams p, int face,
                                               int radius_r, int radius_R,
                                               int trials, std::uint64_t seed) {
  if (r.is_torus())
    throw std::invalid_argument("percolation bound: domains only");
  if (radius_R < 2 * radius_r + 2)
    throw std::invalid_argument("percolation bound: need R >= 2r + 2");
  AuxGraph g = AuxGraph::build(r, omega);
  Association assoc = associate(g);

  std::vector<int> dist = g.distances_from(g.face_vertex(face));
  const int inf = g.n_vertices() + 1;
  for (int& d : dist)
    if (d < 0) d = inf;
  for (int v = 0; v < g.n_vertices(); ++v)
    if (g.is_boundary(v) && dist[v] <= radius_R)
      throw std::invalid_argument("percolation bound: face too close to the boundary");
  std::vector<int> core, far;
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (dist[v] <= 2 * radius_r + 2) core.push_back(v);
    if (dist[v] > radius_R) far.push_back(v);
  }

  std::vector<int> protect;
  FaceCoord fc = r.face(face);
  for (int f = 0; f < r.n_faces(); ++f)
    if (face_distance(fc, r.face(f)) <= radius_r) protect.push_back(f);

  std::vector<Bitset> loop_edges;
  for (const Loop& l : g.loops()) {
    Bitset m = r.empty_edge_set();
    for (int e : l.edges) m.set(e);
    loop_edges.push_back(std::move(m));
  }

  std::mt19937_64 rng(seed);
  PercolationBoundReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    SiteConfig zeta = sample_zeta(g, assoc, p, rng);
    bool connected = connectivity(g, zeta, core, far);

    // open loops become blue, open edge vertices become defects
    Bitset blocked = r.empty_edge_set();
    for (int i = 0; i < (int)g.loops().size(); ++i)
      if (zeta.open.test(g.loop_vertex(i))) blocked |= loop_edges[i];
    for (int v = 0; v < g.n_vertices(); ++v)
      if (g.vertex(v).kind == AuxVertex::Kind::free_edge && zeta.open.test(v))
        blocked.set(g.vertex(v).id);
    bool circuit = find_defect_free_circuit(r, blocked, protect).has_value();

    if (circuit) ++rep.circuit_exists;
    if (!connected) {
      ++rep.non_connection;
      if (!circuit) ++rep.implication_failures;
    }
  }
  return rep;
}

}  // namespace loopon
