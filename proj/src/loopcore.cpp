#include "loopon/loopcore.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace loopon {

bool LoopConfig::is_even() const {
  const Region& r = *region_;
  for (int v = 0; v < r.n_vertices(); ++v) {
    int d = 0;
    for (int e : r.edges_of_vertex(v))
      if (e >= 0 && edges_.test(e)) ++d;
    if (d % 2) return false;
  }
  return true;
}

void LoopConfig::require_even() const {
  if (!is_even()) throw std::invalid_argument("config has odd vertex degree");
}

LoopConfig LoopConfig::symmetric_difference(const LoopConfig& other) const {
  if (other.region_ != region_)
    throw std::invalid_argument("symmetric difference across regions");
  return LoopConfig(*region_, edges_ ^ other.edges_);
}

LoopConfig LoopConfig::symmetric_difference(const Bitset& other) const {
  return LoopConfig(*region_, edges_ ^ other);
}

std::vector<Loop> LoopConfig::decompose() const {
  const Region& r = *region_;
  std::vector<Loop> loops;
  Bitset seen(r.n_edges());
  for (auto e0 = edges_.find_first(); e0 != Bitset::npos;
       e0 = edges_.find_next(e0)) {
    if (seen.test(e0)) continue;
    Loop loop;
    int start_v = r.edge(e0).vup;
    int v = start_v;
    int e = (int)e0;
    // vertices have degree 0 or 2 in an even subgraph, so the walk is
    // forced and returns to its start
    do {
      loop.vertices.push_back(v);
      loop.edges.push_back(e);
      seen.set(e);
      v = r.edge_other_vertex(e, v);
      int next = -1;
      for (int e2 : r.edges_of_vertex(v))
        if (e2 >= 0 && e2 != e && edges_.test(e2)) {
          if (next >= 0)
            throw std::invalid_argument("config has odd vertex degree");
          next = e2;
        }
      if (next < 0) throw std::invalid_argument("config has odd vertex degree");
      e = next;
    } while (v != start_v);
    if (e != (int)e0) throw std::invalid_argument("config has odd vertex degree");
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::string LoopConfig::to_text() const {
  std::ostringstream os;
  os << "loopconfig v1 " << edges_.size() << "\n";
  std::string bits;
  boost::to_string(edges_, bits);
  os << bits << "\n";
  return os.str();
}

LoopConfig LoopConfig::from_text(const std::string& text, const Region& r) {
  std::istringstream is(text);
  std::string word, version, bits;
  std::size_t n = 0;
  if (!(is >> word >> version >> n >> bits) || word != "loopconfig" ||
      version != "v1")
    throw std::invalid_argument("loop config: bad header");
  if ((int)n != r.n_edges() || bits.size() != n)
    throw std::invalid_argument("loop config: size mismatch");
  return LoopConfig(r, Bitset(bits));
}

std::vector<FaceCoord> bordered_faces(const Region& r, const Loop& loop) {
  std::vector<FaceCoord> fs;
  for (int e : loop.edges) {
    fs.push_back(r.edge(e).fa);
    fs.push_back(r.edge(e).fb);
  }
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  return fs;
}

int loop_diameter(const Region& r, const Loop& loop) {
  if (r.is_torus())
    throw std::invalid_argument("loop_diameter: domains only");
  // face distance is the max of three linear functionals, so the max over
  // pairs is the max of the three coordinate ranges
  int lo[3], hi[3];
  bool any = false;
  for (int e : loop.edges)
    for (FaceCoord f : {r.edge(e).fa, r.edge(e).fb}) {
      int c[3] = {f.k, f.l, f.k + f.l};
      if (!any) {
        for (int i = 0; i < 3; ++i) lo[i] = hi[i] = c[i];
        any = true;
      } else {
        for (int i = 0; i < 3; ++i) {
          lo[i] = std::min(lo[i], c[i]);
          hi[i] = std::max(hi[i], c[i]);
        }
      }
    }
  if (!any) return 0;
  int d = 0;
  for (int i = 0; i < 3; ++i) d = std::max(d, hi[i] - lo[i]);
  return d;
}

bool surrounds(const Region& r, const Bitset& loop_edges, FaceCoord f) {
  if (r.is_torus()) throw std::invalid_argument("surrounds: domains only");
  int start = r.face_id(f);
  if (start < 0) throw std::out_of_range("surrounds: face not in region");
  std::vector<char> seen(r.n_dual_vertices(), 0);
  std::deque<int> q{start};
  seen[start] = 1;
  while (!q.empty()) {
    int d = q.front();
    q.pop_front();
    if (!r.dual_is_inner(d)) return false;  // escaped past the boundary
    for (int e : r.edges_of_face(d)) {
      if (loop_edges.test(e)) continue;
      int other = r.edge_dual_id(e, r.edge_dual_id(e, 0) == d ? 1 : 0);
      if (!seen[other]) {
        seen[other] = 1;
        q.push_back(other);
      }
    }
  }
  return true;
}

bool surrounds(const Region& r, const Loop& loop, FaceCoord f) {
  Bitset mask(r.n_edges());
  for (int e : loop.edges) mask.set(e);
  return surrounds(r, mask, f);
}

std::pair<int, int> homology_class(const Region& r, const Loop& loop) {
  if (!r.is_torus())
    throw std::invalid_argument("homology_class: torus only");
  std::vector<int> cut_of(r.n_edges(), -1);
  for (int i : {0, 1})
    for (int e : r.cut_line(i)) cut_of[e] = i;
  int w1 = 0, w2 = 0;
  for (std::size_t i = 0; i < loop.edges.size(); ++i) {
    int e = loop.edges[i];
    if (cut_of[e] < 0) continue;
    const Region::Edge& ed = r.edge(e);
    bool forward = loop.vertices[i] == ed.vup;
    int dx = forward ? ed.disp[0] : -ed.disp[0];
    int dy = forward ? ed.disp[1] : -ed.disp[1];
    if (cut_of[e] == 1) w1 += dx > 0 ? 1 : -1;  // crossing the l-axis cut
    if (cut_of[e] == 0) w2 += dy > 0 ? 1 : -1;  // crossing the k-axis cut
  }
  return {w1, w2};
}

SpinConfig spin_rep(const LoopConfig& omega) {
  const Region& r = omega.region();
  omega.require_even();
  SpinConfig sigma;
  sigma.region = &r;
  sigma.s.assign(r.n_dual_vertices(), 0);
  int start = r.is_torus() ? 0 : r.n_faces();  // first outer face for domains
  sigma.s[start] = 1;
  std::deque<int> q{start};
  while (!q.empty()) {
    int d = q.front();
    q.pop_front();
    // edges incident to this dual vertex
    if (r.dual_is_inner(d)) {
      for (int e : r.edges_of_face(d)) {
        int other = r.edge_dual_id(e, r.edge_dual_id(e, 0) == d ? 1 : 0);
        std::int8_t want = omega.has_edge(e) ? -sigma.s[d] : sigma.s[d];
        if (sigma.s[other] == 0) {
          sigma.s[other] = want;
          q.push_back(other);
        } else if (sigma.s[other] != want) {
          throw NoSpinRepresentation();
        }
      }
    } else {
      // outer faces only attach through boundary edges of their inner
      // neighbors; scan lazily
      FaceCoord f = r.dual_coord(d);
      for (FaceCoord g : face_neighbors(f)) {
        int gi = r.face_id(g);
        if (gi < 0) continue;
        int e = r.edge_between(f, g);
        if (e < 0) continue;
        std::int8_t want = omega.has_edge(e) ? -sigma.s[d] : sigma.s[d];
        if (sigma.s[gi] == 0) {
          sigma.s[gi] = want;
          q.push_back(gi);
        } else if (sigma.s[gi] != want) {
          throw NoSpinRepresentation();
        }
      }
    }
  }
  return sigma;
}

Bitset domain_walls(const SpinConfig& sigma) {
  const Region& r = *sigma.region;
  Bitset walls(r.n_edges());
  for (int e = 0; e < r.n_edges(); ++e)
    if (sigma.s.at(r.edge_dual_id(e, 0)) != sigma.s.at(r.edge_dual_id(e, 1)))
      walls.set(e);
  return walls;
}

}  // namespace loopon
