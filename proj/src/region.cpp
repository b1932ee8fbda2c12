#include "loopon/region.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace loopon {

namespace {

int mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

// canonical (base, axis) key of the edge separating adjacent faces a, b
bool edge_key(FaceCoord a, FaceCoord b, FaceCoord* base, int* axis) {
  int dk = b.k - a.k, dl = b.l - a.l;
  if (dk == 1 && dl == 0) { *base = a; *axis = 0; return true; }
  if (dk == -1 && dl == 0) { *base = b; *axis = 0; return true; }
  if (dk == 0 && dl == 1) { *base = a; *axis = 1; return true; }
  if (dk == 0 && dl == -1) { *base = b; *axis = 1; return true; }
  if (dk == 1 && dl == -1) { *base = {a.k, a.l - 1}; *axis = 2; return true; }
  if (dk == -1 && dl == 1) { *base = {a.k - 1, a.l}; *axis = 2; return true; }
  return false;
}

}  // namespace

FaceCoord Region::canon(FaceCoord f) const {
  if (kind_ != Kind::torus) return f;
  return {mod(f.k, tk_), mod(f.l, tl_)};
}

Region Region::ball(FaceCoord center, int radius) {
  if (radius < 0) throw std::invalid_argument("ball: negative radius");
  std::vector<FaceCoord> fs;
  for (int k = -radius; k <= radius; ++k)
    for (int l = -radius; l <= radius; ++l) {
      FaceCoord f{center.k + k, center.l + l};
      if (face_distance(center, f) <= radius) fs.push_back(f);
    }
  return domain(std::move(fs));
}

Region Region::domain(std::vector<FaceCoord> face_set) {
  if (face_set.empty()) throw std::invalid_argument("domain: no faces");
  Region r;
  r.kind_ = Kind::domain;
  r.faces_ = std::move(face_set);
  for (int i = 0; i < (int)r.faces_.size(); ++i) {
    if (!r.face_ids_.emplace(r.faces_[i], i).second)
      throw std::invalid_argument("domain: duplicate face");
  }
  r.build();

  // connectivity of the face set
  std::vector<char> seen(r.n_faces(), 0);
  std::deque<int> q{0};
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int f = q.front();
    q.pop_front();
    for (FaceCoord g : face_neighbors(r.faces_[f])) {
      int gi = r.face_id(g);
      if (gi >= 0 && !seen[gi]) {
        seen[gi] = 1;
        ++reached;
        q.push_back(gi);
      }
    }
  }
  if (reached != r.n_faces())
    throw std::invalid_argument("domain: face set not connected");

  // the boundary must be a single self-avoiding cycle: boundary degree 0 or
  // 2 at every vertex, and the boundary edge set connected
  std::vector<int> bdeg(r.n_vertices(), 0);
  for (int e = 0; e < r.n_edges(); ++e)
    if (r.boundary_edges_[e]) {
      ++bdeg[r.edges_[e].vup];
      ++bdeg[r.edges_[e].vdown];
    }
  for (int d : bdeg)
    if (d != 0 && d != 2)
      throw std::invalid_argument("domain: boundary is not a simple cycle");
  auto first = r.boundary_edges_.find_first();
  if (first != Bitset::npos) {
    Bitset visited(r.n_edges());
    std::deque<int> bq{(int)first};
    visited.set(first);
    while (!bq.empty()) {
      int e = bq.front();
      bq.pop_front();
      for (int v : {r.edges_[e].vup, r.edges_[e].vdown})
        for (int e2 : r.vertex_edges_[v])
          if (e2 >= 0 && r.boundary_edges_[e2] && !visited[e2]) {
            visited.set(e2);
            bq.push_back(e2);
          }
    }
    if (visited != r.boundary_edges_)
      throw std::invalid_argument("domain: boundary is not a single cycle");
  }

  // Euler relation for a simply connected piece
  if (r.n_vertices() - r.n_edges() + r.n_faces() + 1 != 2)
    throw std::invalid_argument("domain: Euler check failed");
  return r;
}

Region Region::torus(int k, int l) {
  if (k < 2 || l < 2)
    throw std::invalid_argument("torus: both periods must be at least 2");
  Region r;
  r.kind_ = Kind::torus;
  r.tk_ = k;
  r.tl_ = l;
  for (int s = 0; s < k; ++s)
    for (int t = 0; t < l; ++t) {
      FaceCoord f{s, t};
      r.face_ids_.emplace(f, (int)r.faces_.size());
      r.faces_.push_back(f);
    }
  r.build();

  for (int s = 0; s < k; ++s) {
    r.cut_line_[0].push_back(r.edge_by_base_.at(FaceCoord{s, 0})[0]);
    r.generator_[0].set(r.edge_by_base_.at(FaceCoord{s, 0})[2]);
    r.generator_[0].set(r.edge_by_base_.at(FaceCoord{s, 0})[1]);
  }
  for (int t = 0; t < l; ++t) {
    r.cut_line_[1].push_back(r.edge_by_base_.at(FaceCoord{0, t})[1]);
    r.generator_[1].set(r.edge_by_base_.at(FaceCoord{0, t})[2]);
    r.generator_[1].set(r.edge_by_base_.at(FaceCoord{0, t})[0]);
  }
  return r;
}

void Region::build() {
  auto vertex_at = [&](VertexCoord v) {
    if (kind_ == Kind::torus) {
      v.k = mod(v.k, tk_);
      v.l = mod(v.l, tl_);
    }
    auto it = vertex_ids_.find(v);
    if (it != vertex_ids_.end()) return it->second;
    int id = (int)vertices_.size();
    vertices_.push_back(v);
    vertex_ids_.emplace(v, id);
    return id;
  };

  face_edges_.assign(n_faces(), {-1, -1, -1, -1, -1, -1});
  for (int fi = 0; fi < n_faces(); ++fi) {
    FaceCoord f = faces_[fi];
    auto nbs = face_neighbors(f);
    for (int d = 0; d < 6; ++d) {
      FaceCoord base;
      int axis = 0;
      edge_key(f, nbs[d], &base, &axis);
      base = canon(base);
      auto& slots =
          edge_by_base_.try_emplace(base, std::array<int, 3>{-1, -1, -1})
              .first->second;
      int& slot = slots[axis];
      if (slot < 0) {
        Edge e;
        e.axis = (std::int8_t)axis;
        FaceCoord c = base;
        if (axis == 0) {
          e.fa = c;
          e.fb = {c.k + 1, c.l};
          e.vup = vertex_at({c.k, c.l, 0});
          e.vdown = vertex_at({c.k, c.l - 1, 1});
          e.disp = {1, -2};
        } else if (axis == 1) {
          e.fa = c;
          e.fb = {c.k, c.l + 1};
          e.vup = vertex_at({c.k, c.l, 0});
          e.vdown = vertex_at({c.k - 1, c.l, 1});
          e.disp = {-2, 1};
        } else {
          e.fa = {c.k + 1, c.l};
          e.fb = {c.k, c.l + 1};
          e.vup = vertex_at({c.k, c.l, 0});
          e.vdown = vertex_at({c.k, c.l, 1});
          e.disp = {1, 1};
        }
        e.fa = canon(e.fa);
        e.fb = canon(e.fb);
        e.fa_id = face_id(e.fa);
        e.fb_id = face_id(e.fb);
        slot = (int)edges_.size();
        edges_.push_back(e);
      }
      face_edges_[fi][d] = slot;
    }
  }

  vertex_edges_.assign(n_vertices(), {-1, -1, -1});
  vertex_degree_.assign(n_vertices(), 0);
  for (int e = 0; e < n_edges(); ++e)
    for (int v : {edges_[e].vup, edges_[e].vdown})
      vertex_edges_[v][vertex_degree_[v]++] = e;

  boundary_edges_.resize(n_edges());
  for (int e = 0; e < n_edges(); ++e)
    if (edges_[e].fa_id < 0 || edges_[e].fb_id < 0) {
      boundary_edges_.set(e);
      FaceCoord out = edges_[e].fa_id < 0 ? edges_[e].fa : edges_[e].fb;
      if (outer_face_ids_.emplace(out, (int)outer_faces_.size()).second)
        outer_faces_.push_back(out);
    }

  face_boundary_.assign(n_faces(), Bitset(n_edges()));
  for (int f = 0; f < n_faces(); ++f)
    for (int e : face_edges_[f]) face_boundary_[f].set(e);

  generator_[0].resize(n_edges());
  generator_[1].resize(n_edges());
}

int Region::face_id(FaceCoord f) const {
  auto it = face_ids_.find(canon(f));
  return it == face_ids_.end() ? -1 : it->second;
}

int Region::face_id_checked(FaceCoord f) const {
  int id = face_id(f);
  if (id < 0) throw std::out_of_range("face not in region");
  return id;
}

int Region::vertex_id(VertexCoord v) const {
  if (kind_ == Kind::torus) {
    v.k = mod(v.k, tk_);
    v.l = mod(v.l, tl_);
  }
  auto it = vertex_ids_.find(v);
  return it == vertex_ids_.end() ? -1 : it->second;
}

int Region::edge_between(FaceCoord a, FaceCoord b) const {
  FaceCoord base;
  int axis = 0;
  if (!edge_key(a, b, &base, &axis)) {
    if (kind_ != Kind::torus) return -1;
    // try wrapped representatives of b around a
    bool found = false;
    for (int dk : {-tk_, 0, tk_})
      for (int dl : {-tl_, 0, tl_})
        if (edge_key(a, {b.k + dk, b.l + dl}, &base, &axis)) found = true;
    if (!found) return -1;
  }
  auto it = edge_by_base_.find(canon(base));
  if (it == edge_by_base_.end()) return -1;
  return it->second[axis];
}

int Region::edge_other_vertex(int e, int v) const {
  const Edge& ed = edges_.at(e);
  if (ed.vup == v) return ed.vdown;
  if (ed.vdown == v) return ed.vup;
  throw std::invalid_argument("vertex not on edge");
}

int Region::edge_other_face_id(int e, int f) const {
  const Edge& ed = edges_.at(e);
  if (ed.fa_id == f) return ed.fb_id;
  if (ed.fb_id == f) return ed.fa_id;
  throw std::invalid_argument("face not on edge");
}

FaceCoord Region::edge_other_face(int e, FaceCoord f) const {
  const Edge& ed = edges_.at(e);
  if (canon(f) == ed.fa) return ed.fb;
  if (canon(f) == ed.fb) return ed.fa;
  throw std::invalid_argument("face not on edge");
}

int Region::outer_face_id(FaceCoord f) const {
  auto it = outer_face_ids_.find(f);
  return it == outer_face_ids_.end() ? -1 : it->second;
}

int Region::dual_id(FaceCoord f) const {
  int id = face_id(f);
  if (id >= 0) return id;
  id = outer_face_id(f);
  return id < 0 ? -1 : n_faces() + id;
}

FaceCoord Region::dual_coord(int dual) const {
  if (dual < n_faces()) return face(dual);
  return outer_face(dual - n_faces());
}

int Region::edge_dual_id(int e, int side) const {
  const Edge& ed = edges_.at(e);
  FaceCoord f = side == 0 ? ed.fa : ed.fb;
  int id = dual_id(f);
  if (id < 0) throw std::logic_error("edge side has no dual vertex");
  return id;
}

const std::vector<int>& Region::cut_line(int i) const {
  if (kind_ != Kind::torus || i < 0 || i > 1)
    throw std::invalid_argument("cut_line: torus only, index 0 or 1");
  return cut_line_[i];
}

const Bitset& Region::generator(int i) const {
  if (kind_ != Kind::torus || i < 0 || i > 1)
    throw std::invalid_argument("generator: torus only, index 0 or 1");
  return generator_[i];
}

std::string Region::to_text() const {
  std::ostringstream os;
  os << "region v1\n";
  if (kind_ == Kind::torus) {
    os << "torus " << tk_ << " " << tl_ << "\n";
  } else {
    os << "domain " << n_faces() << "\n";
    for (FaceCoord f : faces_) os << f.k << " " << f.l << "\n";
  }
  return os.str();
}

Region Region::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string word, version;
  if (!(is >> word >> version) || word != "region" || version != "v1")
    throw std::invalid_argument("region: bad header");
  if (!(is >> word)) throw std::invalid_argument("region: truncated");
  if (word == "torus") {
    int k, l;
    if (!(is >> k >> l)) throw std::invalid_argument("region: truncated");
    return torus(k, l);
  }
  if (word != "domain") throw std::invalid_argument("region: unknown kind");
  int n;
  if (!(is >> n) || n <= 0) throw std::invalid_argument("region: bad size");
  std::vector<FaceCoord> fs(n);
  for (auto& f : fs)
    if (!(is >> f.k >> f.l)) throw std::invalid_argument("region: truncated");
  return domain(std::move(fs));
}

}  // namespace loopon
