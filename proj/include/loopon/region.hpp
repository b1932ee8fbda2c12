#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "geometry.hpp"

namespace loopon {

// A finite piece of the hexagonal lattice: either a simply connected domain
// (the graph induced by a set of faces enclosed by one self-avoiding cycle)
// or a k x l torus quotient with k, l >= 2.
//
// Faces, vertices and edges carry dense ids.  Each edge records the two
// faces it separates; in a domain one of them may lie outside the region
// (face id -1), in which case the edge is a boundary edge.
class Region {
 public:
  enum class Kind { domain, torus };

  struct Edge {
    int vup = -1;    // endpoint of up-triangle type
    int vdown = -1;  // endpoint of down-triangle type
    FaceCoord fa, fb;     // the two separated faces, fa < fb not guaranteed
    int fa_id = -1, fb_id = -1;  // -1 when outside the region
    std::int8_t axis = 0;        // 0,1,2: orientation class, see build()
    // displacement vup -> vdown in thirds of a lattice step, used for
    // homology bookkeeping on the torus
    std::array<int, 2> disp{0, 0};
  };

  static Region ball(FaceCoord center, int radius);
  static Region domain(std::vector<FaceCoord> face_set);
  static Region torus(int k, int l);

  Kind kind() const { return kind_; }
  bool is_torus() const { return kind_ == Kind::torus; }
  int torus_k() const { return tk_; }
  int torus_l() const { return tl_; }

  int n_faces() const { return (int)faces_.size(); }
  int n_vertices() const { return (int)vertices_.size(); }
  int n_edges() const { return (int)edges_.size(); }

  FaceCoord face(int id) const { return faces_.at(id); }
  VertexCoord vertex(int id) const { return vertices_.at(id); }
  const Edge& edge(int id) const { return edges_.at(id); }

  // torus: reduce a coordinate to its canonical representative
  FaceCoord canon(FaceCoord f) const;

  int face_id(FaceCoord f) const;            // -1 when absent
  int face_id_checked(FaceCoord f) const;    // throws when absent
  int vertex_id(VertexCoord v) const;
  int edge_between(FaceCoord a, FaceCoord b) const;  // -1 when absent

  const std::array<int, 6>& edges_of_face(int face) const {
    return face_edges_.at(face);
  }
  const std::array<int, 3>& edges_of_vertex(int vertex) const {
    return vertex_edges_.at(vertex);
  }
  int vertex_degree(int vertex) const { return vertex_degree_.at(vertex); }

  // other endpoint / other face of an edge
  int edge_other_vertex(int e, int v) const;
  int edge_other_face_id(int e, int f) const;
  FaceCoord edge_other_face(int e, FaceCoord f) const;

  const Bitset& boundary_edges() const { return boundary_edges_; }
  const Bitset& face_boundary(int face) const { return face_boundary_.at(face); }

  // faces outside a domain that border one of its edges; they index the
  // outer layer of the dual graph
  int n_outer_faces() const { return (int)outer_faces_.size(); }
  FaceCoord outer_face(int id) const { return outer_faces_.at(id); }
  int outer_face_id(FaceCoord f) const;  // -1 when absent

  // dual vertex ids: [0, n_faces) inner, [n_faces, n_faces + n_outer) outer
  int n_dual_vertices() const { return n_faces() + n_outer_faces(); }
  int dual_id(FaceCoord f) const;  // -1 when absent from both layers
  FaceCoord dual_coord(int dual) const;
  bool dual_is_inner(int dual) const { return dual < n_faces(); }
  // side 0/1 = fa/fb of an edge, as dual vertex id
  int edge_dual_id(int e, int side) const;

  // torus homology: the two straight cut lines and the two straight
  // non-contractible generator cycles
  const std::vector<int>& cut_line(int i) const;
  const Bitset& generator(int i) const;

  Bitset empty_edge_set() const { return Bitset(n_edges()); }

  std::string to_text() const;
  static Region from_text(const std::string& text);

 private:
  Region() = default;
  void build();

  Kind kind_ = Kind::domain;
  int tk_ = 0, tl_ = 0;
  std::vector<FaceCoord> faces_;
  std::unordered_map<FaceCoord, int, FaceHash> face_ids_;
  std::vector<VertexCoord> vertices_;
  std::unordered_map<VertexCoord, int, VertexHash> vertex_ids_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 6>> face_edges_;
  std::vector<std::array<int, 3>> vertex_edges_;
  std::vector<int> vertex_degree_;
  Bitset boundary_edges_;
  std::vector<Bitset> face_boundary_;
  std::vector<FaceCoord> outer_faces_;
  std::unordered_map<FaceCoord, int, FaceHash> outer_face_ids_;
  std::vector<int> cut_line_[2];
  Bitset generator_[2];
  // canonical edge key: (base face, axis)
  std::unordered_map<FaceCoord, std::array<int, 3>, FaceHash> edge_by_base_;
};

}  // namespace loopon
