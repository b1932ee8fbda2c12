#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>

#include <boost/dynamic_bitset.hpp>

namespace loopon {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

// Faces of the hexagonal lattice are vertices of the dual triangular
// lattice, addressed in axial coordinates: face (k, l) sits at
// k + l * exp(i*pi/3) in the plane.
struct FaceCoord {
  int k = 0;
  int l = 0;

  friend bool operator==(FaceCoord a, FaceCoord b) {
    return a.k == b.k && a.l == b.l;
  }
  friend bool operator!=(FaceCoord a, FaceCoord b) { return !(a == b); }
  friend bool operator<(FaceCoord a, FaceCoord b) {
    return a.k != b.k ? a.k < b.k : a.l < b.l;
  }
};

inline std::array<FaceCoord, 6> face_neighbors(FaceCoord f) {
  return {{{f.k + 1, f.l},
           {f.k, f.l + 1},
           {f.k - 1, f.l + 1},
           {f.k - 1, f.l},
           {f.k, f.l - 1},
           {f.k + 1, f.l - 1}}};
}

// Graph distance on the triangular lattice of faces.
inline int face_distance(FaceCoord a, FaceCoord b) {
  int dk = a.k - b.k;
  int dl = a.l - b.l;
  int m = std::abs(dk);
  if (std::abs(dl) > m) m = std::abs(dl);
  if (std::abs(dk + dl) > m) m = std::abs(dk + dl);
  return m;
}

// A vertex of the hexagonal lattice corresponds to a triangle of the dual
// lattice. t = 0 is the "up" triangle {(k,l), (k+1,l), (k,l+1)},
// t = 1 the "down" triangle {(k+1,l), (k,l+1), (k+1,l+1)}.
struct VertexCoord {
  int k = 0;
  int l = 0;
  std::uint8_t t = 0;

  friend bool operator==(VertexCoord a, VertexCoord b) {
    return a.k == b.k && a.l == b.l && a.t == b.t;
  }
  friend bool operator!=(VertexCoord a, VertexCoord b) { return !(a == b); }
};

inline std::array<FaceCoord, 3> corner_faces(VertexCoord v) {
  if (v.t == 0)
    return {{{v.k, v.l}, {v.k + 1, v.l}, {v.k, v.l + 1}}};
  return {{{v.k + 1, v.l}, {v.k, v.l + 1}, {v.k + 1, v.l + 1}}};
}

// The six vertices on the boundary of face (k, l).
inline std::array<VertexCoord, 6> face_corners(FaceCoord f) {
  return {{{f.k, f.l, 0},
           {f.k - 1, f.l, 0},
           {f.k, f.l - 1, 0},
           {f.k - 1, f.l - 1, 1},
           {f.k - 1, f.l, 1},
           {f.k, f.l - 1, 1}}};
}

struct FaceHash {
  std::size_t operator()(FaceCoord f) const {
    return std::hash<std::uint64_t>()((std::uint64_t)(std::uint32_t)f.k << 32 |
                                      (std::uint32_t)f.l);
  }
};

struct VertexHash {
  std::size_t operator()(VertexCoord v) const {
    return std::hash<std::uint64_t>()(((std::uint64_t)(std::uint32_t)v.k << 33) ^
                                      ((std::uint64_t)(std::uint32_t)v.l << 1) ^
                                      v.t);
  }
};

}  // namespace loopon
