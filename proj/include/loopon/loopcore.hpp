#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "region.hpp"

namespace loopon {

// A loop as an ordered traversal: edges[i] joins vertices[i] to
// vertices[i+1 mod n].
struct Loop {
  std::vector<int> edges;
  std::vector<int> vertices;

  int length() const { return (int)edges.size(); }
};

struct NoSpinRepresentation : std::runtime_error {
  NoSpinRepresentation() : std::runtime_error("no spin representation") {}
};

// Spin values on dual vertices (faces of the region, plus the outer layer
// for domains).
struct SpinConfig {
  const Region* region = nullptr;
  std::vector<std::int8_t> s;

  int spin(int dual) const { return s.at(dual); }
};

// An even subgraph of the region: every vertex meets 0 or 2 of its edges.
class LoopConfig {
 public:
  LoopConfig() = default;
  explicit LoopConfig(const Region& r) : region_(&r), edges_(r.n_edges()) {}
  LoopConfig(const Region& r, Bitset e) : region_(&r), edges_(std::move(e)) {
    if ((int)edges_.size() != r.n_edges())
      throw std::invalid_argument("loop config: size mismatch");
  }

  const Region& region() const { return *region_; }
  const Bitset& edges() const { return edges_; }
  Bitset& edges() { return edges_; }
  bool has_edge(int e) const { return edges_.test(e); }
  int n_edges_used() const { return (int)edges_.count(); }

  bool is_even() const;
  void require_even() const;

  LoopConfig symmetric_difference(const LoopConfig& other) const;
  LoopConfig symmetric_difference(const Bitset& other) const;

  std::vector<Loop> decompose() const;

  std::string to_text() const;
  static LoopConfig from_text(const std::string& text, const Region& r);

 private:
  const Region* region_ = nullptr;
  Bitset edges_;
};

// Faces bordering at least one edge of the loop, on either side.
std::vector<FaceCoord> bordered_faces(const Region& r, const Loop& loop);

// Max face distance between bordered faces.  A single hexagon has
// diameter 2 (opposite neighbors of the enclosed face).
int loop_diameter(const Region& r, const Loop& loop);

// True when every dual path from f to the outside crosses the loop.
// Domains only.
bool surrounds(const Region& r, const Loop& loop, FaceCoord f);
bool surrounds(const Region& r, const Bitset& loop_edges, FaceCoord f);

// Net signed crossings of the two homology cut lines.  Torus only; (0,0)
// exactly for contractible loops.
std::pair<int, int> homology_class(const Region& r, const Loop& loop);

// Spin assignment with +1 at the reference dual vertex (first outer face
// for domains, face 0 for tori), flipping across edges of omega.  Throws
// NoSpinRepresentation when omega is homologically nontrivial.
SpinConfig spin_rep(const LoopConfig& omega);

// Edges whose two sides carry different spins; inverse of spin_rep.
Bitset domain_walls(const SpinConfig& sigma);

}  // namespace loopon
