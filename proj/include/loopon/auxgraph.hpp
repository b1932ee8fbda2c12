#pragma once

#include <map>
#include <random>
#include <string>

#include "coupling.hpp"

namespace loopon {

// Quotient of the face/edge incidence structure of a region under a loop
// configuration: each loop collapses to one vertex, edges off the loops
// and faces stay distinct.
struct AuxVertex {
  enum class Kind { loop, free_edge, face };
  Kind kind;
  int id;  // loop index, edge id, or face id
};

class AuxGraph {
 public:
  static AuxGraph build(const Region& r, const LoopConfig& omega);

  const Region& region() const { return *region_; }
  const std::vector<Loop>& loops() const { return loops_; }

  int n_vertices() const { return (int)vertices_.size(); }
  const AuxVertex& vertex(int v) const { return vertices_.at(v); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  bool is_boundary(int v) const { return boundary_.at(v) != 0; }

  // projection: every face and edge of the region has an image vertex
  int face_vertex(int face_id) const { return face_vertex_.at(face_id); }
  int edge_vertex(int edge_id) const { return edge_vertex_.at(edge_id); }
  int loop_vertex(int loop_idx) const { return loop_vertex_.at(loop_idx); }

  std::vector<int> distances_from(int v) const;

 private:
  const Region* region_ = nullptr;
  std::vector<Loop> loops_;
  std::vector<AuxVertex> vertices_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> boundary_;
  std::vector<int> face_vertex_, edge_vertex_, loop_vertex_;
};

// Per-loop face sets with the contract: faces only, at most five, and
// every loop pair at graph distance two shares a witness in the union.
struct Association {
  std::vector<std::vector<int>> faces;  // face ids, indexed by loop
};

// Builds the loop-adjacency graph (loops sharing a bordered face), tags
// each adjacency with its minimal witnessing face, and peels minimal-id
// vertices of degree at most five.  Planarity guarantees the peel order
// exists; a failure to find one throws.
Association associate(const AuxGraph& g);

struct SiteConfig {
  Bitset open;
};

// face openness law: open iff a bordering free edge is open or an
// associated loop is open
void derive_face_sites(const AuxGraph& g, const Association& assoc,
                       SiteConfig& s);

// independent loop bits at (n-1)/n and edge bits at 1-x; face bits derived
SiteConfig sample_zeta(const AuxGraph& g, const Association& assoc,
                       ModelParams p, std::mt19937_64& rng);

// 6 (1-x)^{1/3} + 3 ((n-1)/n)^{1/6}
double domination_intensity(ModelParams p);

// Shared-coin realization: each edge owns three coins at (1-x)^{1/3} on
// {edge, its faces}, each loop six coins at ((n-1)/n)^{1/6} on its
// associated faces and itself; the site process fires where all of a
// group's coins fire, the independent field where any coin fires.  The
// first return is distributed as the site process and is pointwise below
// the second, whose per-vertex intensity is at most the value above.
std::pair<SiteConfig, SiteConfig> domination_coupling(const AuxGraph& g,
                                                      const Association& assoc,
                                                      ModelParams p,
                                                      std::mt19937_64& rng);

// open-vertex path reachability
bool connectivity(const AuxGraph& g, const SiteConfig& sites,
                  const std::vector<int>& from, const std::vector<int>& to);

struct DegreeReport {
  std::vector<int> degrees;
  int max_degree = 0;
  bool loop_bound_ok = true;   // deg(loop) <= 4 * its edge count
  bool other_bound_ok = true;  // deg(edge or face vertex) <= 6

  // sum of degrees at least r, relative to the vertex count
  double truncated_statistic(int r) const;
};

DegreeReport degree_diagnostics(const AuxGraph& g);

// canonical-form frequencies of rooted balls around every vertex
std::map<std::string, int> rooted_ball_census(const AuxGraph& g, int radius);

struct PercolationBoundReport {
  int trials = 0;
  int non_connection = 0;        // core ball not open-connected past R
  int circuit_exists = 0;        // defect-avoiding circuit around the core
  int implication_failures = 0;  // non-connection without a circuit
};

// Couples the site process with the loop/defect structure: open loops turn
// blue, open edge vertices become defects, and every non-connection sample
// must admit a circuit avoiding both around the r-ball at the face.
PercolationBoundReport percolation_bound_check(const Region& r,
                                               const LoopConfig& omega,
                                               ModelParams p, int face,
                                               int radius_r, int radius_R,
                                               int trials, std::uint64_t seed);

}  // namespace loopon
