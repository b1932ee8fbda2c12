#pragma once

#include <optional>
#include <random>

#include "sampler.hpp"

namespace loopon {

// Red/blue split of a configuration's loops.  Loops are vertex-disjoint,
// so the split is determined by the two edge sets.
struct ColoredConfig {
  LoopConfig red, blue;
};

// Split plus defect edges: eta avoids the loops and lives inside the
// active sub-domain.
struct CoherentTriple {
  LoopConfig red, blue;
  Bitset eta;
};

struct Circuit {
  Loop loop;
};

void validate_colored(const ColoredConfig& c);
void validate_triple(const BoundaryCondition& bc, const CoherentTriple& t);

// Each loop meeting the sub-domain goes blue with probability (n-1)/n;
// all other loops stay red.
ColoredConfig color_loops(const LoopConfig& omega, const BoundaryCondition& bc,
                          double n, std::mt19937_64& rng);

// (1-x)-Bernoulli percolation on the sub-domain edges off the loops.
Bitset sample_eta(const LoopConfig& omega, const BoundaryCondition& bc,
                  double x, std::mt19937_64& rng);

// (n-1)^{blue loops meeting D} * (1/x - 1)^{|eta|}, with 0^0 = 1
template <class S>
S triple_weight(const BoundaryCondition& bc, const CoherentTriple& t,
                const S& n, const S& x) {
  int lb = bc.loop_count(t.blue);
  S inv_defect = S{1} / x - S{1};
  return ipow(S(n - S{1}), lb) * ipow(inv_defect, (int)t.eta.count());
}

struct MarginalReport {
  bool exact = false;          // compared in exact arithmetic
  double max_rel_error = 0.0;  // 0 when exact and equal
  std::uint64_t groups = 0;
};

// Sums triple weights grouped by the underlying configuration and compares
// with x^{|omega|} n^{loops}.  With S = Rational the comparison is exact.
// enumerate_eta sums defect sets one by one instead of binomially.
template <class S>
MarginalReport marginal_check(const BoundaryCondition& bc, const S& n,
                              const S& x, bool with_eta,
                              bool enumerate_eta = false);

// Outermost simple circuit inside search_faces avoiding the blocked edges
// and surrounding every protect face, found by a dual search from the
// exterior that crosses only blocked edges.  none when the exterior
// cluster reaches protect.
std::optional<Circuit> find_defect_free_circuit(
    const Region& r, const Bitset& blocked, const std::vector<int>& protect,
    const std::vector<int>* search_faces = nullptr);

// omega_r -> omega_r XOR gamma; weight is untouched since it only reads
// (omega_b, eta)
CoherentTriple xor_resample(const BoundaryCondition& bc,
                            const CoherentTriple& t, const Circuit& gamma);

struct MonotonicityReport {
  Rational red_prob, blue_prob;
  bool holds = false;
};

// rho[omega_r in A] >= rho[omega_b in A] for increasing A, exact on an
// enumerable torus at x = 1.  The predicate's monotonicity is certified
// over the edge-set lattice first.
MonotonicityReport monotonicity_check(
    const BoundaryCondition& bc, const Rational& n,
    const std::function<bool(const Bitset&)>& event);

struct DualityWitness {
  Loop circuit;
  bool blue_free = false;  // else red-free
  bool found = false;
};

// A non-contractible circuit avoiding the blue edges, or failing that one
// avoiding the red edges.
DualityWitness torus_duality_check(const ColoredConfig& c);

// Simple non-contractible cycle in the torus subgraph avoiding the given
// edges, via spanning-forest winding lifts.
std::optional<Loop> noncontractible_avoiding(const Region& r,
                                             const Bitset& avoid);

}  // namespace loopon
