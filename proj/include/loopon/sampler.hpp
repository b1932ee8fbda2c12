#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "loopcore.hpp"

namespace loopon {

using Rational = boost::multiprecision::cpp_rational;

// P(omega) proportional to x^|omega| n^loops(omega), where |omega| counts
// edges inside the active sub-domain and loops(omega) counts loops meeting
// it.
struct ModelParams {
  double n = 1.0;
  double x = 1.0;
};

struct RationalParams {
  Rational n = 1;
  Rational x = 1;
};

// The active sub-domain D together with a frozen even configuration xi.
// Configurations are xi XOR any combination of the boundaries of D's
// faces (plus the two homology generators when D is a whole torus).
class BoundaryCondition {
 public:
  static BoundaryCondition whole(const Region& r);
  static BoundaryCondition restricted(const Region& r,
                                      std::vector<int> inner_faces,
                                      Bitset xi);

  const Region& region() const { return *region_; }
  const Bitset& xi() const { return xi_; }
  const std::vector<int>& inner_faces() const { return inner_faces_; }
  const Bitset& inner_edges() const { return inner_edges_; }
  bool whole_region() const {
    return (int)inner_faces_.size() == region_->n_faces();
  }
  bool vertex_active(int v) const { return active_vertex_[v] != 0; }

  // generators of the reachable configuration class
  const std::vector<Bitset>& generators() const { return generators_; }

  int edge_count(const Bitset& omega) const {
    return (int)(omega & inner_edges_).count();
  }
  // loops of omega meeting the sub-domain
  int loop_count(const LoopConfig& omega) const;
  bool loop_active(const Loop& loop) const;

 private:
  BoundaryCondition() = default;
  const Region* region_ = nullptr;
  Bitset xi_;
  std::vector<int> inner_faces_;
  Bitset inner_edges_;
  std::vector<char> active_vertex_;
  std::vector<Bitset> generators_;
};

// Visits every configuration of the class exactly once, in Gray order.
// Throws when the class is larger than max_configs.
void for_each_config(const BoundaryCondition& bc,
                     const std::function<void(const LoopConfig&)>& fn,
                     std::uint64_t max_configs = 1u << 22);

std::uint64_t config_count(const BoundaryCondition& bc);

template <class S>
struct EventProbability {
  S numerator{0};
  S total{0};
  S value() const { return numerator / total; }
};

template <class S>
S ipow(const S& base, int e) {
  S out{1};
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

template <class S>
EventProbability<S> exact_event_probability(
    const BoundaryCondition& bc, const S& n, const S& x,
    const std::function<bool(const LoopConfig&, const std::vector<Loop>&)>&
        event) {
  EventProbability<S> out;
  for_each_config(bc, [&](const LoopConfig& w) {
    auto loops = w.decompose();
    int active = 0;
    for (const Loop& loop : loops)
      if (bc.loop_active(loop)) ++active;
    S weight = ipow(x, bc.edge_count(w.edges())) * ipow(n, active);
    out.total += weight;
    if (event(w, loops)) out.numerator += weight;
  });
  return out;
}

// Full distribution on an enumerable class, for goodness-of-fit checks.
struct EnumeratedEnsemble {
  std::vector<Bitset> configs;
  std::map<Bitset, int> index;
  std::vector<std::pair<int, int>> stats;  // (edges in D, loops meeting D)

  static EnumeratedEnsemble build(const BoundaryCondition& bc,
                                  std::uint64_t max_configs = 1u << 22);
  std::vector<double> probabilities(ModelParams p) const;
};

// uniform over the configuration class
LoopConfig random_even_subgraph(const BoundaryCondition& bc,
                                std::mt19937_64& rng);

struct McmcOptions {
  double homology_move_prob = 0.1;  // whole torus only
  int burnin_sweep_factor = 10;     // burn-in: factor * |faces| sweeps
};

// Single-face-flip Metropolis chain; proposals flip one face boundary (or,
// on a whole torus, a homology generator).
class Mcmc {
 public:
  Mcmc(const BoundaryCondition& bc, ModelParams p, std::uint64_t seed,
       McmcOptions opt = {});

  void step();
  void sweep();    // |inner faces| proposals
  void burnin();   // burnin_sweep_factor * |inner faces| sweeps
  void thin();     // one sweep between retained samples

  const LoopConfig& state() const { return omega_; }
  const BoundaryCondition& bc() const { return *bc_; }
  std::uint64_t proposed() const { return proposed_; }
  std::uint64_t accepted() const { return accepted_; }

  // log acceptance ratio of flipping the given mask from the current state
  double log_accept_ratio(const Bitset& mask) const;

 private:
  int loops_touching(const Bitset& omega, const std::vector<int>& va) const;

  const BoundaryCondition* bc_;
  ModelParams p_;
  McmcOptions opt_;
  std::mt19937_64 rng_;
  LoopConfig omega_;
  std::uint64_t proposed_ = 0, accepted_ = 0;
  mutable std::vector<std::uint32_t> vertex_epoch_;
  mutable std::uint32_t epoch_ = 0;
};

// true when some loop is homologically nontrivial (torus)
bool has_noncontractible(const Region& r, const std::vector<Loop>& loops);

}  // namespace loopon
