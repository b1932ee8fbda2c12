#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <type_traits>

#include "coupling.hpp"
#include "quad.hpp"

namespace loopon {

// spin coupling <-> edge weight
double beta_from_x(double x);
double x_from_beta(double beta);

// Graph on the faces bordering at least one edge of a domain: the region's
// dual vertices.  The first region.n_edges() edges are the duals of the
// primal edges (same ids); the rest join adjacent outer-layer faces and
// have no primal partner.
class DualGraph {
 public:
  explicit DualGraph(const Region& r);

  const Region& region() const { return *r_; }
  int n_vertices() const { return r_->n_dual_vertices(); }
  int n_edges() const { return (int)ends_.size(); }
  int n_primal() const { return r_->n_edges(); }
  std::pair<int, int> ends(int e) const { return ends_.at(e); }
  const std::vector<int>& edges_at(int dual) const { return incident_.at(dual); }
  bool is_boundary(int dual) const { return !r_->dual_is_inner(dual); }
  Bitset empty_edge_set() const { return Bitset(n_edges()); }

  // primal edges whose dual edge carries a defect
  Bitset primal_defects(const Bitset& eta) const;

 private:
  const Region* r_;
  std::vector<std::pair<int, int>> ends_;
  std::vector<std::vector<int>> incident_;
};

// cluster counts of a defect set: free, and with the whole outer layer
// identified into one vertex
int free_cluster_count(const DualGraph& g, const Bitset& eta);
int wired_cluster_count(const DualGraph& g, const Bitset& eta);

SpinConfig all_plus_spins(const Region& r);

// sum of spin products over adjacent face pairs separated by a region edge
int pair_sum(const Region& r, const SpinConfig& s);
double ising_weight(const Region& r, const SpinConfig& s, double beta);

// Proper 2-coloring feasibility of eta's clusters with the outer layer
// pinned to tau's values.
bool is_bipartite_with_boundary(const DualGraph& g, const Bitset& eta,
                                const SpinConfig& tau);

// Visits every spin configuration that agrees with tau on the outer layer,
// in Gray order over the inner faces.
void for_each_spin(const Region& r, const SpinConfig& tau,
                   const std::function<void(const SpinConfig&)>& fn,
                   std::uint64_t max_configs = 1u << 22);

// (1/x - 1)^|eta| 2^{wired clusters}; equals twice the pinned spin sum of
// the agreement coupling when the outer layer is constant
template <class S>
S fk_weight_ferro(const DualGraph& g, const Bitset& eta, const S& x) {
  return ipow(S(S{1} / x - S{1}), (int)eta.count()) *
         ipow(S{2}, wired_cluster_count(g, eta));
}

// (x - 1)^|eta| 2^{wired clusters} on proper-colorable defect sets; equals
// twice the pinned spin sum of the disagreement coupling
template <class S>
S fk_weight_antiferro(const DualGraph& g, const Bitset& eta, const S& x,
                      const SpinConfig& tau) {
  if (!is_bipartite_with_boundary(g, eta, tau)) return S{0};
  return ipow(S(x - S{1}), (int)eta.count()) *
         ipow(S{2}, wired_cluster_count(g, eta));
}

struct CheckReport {
  bool ok = true;
  bool exact = true;           // compared in exact arithmetic
  double max_rel_error = 0.0;  // 0 when exact and equal
  std::uint64_t cases = 0;
};

namespace detail {

template <class S>
void report_compare(CheckReport& rep, const S& lhs, const S& rhs) {
  if (rep.exact) {
    if (lhs != rhs) {
      rep.ok = false;
      rep.max_rel_error = std::max(rep.max_rel_error, 1.0);
    }
    return;
  }
  double l = (double)lhs, r = (double)rhs;
  double err = std::abs(l - r) / std::max({1.0, std::abs(l), std::abs(r)});
  rep.max_rel_error = std::max(rep.max_rel_error, err);
  if (err > 1e-9) rep.ok = false;
}

// satisfied-constraint bitmask per pinned spin configuration: bit e set
// when the coupling constraint holds on dual edge e
std::vector<std::uint64_t> constraint_masks(const DualGraph& g,
                                            const SpinConfig& tau,
                                            bool antiferro,
                                            std::vector<int>* primal_walls,
                                            std::uint64_t max_configs);

}  // namespace detail

// The domain-wall map is a weight-preserving bijection between spin
// configurations pinned to tau and the even-subgraph class of xi = the
// walls of any one of them: |walls| = (|E| - pair_sum)/2 per spin config,
// images are distinct, and they exhaust the class.
template <class S>
CheckReport loop_ising_equivalence_check(const Region& r, const S& x,
                                         const SpinConfig& tau,
                                         std::uint64_t max_configs = 1u << 22) {
  CheckReport rep;
  rep.exact = !std::is_floating_point_v<S>;
  std::map<Bitset, int> image;
  std::optional<Bitset> seed;
  std::optional<double> ratio;
  for_each_spin(
      r, tau,
      [&](const SpinConfig& s) {
        Bitset w = domain_walls(s);
        if ((int)w.count() * 2 != r.n_edges() - pair_sum(r, s)) rep.ok = false;
        if constexpr (std::is_floating_point_v<S>) {
          // exponential form vs the edge-weight form, constant ratio
          double q = ising_weight(r, s, beta_from_x((double)x)) /
                     std::pow((double)x, (double)w.count());
          if (!ratio) ratio = q;
          double err = std::abs(q - *ratio) / *ratio;
          rep.max_rel_error = std::max(rep.max_rel_error, err);
          if (err > 1e-9) rep.ok = false;
        }
        if (!image.emplace(w, 1).second) rep.ok = false;  // not injective
        if (!seed) seed = w;
      },
      max_configs);
  BoundaryCondition bc = [&] {
    std::vector<int> all(r.n_faces());
    for (int f = 0; f < r.n_faces(); ++f) all[f] = f;
    return BoundaryCondition::restricted(r, std::move(all), *seed);
  }();
  std::uint64_t seen = 0;
  for_each_config(
      bc,
      [&](const LoopConfig& w) {
        ++seen;
        if (!image.count(w.edges())) rep.ok = false;
      },
      max_configs);
  if (seen != image.size()) rep.ok = false;
  rep.cases = image.size();
  return rep;
}

// Exhaustive two-way consistency of the spin/defect coupling: summing out
// spins reproduces the cluster-weight formula (up to one global factor 2),
// and summing out defects reproduces x^|walls| (up to one global factor).
template <class S>
CheckReport es_consistency_check(const DualGraph& g, const S& x,
                                 const SpinConfig& tau, bool antiferro,
                                 std::uint64_t max_configs = 1u << 22) {
  CheckReport rep;
  rep.exact = !std::is_floating_point_v<S>;
  if (g.n_edges() > 20)
    throw std::invalid_argument("es_consistency_check: dual graph too large");
  std::vector<int> walls;
  auto sat = detail::constraint_masks(g, tau, antiferro, &walls, max_configs);
  S y = antiferro ? S(x - S{1}) : S(S{1} / x - S{1});

  // defect marginal, grouped by eta
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.n_edges()); ++m) {
    int count = 0;
    for (std::uint64_t s : sat)
      if ((m & ~s) == 0) ++count;
    S spin_sum = ipow(y, std::popcount(m)) * S(count);
    Bitset eta(g.n_edges(), m);
    S fk = antiferro ? fk_weight_antiferro(g, eta, x, tau)
                     : fk_weight_ferro(g, eta, x);
    detail::report_compare(rep, S(S{2} * spin_sum), fk);
    ++rep.cases;
  }

  // spin marginal: the per-spin defect sum over eta factorizes as
  // (1+y)^{#satisfied}; its ratio to x^|walls| must not depend on the spins
  std::optional<S> ratio;
  for (std::size_t i = 0; i < sat.size(); ++i) {
    S total = ipow(S(S{1} + y), std::popcount(sat[i]));
    S target = ipow(x, walls[i]);
    S q = total / target;
    if (!ratio)
      ratio = q;
    else
      detail::report_compare(rep, *ratio, q);
  }
  return rep;
}

// The disagreement-coupling defect marginal at x equals the agreement
// marginal at 1/x conditioned on proper colorability.  Conditioning on the
// decreasing colorability event raises decreasing events, so the
// disagreement marginal dominates the agreement one on those; this is the
// direction positive association gives, and the one the circuit bound
// consumes.  Also certifies that colorability is decreasing.
template <class S>
CheckReport antiferro_ferro_relation_check(const DualGraph& g, const S& x,
                                           const SpinConfig& tau,
                                           std::uint64_t max_configs = 1u
                                                                       << 22) {
  CheckReport rep;
  rep.exact = !std::is_floating_point_v<S>;
  if (g.n_edges() > 20)
    throw std::invalid_argument("relation check: dual graph too large");
  const std::uint64_t total = std::uint64_t{1} << g.n_edges();

  auto sat_a = detail::constraint_masks(g, tau, true, nullptr, max_configs);
  SpinConfig plus = all_plus_spins(g.region());
  auto sat_f = detail::constraint_masks(g, plus, false, nullptr, max_configs);
  S ya = S(x - S{1});  // disagreement weight at edge weight x
  S yf = S(x - S{1});  // agreement weight 1/(1/x) - 1 at edge weight 1/x

  std::vector<S> a(total), f(total);
  std::vector<char> bip(total);
  S za{0}, zf{0}, zf_bip{0};
  for (std::uint64_t m = 0; m < total; ++m) {
    int ca = 0, cf = 0;
    for (std::uint64_t s : sat_a)
      if ((m & ~s) == 0) ++ca;
    for (std::uint64_t s : sat_f)
      if ((m & ~s) == 0) ++cf;
    a[m] = ipow(ya, std::popcount(m)) * S(ca);
    f[m] = ipow(yf, std::popcount(m)) * S(cf);
    bip[m] = is_bipartite_with_boundary(g, Bitset(g.n_edges(), m), tau);
    if (bip[m] != (ca > 0)) rep.ok = false;  // colorability = positive mass
    za += a[m];
    zf += f[m];
    if (bip[m]) zf_bip += f[m];
  }

  for (std::uint64_t m = 0; m < total; ++m) {
    // conditional identity, cross-multiplied
    detail::report_compare(rep, S(a[m] * zf_bip),
                           bip[m] ? S(f[m] * za) : S{0});
    ++rep.cases;
    // colorability is decreasing: removing one defect keeps it
    if (bip[m])
      for (int e = 0; e < g.n_edges(); ++e)
        if ((m >> e & 1u) && !bip[m & ~(std::uint64_t{1} << e)]) rep.ok = false;
  }

  // domination on decreasing events: subsets of a pattern
  for (std::uint64_t pattern : {std::uint64_t{0}, total - 1, total / 3}) {
    S pa{0}, pf{0};
    for (std::uint64_t m = 0; m < total; ++m)
      if ((m & ~pattern) == 0) {
        pa += a[m];
        pf += f[m];
      }
    if (S(pa * zf) < S(pf * za)) rep.ok = false;
  }
  return rep;
}

// Alternating conditional resampling of the spin/defect coupling: defects
// given spins edgewise, spins given defects by fair cluster recoloring
// with the outer layer pinned.
class EsChain {
 public:
  EsChain(const DualGraph& g, double x, const SpinConfig& tau,
          std::uint64_t seed);

  void sweep();
  void burnin(int sweeps = 128);

  const SpinConfig& sigma() const { return sigma_; }
  const Bitset& eta() const { return eta_; }
  bool antiferro() const { return antiferro_; }

 private:
  void resample_defects();
  void resample_spins();

  const DualGraph* g_;
  double x_;
  bool antiferro_;
  SpinConfig tau_, sigma_;
  Bitset eta_;
  std::mt19937_64 rng_;
};

struct XorExperimentReport {
  int k = 0;
  int trials = 0;
  int circuit_found = 0;  // defect-avoiding circuit around the core
  int surrounded = 0;     // loop of diameter >= k surrounding the center
  int either_side = 0;    // surrounded before or after flipping the circuit
  int implication_failures = 0;

  double circuit_freq() const { return trials ? (double)circuit_found / trials : 0; }
  double surround_freq() const { return trials ? (double)surrounded / trials : 0; }
};

// On the ball of radius 2k: sample the coupling, search the outermost
// defect-avoiding circuit around the k-ball, and check that the walls
// before or after flipping inside it contain a large surrounding loop.
XorExperimentReport antiferro_xor_experiment(int k, double x,
                                             std::uint64_t seed, int trials,
                                             const LoopConfig* xi = nullptr);

// P(the defect cluster of the center face reaches face distance >= d),
// d = 0..radius, under the agreement coupling at x < 1.
std::vector<double> connection_profile(const DualGraph& g, double x,
                                       int trials, std::uint64_t seed);

}  // namespace loopon
