#include "loopon/sampler.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace loopon {

BoundaryCondition BoundaryCondition::whole(const Region& r) {
  std::vector<int> all(r.n_faces());
  for (int f = 0; f < r.n_faces(); ++f) all[f] = f;
  return restricted(r, std::move(all), Bitset(r.n_edges()));
}

BoundaryCondition BoundaryCondition::restricted(const Region& r,
                                                std::vector<int> inner_faces,
                                                Bitset xi) {
  if (inner_faces.empty())
    throw std::invalid_argument("boundary condition: empty sub-domain");
  if ((int)xi.size() != r.n_edges())
    throw std::invalid_argument("boundary condition: xi size mismatch");
  LoopConfig(r, xi).require_even();

  BoundaryCondition bc;
  bc.region_ = &r;
  bc.xi_ = std::move(xi);
  bc.inner_faces_ = std::move(inner_faces);
  std::vector<char> inner(r.n_faces(), 0);
  for (int f : bc.inner_faces_) {
    if (f < 0 || f >= r.n_faces())
      throw std::out_of_range("boundary condition: face id out of range");
    if (inner[f]) throw std::invalid_argument("boundary condition: duplicate face");
    inner[f] = 1;
  }

  bc.inner_edges_.resize(r.n_edges());
  for (int e = 0; e < r.n_edges(); ++e) {
    const auto& ed = r.edge(e);
    if ((ed.fa_id >= 0 && inner[ed.fa_id]) || (ed.fb_id >= 0 && inner[ed.fb_id]))
      bc.inner_edges_.set(e);
  }
  bc.active_vertex_.assign(r.n_vertices(), 0);
  for (auto e = bc.inner_edges_.find_first(); e != Bitset::npos;
       e = bc.inner_edges_.find_next(e)) {
    bc.active_vertex_[r.edge(e).vup] = 1;
    bc.active_vertex_[r.edge(e).vdown] = 1;
  }

  bool whole_torus = r.is_torus() && (int)bc.inner_faces_.size() == r.n_faces();
  for (std::size_t i = 0; i < bc.inner_faces_.size(); ++i) {
    if (whole_torus && i + 1 == bc.inner_faces_.size())
      break;  // face boundaries on a torus carry one relation
    bc.generators_.push_back(r.face_boundary(bc.inner_faces_[i]));
  }
  if (whole_torus) {
    bc.generators_.push_back(r.generator(0));
    bc.generators_.push_back(r.generator(1));
  }
  return bc;
}

bool BoundaryCondition::loop_active(const Loop& loop) const {
  for (int v : loop.vertices)
    if (active_vertex_[v]) return true;
  return false;
}

int BoundaryCondition::loop_count(const LoopConfig& omega) const {
  int n = 0;
  for (const Loop& loop : omega.decompose())
    if (loop_active(loop)) ++n;
  return n;
}

std::uint64_t config_count(const BoundaryCondition& bc) {
  if (bc.generators().size() >= 64)
    return ~std::uint64_t{0};
  return std::uint64_t{1} << bc.generators().size();
}

void for_each_config(const BoundaryCondition& bc,
                     const std::function<void(const LoopConfig&)>& fn,
                     std::uint64_t max_configs) {
  std::uint64_t count = config_count(bc);
  if (count > max_configs)
    throw std::invalid_argument("enumeration larger than the configured cap");
  LoopConfig w(bc.region(), bc.xi());
  fn(w);
  for (std::uint64_t i = 1; i < count; ++i) {
    // Gray order: flip the generator at the lowest set bit of i
    int g = std::countr_zero(i);
    w.edges() ^= bc.generators()[g];
    fn(w);
  }
}

EnumeratedEnsemble EnumeratedEnsemble::build(const BoundaryCondition& bc,
                                             std::uint64_t max_configs) {
  EnumeratedEnsemble ens;
  for_each_config(
      bc,
      [&](const LoopConfig& w) {
        ens.index.emplace(w.edges(), (int)ens.configs.size());
        ens.configs.push_back(w.edges());
        ens.stats.emplace_back(bc.edge_count(w.edges()), bc.loop_count(w));
      },
      max_configs);
  return ens;
}

std::vector<double> EnumeratedEnsemble::probabilities(ModelParams p) const {
  std::vector<double> out(configs.size());
  double z = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out[i] = std::pow(p.x, stats[i].first) * std::pow(p.n, stats[i].second);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

LoopConfig random_even_subgraph(const BoundaryCondition& bc,
                                std::mt19937_64& rng) {
  LoopConfig w(bc.region(), bc.xi());
  for (const Bitset& g : bc.generators())
    if (rng() & 1u) w.edges() ^= g;
  return w;
}

Mcmc::Mcmc(const BoundaryCondition& bc, ModelParams p, std::uint64_t seed,
           McmcOptions opt)
    : bc_(&bc),
      p_(p),
      opt_(opt),
      rng_(seed),
      omega_(bc.region(), bc.xi()),
      vertex_epoch_(bc.region().n_vertices(), 0) {
  if (!(p.n > 0) || !(p.x > 0))
    throw std::invalid_argument("mcmc: parameters must be positive");
}

int Mcmc::loops_touching(const Bitset& omega, const std::vector<int>& va) const {
  const Region& r = bc_->region();
  ++epoch_;
  int count = 0;
  for (int v0 : va) {
    if (vertex_epoch_[v0] == epoch_) continue;
    int deg = 0, start_e = -1;
    for (int e : r.edges_of_vertex(v0))
      if (e >= 0 && omega.test(e)) {
        ++deg;
        start_e = e;
      }
    if (deg == 0) {
      vertex_epoch_[v0] = epoch_;
      continue;
    }
    // trace the loop through v0, marking its vertices
    int v = v0, e = start_e;
    do {
      vertex_epoch_[v] = epoch_;
      v = r.edge_other_vertex(e, v);
      int next = -1;
      for (int e2 : r.edges_of_vertex(v))
        if (e2 >= 0 && e2 != e && omega.test(e2)) next = e2;
      e = next;
    } while (v != v0);
    ++count;
  }
  return count;
}

double Mcmc::log_accept_ratio(const Bitset& mask) const {
  const Region& r = bc_->region();
  std::vector<int> va;
  int dm = 0;
  for (auto e = mask.find_first(); e != Bitset::npos; e = mask.find_next(e)) {
    dm += omega_.edges().test(e) ? -1 : 1;
    va.push_back(r.edge(e).vup);
    va.push_back(r.edge(e).vdown);
  }
  int before = loops_touching(omega_.edges(), va);
  Bitset flipped = omega_.edges() ^ mask;
  int after = loops_touching(flipped, va);
  return dm * std::log(p_.x) + (after - before) * std::log(p_.n);
}

void Mcmc::step() {
  const Region& r = bc_->region();
  // lazy move: with deterministic acceptance (n = x = 1) a fixed number of
  // flips per sweep would preserve the parity of the generator word and
  // make half the class unreachable at sample times
  if (std::uniform_real_distribution<>(0, 1)(rng_) < 0.1) return;
  ++proposed_;
  const Bitset* mask;
  if (r.is_torus() && bc_->whole_region() &&
      std::uniform_real_distribution<>(0, 1)(rng_) < opt_.homology_move_prob) {
    mask = &r.generator((int)(rng_() & 1u));
  } else {
    const auto& inner = bc_->inner_faces();
    int f = inner[std::uniform_int_distribution<int>(0, (int)inner.size() - 1)(
        rng_)];
    mask = &r.face_boundary(f);
  }
  double logr = log_accept_ratio(*mask);
  if (logr >= 0 ||
      std::log(std::uniform_real_distribution<>(0, 1)(rng_)) < logr) {
    omega_.edges() ^= *mask;
    ++accepted_;
  }
}

void Mcmc::sweep() {
  for (std::size_t i = 0; i < bc_->inner_faces().size(); ++i) step();
}

void Mcmc::burnin() {
  for (int i = 0; i < opt_.burnin_sweep_factor * (int)bc_->inner_faces().size();
       ++i)
    sweep();
}

void Mcmc::thin() { sweep(); }

bool has_noncontractible(const Region& r, const std::vector<Loop>& loops) {
  for (const Loop& loop : loops) {
    auto h = homology_class(r, loop);
    if (h.first != 0 || h.second != 0) return true;
  }
  return false;
}

}  // namespace loopon
