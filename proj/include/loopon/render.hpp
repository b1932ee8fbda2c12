#pragma once

#include <string>

#include "coupling.hpp"

namespace loopon {

struct RenderOptions {
  double scale = 30.0;   // pixels per lattice unit
  double margin = 1.2;   // lattice units around the bounding box
};

// Deterministic SVG snapshots laid out from the lattice coordinates.
// Loops are colored by length rank, triples distinguish red loops, blue
// loops and dual defect segments, spins fill faces by sign.
std::string render_region_svg(const Region& r, RenderOptions opt = {});
std::string render_loops_svg(const LoopConfig& omega, RenderOptions opt = {});
std::string render_triple_svg(const Region& r, const CoherentTriple& t,
                              RenderOptions opt = {});
std::string render_spins_svg(const SpinConfig& sigma,
                             const Bitset* eta = nullptr,
                             RenderOptions opt = {});

// throws std::runtime_error when the path cannot be written
void write_text_file(const std::string& path, const std::string& content);

}  // namespace loopon
