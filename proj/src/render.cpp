#include "loopon/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace loopon {

namespace {

struct P {
  double x = 0, y = 0;
};

P face_center(FaceCoord f) { return {f.k + 0.5 * f.l, f.l * 0.8660254037844386}; }

P vertex_pos(VertexCoord v) {
  P p;
  for (FaceCoord f : corner_faces(v)) {
    P c = face_center(f);
    p.x += c.x / 3;
    p.y += c.y / 3;
  }
  return p;
}

// fixed-precision svg writer; output is byte-stable across runs
class Canvas {
 public:
  Canvas(const Region& r, RenderOptions opt) : r_(r), opt_(opt) {
    vpos_.resize(r.n_vertices());
    for (int v = 0; v < r.n_vertices(); ++v) {
      vpos_[v] = vertex_pos(r.vertex(v));
      lo_.x = std::min(lo_.x, vpos_[v].x);
      lo_.y = std::min(lo_.y, vpos_[v].y);
      hi_.x = std::max(hi_.x, vpos_[v].x);
      hi_.y = std::max(hi_.y, vpos_[v].y);
    }
  }

  P map(P p) const {
    return {(p.x - lo_.x + opt_.margin) * opt_.scale,
            (hi_.y - p.y + opt_.margin) * opt_.scale};
  }
  P vertex(int v) const { return map(vpos_[v]); }
  P face(FaceCoord f) const { return map(face_center(f)); }

  void line(P a, P b, const char* style) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "style=\"%s\"/>\n",
                  a.x, a.y, b.x, b.y, style);
    body_ += buf;
  }

  void edge(int e, const char* style) {
    const Region::Edge& ed = r_.edge(e);
    line(vertex(ed.vup), vertex(ed.vdown), style);
  }

  void hexagon(FaceCoord f, const char* fill) {
    std::string pts;
    char buf[64];
    for (VertexCoord c : face_corners(f)) {
      P p = map(vertex_pos(c));
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", p.x, p.y);
      pts += buf;
    }
    body_ += "<polygon points=\"" + pts + "\" fill=\"" + fill +
             "\" stroke=\"none\"/>\n";
  }

  std::string finish() const {
    double w = (hi_.x - lo_.x + 2 * opt_.margin) * opt_.scale;
    double h = (hi_.y - lo_.y + 2 * opt_.margin) * opt_.scale;
    char head[160];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                  "height=\"%.0f\">\n",
                  std::ceil(w), std::ceil(h));
    return std::string(head) + body_ + "</svg>\n";
  }

 private:
  const Region& r_;
  RenderOptions opt_;
  std::vector<P> vpos_;
  P lo_{1e18, 1e18}, hi_{-1e18, -1e18};
  std::string body_;
};

const char* kSkeleton = "stroke:#cccccc;stroke-width:1";

void draw_skeleton(Canvas& c, const Region& r) {
  for (int e = 0; e < r.n_edges(); ++e) c.edge(e, kSkeleton);
}

// loop stroke styles by length rank; long loops get the vivid colors
std::string rank_style(int rank) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                  "#ff7f0e"};
  const char* color = rank < 5 ? palette[rank] : "#555555";
  return std::string("stroke:") + color + ";stroke-width:3";
}

void draw_ranked_loops(Canvas& c, const Region& r, std::vector<Loop> loops) {
  std::vector<int> order(loops.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (loops[a].length() != loops[b].length())
      return loops[a].length() > loops[b].length();
    return a < b;
  });
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    std::string style = rank_style((int)rank);
    for (int e : loops[order[rank]].edges) c.edge(e, style.c_str());
  }
}

}  // namespace

std::string render_region_svg(const Region& r, RenderOptions opt) {
  Canvas c(r, opt);
  draw_skeleton(c, r);
  return c.finish();
}

std::string render_loops_svg(const LoopConfig& omega, RenderOptions opt) {
  const Region& r = omega.region();
  Canvas c(r, opt);
  draw_skeleton(c, r);
  draw_ranked_loops(c, r, omega.decompose());
  return c.finish();
}

std::string render_triple_svg(const Region& r, const CoherentTriple& t,
                              RenderOptions opt) {
  Canvas c(r, opt);
  draw_skeleton(c, r);
  for (int e = 0; e < r.n_edges(); ++e) {
    if (t.red.has_edge(e)) c.edge(e, "stroke:#d62728;stroke-width:3");
    if (t.blue.has_edge(e)) c.edge(e, "stroke:#1f77b4;stroke-width:3");
  }
  // defect edges drawn as dual segments between the separated faces
  for (int e = 0; e < r.n_edges(); ++e) {
    if (!t.eta.test(e)) continue;
    const Region::Edge& ed = r.edge(e);
    c.line(c.face(ed.fa), c.face(ed.fb),
           "stroke:#2ca02c;stroke-width:2;stroke-dasharray:4 2");
  }
  return c.finish();
}

std::string render_spins_svg(const SpinConfig& sigma, const Bitset* eta,
                             RenderOptions opt) {
  const Region& r = *sigma.region;
  Canvas c(r, opt);
  for (int d = 0; d < r.n_dual_vertices(); ++d)
    c.hexagon(r.dual_coord(d), sigma.spin(d) > 0 ? "#fde9c8" : "#9ecae1");
  draw_skeleton(c, r);
  if (eta) {
    for (int e = 0; e < r.n_edges(); ++e) {
      if (!eta->test(e)) continue;
      const Region::Edge& ed = r.edge(e);
      c.line(c.face(ed.fa), c.face(ed.fb),
             "stroke:#2ca02c;stroke-width:2;stroke-dasharray:4 2");
    }
  }
  return c.finish();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out.flush()) throw std::runtime_error("cannot write " + path);
}

}  // namespace loopon
