#include "fpplab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpplab {

namespace {

// Axis-aligned sub-box [lo, hi] of the lattice box with its own row-major
// indexing.
struct Region {
  const LatticeBox* box;
  std::array<int, kMaxDim> lo{}, hi{};
  std::array<std::size_t, kMaxDim> strides{};
  std::size_t count = 1;

  Region(const LatticeBox& b, std::array<int, kMaxDim> l, std::array<int, kMaxDim> h) : box(&b), lo(l), hi(h) {
    for (int a = b.dim() - 1; a >= 0; --a) {
      auto ua = static_cast<std::size_t>(a);
      strides[ua] = count;
      count *= static_cast<std::size_t>(hi[ua] - lo[ua] + 1);
    }
  }
  int coord(std::size_t local, int a) const {
    auto ua = static_cast<std::size_t>(a);
    return static_cast<int>((local / strides[ua]) % static_cast<std::size_t>(hi[ua] - lo[ua] + 1)) + lo[ua];
  }
  std::size_t global(std::size_t local) const {
    std::size_t g = 0;
    for (int a = 0; a < box->dim(); ++a)
      g += static_cast<std::size_t>(coord(local, a) + box->radius()) * box->stride(a);
    return g;
  }
  bool on_face(std::size_t local) const {
    for (int a = 0; a < box->dim(); ++a) {
      int c = coord(local, a);
      if (c == lo[static_cast<std::size_t>(a)] || c == hi[static_cast<std::size_t>(a)]) return true;
    }
    return false;
  }
  Vertex vertex(std::size_t local) const {
    Vertex v = Vertex::origin(box->dim());
    for (int a = 0; a < box->dim(); ++a) v[a] = coord(local, a);
    return v;
  }
};

enum : std::uint8_t { kOpen = 0, kBall = 1, kExterior = 2, kHole = 3 };

}  // namespace

std::optional<BoundaryInterval> edge_boundary_interval(const Edge& e, const PassageField& pf) {
  const LatticeBox& box = pf.box();
  Vertex tip = e.tip();
  if (!box.contains(e.base) || !box.contains(tip))
    throw std::out_of_range("edge_boundary_interval: endpoint outside box");
  double tx = pf.time_at(box.index(e.base));
  double ty = pf.time_at(box.index(tip));
  bool rx = !std::isnan(tx), ry = !std::isnan(ty);
  if (!rx && !ry) return std::nullopt;
  if (rx != ry) {
    double lo = rx ? tx : ty;
    return BoundaryInterval{lo, pf.horizon(), true};
  }
  if (tx == ty) return std::nullopt;
  return BoundaryInterval{std::min(tx, ty), std::max(tx, ty), false};
}

long BoundaryTimeline::count_at(double s) const {
  if (breakpoints.empty() || s < breakpoints.front()) return 0;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
  return counts[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

double BoundaryTimeline::integral(double upto) const { return as_step_function().integral(upto); }

StepFunction BoundaryTimeline::as_step_function() const {
  StepFunction f;
  f.breaks = breakpoints;
  f.values.assign(counts.begin(), counts.end());
  f.end = horizon;
  return f;
}

BoundaryTimeline boundary_timeline(const PassageField& pf) {
  const LatticeBox& box = pf.box();
  const int d = box.dim();
  std::vector<std::pair<double, int>> events;
  events.reserve(pf.reached_count());
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (!pf.reached(i)) continue;
    if (box.on_face(i))
      throw std::invalid_argument("boundary_timeline: ball reaches the box face (guard failure)");
    const double ti = pf.time_at(i);
    int delta = 0;
    for (int a = 0; a < d; ++a) {
      for (std::size_t j : {i + box.stride(a), i - box.stride(a)}) {
        double tj = pf.time_at(j);
        if (std::isnan(tj) || tj > ti) ++delta;
        else if (tj < ti) --delta;
      }
    }
    events.emplace_back(ti, delta);
  }
  std::sort(events.begin(), events.end());
  BoundaryTimeline tl;
  tl.horizon = pf.horizon();
  long running = 0;
  for (std::size_t k = 0; k < events.size();) {
    double t = events[k].first;
    while (k < events.size() && events[k].first == t) running += events[k++].second;
    tl.breakpoints.push_back(t);
    tl.counts.push_back(running);
  }
  return tl;
}

long count_edge_boundary(const PassageField& pf, double s) {
  const LatticeBox& box = pf.box();
  long n = 0;
  box.for_each_edge([&](std::size_t i, int a) {
    bool x = pf.in_ball(i, s);
    bool y = pf.in_ball(i + box.stride(a), s);
    if (x != y) ++n;
  });
  return n;
}

std::size_t HoleCensus::size_one_count() const {
  return static_cast<std::size_t>(
      std::count_if(components.begin(), components.end(), [](const HoleComponent& h) { return h.size == 1; }));
}

BallTopology ball_topology(const PassageField& pf, double s) {
  const LatticeBox& box = pf.box();
  const int d = box.dim();
  BallTopology out;
  out.s = s;

  std::array<int, kMaxDim> lo{}, hi{};
  lo.fill(0);
  hi.fill(0);
  bool any = false;
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (!pf.in_ball(i, s)) continue;
    if (box.on_face(i))
      throw std::invalid_argument("ball_topology: ball touches the box face (guard failure)");
    ++out.ball_size;
    for (int a = 0; a < d; ++a) {
      auto ua = static_cast<std::size_t>(a);
      int c = box.coord(i, a);
      lo[ua] = any ? std::min(lo[ua], c) : c;
      hi[ua] = any ? std::max(hi[ua], c) : c;
    }
    any = true;
  }
  if (!any) return out;
  for (int a = 0; a < d; ++a) {
    --lo[static_cast<std::size_t>(a)];
    ++hi[static_cast<std::size_t>(a)];
  }
  Region region(box, lo, hi);

  std::vector<std::uint8_t> mark(region.count, kOpen);
  std::vector<std::size_t> stack;
  for (std::size_t l = 0; l < region.count; ++l) {
    if (pf.in_ball(region.global(l), s)) mark[l] = kBall;
    else if (region.on_face(l)) {
      mark[l] = kExterior;
      stack.push_back(l);
    }
  }
  auto for_each_neighbor = [&](std::size_t l, auto&& fn) {
    for (int a = 0; a < d; ++a) {
      auto ua = static_cast<std::size_t>(a);
      int c = region.coord(l, a);
      if (c < hi[ua]) fn(l + region.strides[ua]);
      if (c > lo[ua]) fn(l - region.strides[ua]);
    }
  };
  while (!stack.empty()) {
    std::size_t l = stack.back();
    stack.pop_back();
    for_each_neighbor(l, [&](std::size_t m) {
      if (mark[m] == kOpen) {
        mark[m] = kExterior;
        stack.push_back(m);
      }
    });
  }

  // exterior boundary and edge boundary, in local (= lexicographic) order
  for (std::size_t l = 0; l < region.count; ++l) {
    if (mark[l] == kBall) continue;
    int ball_nbrs = 0;
    for_each_neighbor(l, [&](std::size_t m) { ball_nbrs += mark[m] == kBall; });
    if (ball_nbrs == 0) continue;
    out.edge_boundary += ball_nbrs;
    if (mark[l] == kExterior) {
      Vertex v = region.vertex(l);
      out.exterior.vertex_part.push_back(v);
      for (const Vertex& n : neighbors(v))
        if (box.contains(n) && pf.in_ball(box.index(n), s))
          out.exterior.edge_part.push_back(canonical_edge(v, n));
    }
  }
  std::sort(out.exterior.edge_part.begin(), out.exterior.edge_part.end());

  // holes: remaining open cells
  for (std::size_t l = 0; l < region.count; ++l) {
    if (mark[l] != kOpen) continue;
    HoleComponent comp{0, region.vertex(l)};
    long edges_into_ball = 0;
    mark[l] = kHole;
    stack.push_back(l);
    while (!stack.empty()) {
      std::size_t m = stack.back();
      stack.pop_back();
      ++comp.size;
      for_each_neighbor(m, [&](std::size_t q) {
        if (mark[q] == kBall) ++edges_into_ball;
        else if (mark[q] == kOpen) {
          mark[q] = kHole;
          stack.push_back(q);
        }
      });
    }
    out.hole_edge_boundary += edges_into_ball;
    if (comp.size == 1) out.size_one_hole_edges += edges_into_ball;
    out.holes.components.push_back(comp);
  }
  return out;
}

ExteriorBoundary exterior_boundary_at(const PassageField& pf, double s) { return ball_topology(pf, s).exterior; }

HoleCensus hole_census_at(const PassageField& pf, double s) { return ball_topology(pf, s).holes; }

double rough_time_density(const BoundaryTimeline& tl, double a, const std::function<double(double)>& psi, int d) {
  if (!(tl.horizon > 0.0)) return 0.0;
  return threshold_measure(tl.as_step_function(), a, psi, d) / tl.horizon;
}

double exterior_rough_density(const PassageField& pf, double a, int probes) {
  if (probes < 1) throw std::invalid_argument("exterior_rough_density: probes must be >= 1");
  const double h = pf.horizon();
  int hits = 0;
  for (int k = 0; k < probes; ++k) {
    double s = h * (k + 0.5) / probes;
    auto top = ball_topology(pf, s);
    double ext = static_cast<double>(top.exterior.edge_part.size());
    if (ext >= a * std::pow(s, pf.dim() - 1)) ++hits;
  }
  return static_cast<double>(hits) / probes;
}

ArrayMethodReport array_method_identity_check(const PassageField& pf, const EdgeWeightFn& weight) {
  ArrayMethodReport rep;
  const LatticeBox& box = pf.box();
  const double h = pf.horizon();
  BoundaryTimeline tl = boundary_timeline(pf);
  rep.timeline_integral = tl.integral(h);

  auto visit = [&](std::size_t base, int a) {
    Edge e{box.vertex_at(base), a};
    auto iv = edge_boundary_interval(e, pf);
    ++rep.edges;
    if (!iv) return;
    double len = iv->length();
    rep.interval_sum += len;
    double cap = std::min(weight(e), h);
    double excess = len - cap;
    rep.max_excess = std::max(rep.max_excess, excess);
    // passage times are rounded sums, allow a few ulps
    if (excess > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, h)) ++rep.cap_violations;
  };
  // every edge with a reached endpoint, once
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (!pf.reached(i)) continue;
    for (int a = 0; a < box.dim(); ++a) {
      int c = box.coord(i, a);
      if (c < box.radius()) visit(i, a);
      if (c > -box.radius() && !pf.reached(i - box.stride(a))) visit(i - box.stride(a), a);
    }
  }
  double denom = std::max(std::abs(rep.timeline_integral), 1e-300);
  rep.relative_error = std::abs(rep.timeline_integral - rep.interval_sum) / denom;
  return rep;
}

}  // namespace fpplab
