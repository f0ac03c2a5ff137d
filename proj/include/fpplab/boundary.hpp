#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fpplab/growth.hpp"
#include "fpplab/step_function.hpp"

namespace fpplab {

// Time window during which an edge sits on the edge boundary of B(s):
// [lo, hi). open_ended marks an endpoint that was never reached, in which
// case hi is the horizon and the edge is still on the boundary there.
struct BoundaryInterval {
  double lo;
  double hi;
  bool open_ended;

  double length() const { return hi - lo; }
};

std::optional<BoundaryInterval> edge_boundary_interval(const Edge& e, const PassageField& pf);

// s -> #boundary edges of B(s), exact for s in [0, horizon].
struct BoundaryTimeline {
  std::vector<double> breakpoints;
  std::vector<long> counts;
  double horizon = 0.0;

  long count_at(double s) const;
  // int_0^upto #boundary(s) ds
  double integral(double upto) const;
  StepFunction as_step_function() const;
};

// Throws if a reached vertex lies on the box face (the ball would be
// box-truncated).
BoundaryTimeline boundary_timeline(const PassageField& pf);

// Brute-force #boundary edges of B(s) by sweeping every box edge.
long count_edge_boundary(const PassageField& pf, double s);

struct ExteriorBoundary {
  std::vector<Vertex> vertex_part;
  std::vector<Edge> edge_part;
};

struct HoleComponent {
  std::size_t size;
  Vertex representative;  // lexicographically smallest member
};

struct HoleCensus {
  std::vector<HoleComponent> components;

  std::size_t size_one_count() const;
};

// All exterior/hole quantities of B(s) from one flood fill.
struct BallTopology {
  double s = 0.0;
  std::size_t ball_size = 0;
  long edge_boundary = 0;
  ExteriorBoundary exterior;
  HoleCensus holes;
  long hole_edge_boundary = 0;  // ball edges into holes
  long size_one_hole_edges = 0;
};

// Flood fill from the face of the ball's bounding region through the
// complement, nearest-neighbor adjacency. Throws if B(s) touches the box face.
BallTopology ball_topology(const PassageField& pf, double s);
ExteriorBoundary exterior_boundary_at(const PassageField& pf, double s);
HoleCensus hole_census_at(const PassageField& pf, double s);

// Leb{s in [0, horizon] : count(s) >= a s^{d-1} psi(s)} / horizon
double rough_time_density(const BoundaryTimeline& tl, double a, const std::function<double(double)>& psi, int d);

// Riemann estimate of Leb{s : #ext edge boundary(s) >= a s^{d-1}} / horizon
// from `probes` stratified midpoints.
double exterior_rough_density(const PassageField& pf, double a, int probes = 64);

struct ArrayMethodReport {
  double timeline_integral = 0.0;
  double interval_sum = 0.0;
  double relative_error = 0.0;
  std::size_t edges = 0;
  std::size_t cap_violations = 0;  // intervals longer than t_e ^ horizon
  double max_excess = 0.0;
  bool ok(double tolerance) const { return relative_error <= tolerance && cap_violations == 0; }
};

using EdgeWeightFn = std::function<double(const Edge&)>;

ArrayMethodReport array_method_identity_check(const PassageField& pf, const EdgeWeightFn& weight);

}  // namespace fpplab
