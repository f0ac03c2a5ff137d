#pragma once

#include <cstdint>
#include <vector>

#include "fpplab/boundary.hpp"
#include "fpplab/lattice.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

// A finite *-connected vertex set, stored sorted and unique.
struct Contour {
  std::vector<Vertex> vertices;

  explicit Contour(std::vector<Vertex> v);
  std::size_t size() const { return vertices.size(); }
};

// One of the 2^d d! signed axis permutations; index 0 is the identity.
// Applied to the *-neighbor generator order during enumeration.
int symmetry_count(int d);
Vertex apply_symmetry(int symmetry, const Vertex& v);

// Largest n accepted by the enumerators for a given dimension.
int animal_budget(int d);

// *-connected n-sets up to translation (canonical form: lexicographically
// least vertex at the origin).
std::uint64_t count_fixed_star_animals(int n, int d, int symmetry = 0);

// *-connected n-sets containing the origin. Every translation class has
// exactly n members containing 0, so this is n * count_fixed_star_animals.
std::uint64_t enumerate_star_animals(int n, int d, int symmetry = 0);

// *-connected n-sets (anywhere) that enclose the origin; d = 2 only.
std::uint64_t count_enclosing_contours(int n);

// n * [(3^d)^{3^d} / (3^d - 1)^{3^d - 1}]^n
double contour_count_bound(int n, int d);
double contour_growth_base(int d);

// W_alpha: vertices of W touching an edge with t_e > alpha.
std::vector<Vertex> alpha_flagged(const Contour& w, const EdgeWeightFn& weight, double alpha);
// #W_alpha >= #W / 2, i.e. #W_alpha >= ceil(#W / 2)
bool is_alpha_bad(const Contour& w, const EdgeWeightFn& weight, double alpha);

// True iff the vertex exterior boundary of B(s) is *-connected.
bool verify_timar(const PassageField& pf, double s);

struct BadContourBin {
  std::size_t size_lo;
  std::size_t size_hi;  // inclusive
  std::size_t probes = 0;
  std::size_t bad = 0;
  double frequency() const { return probes ? static_cast<double>(bad) / static_cast<double>(probes) : 0.0; }
};

struct BadContourTable {
  std::vector<BadContourBin> bins;
  // least squares of log(frequency) on bin midpoint size, bins with bad > 0
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::size_t fitted_bins = 0;
  std::size_t probes = 0;
  std::size_t non_enclosing = 0;  // contours failing the enclosure or *-connectivity checks
};

struct BadContourParams {
  WeightModel model = WeightModel::exponential(1.0);
  double alpha = 3.0;
  int dim = 2;
  double horizon = 64.0;
  int box_radius = 200;
  int probes_per_run = 16;
  std::vector<std::size_t> bin_edges{4, 8, 16, 32, 64, 128, 256, 512, 1024};
  int replications = 100;
  std::uint64_t seed = 1;
};

// Runs replications, takes the exterior vertex boundary of B(s) at evenly
// spaced probe times as the contour, and tabulates alpha-badness by size.
BadContourTable bad_contour_rate(const BadContourParams& params);

}  // namespace fpplab
