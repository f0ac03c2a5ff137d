#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpplab/boundary.hpp"
#include "fpplab/growth.hpp"
#include "fpplab/step_function.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

// ---- regularity (rough-time) lemma ----

struct RegularityResult {
  double measured = 0.0;  // Leb{s in [0,t] : phi(s) >= a s^{d-1} psi(s)} / t
  double bound = 0.0;     // 2 s0 / t + 2^{d+1} C / a
  bool hypothesis_ok = true;
  std::string violation;  // first violated hypothesis, empty if none
  bool pass = false;      // hypotheses hold and measured <= bound
};

// Hypotheses are probed on the breakpoints of phi in (s0, t] plus a uniform
// grid of `grid` points; a violation is reported and the check does not pass.
RegularityResult regularity_bound_check(const StepFunction& phi, const std::function<double(double)>& psi, double c,
                                        double s0, double a, int d, double t, int grid = 2048);

struct RegularitySearch {
  int trials = 0;
  int violations = 0;  // admissible instance with measured > bound
  int inadmissible = 0;
  double worst_margin = 0.0;  // max measured - bound over admissible instances (negative when all pass)
};
// Random piecewise-constant phi, psi from {1, s^g (0 <= g <= 1), log(e + s)},
// C set just above the empirical sup of int_0^tau phi / (tau^d psi(tau)).
RegularitySearch regularity_randomized_search(int trials, std::uint64_t seed);

// ---- truncation lemma ----

struct TruncationRow {
  long n;
  double cap;             // C_n n^{1/d}
  double mean_exact;      // E Z from the closed form
  double mean_mc;         // Monte Carlo mean of Z
  double mean_mc_stderr;
  double failure_frequency;  // P(sum Z > 2 n E Z)
  int replications;
};
// Z_i = Y_i ^ (c n^{1/d}) with Y the minimum of 2d edge weights.
std::vector<TruncationRow> truncation_lemma_check(const WeightModel& model, int d, const std::vector<long>& n_grid,
                                                  double c, int replications, std::uint64_t seed);

// ---- Bernstein ----

struct BernsteinBound {
  double raw;      // 2 exp(-t^2 / (2 (b t / 3 + sum E X^2)))
  double clamped;  // min(1, raw)
};
BernsteinBound bernstein_bound(double b, double second_moment_sum, double t);

struct BernsteinTail {
  double empirical;  // P(|S - n p| >= t)
  double bound;
  int replications;
};
// Sums of n Bernoulli(p) variables, centered; b = max(p, 1-p).
BernsteinTail bernstein_bernoulli_check(double p, long n, double t, int replications, std::uint64_t seed);

// ---- exponent fits ----

struct ExponentFit {
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double stderr_slope = 0.0;
};
// Least squares of log(value) on log(t); needs >= 4 points, values > 0.
ExponentFit fit_exponent(std::vector<std::pair<double, double>> points);

// ---- sector decomposition (d = 2) ----

struct SectorDecomposition {
  double t = 0.0;
  double s = 0.0;        // 2t
  double scale = 1.0;    // shape is the Euclidean disk of this radius
  double width = 0.0;    // c t^{1/2} log t
  std::vector<std::array<double, 2>> rays;
  // S~_i(t): lattice points of Ann'(t) whose unit cell meets ray i
  std::vector<std::vector<Vertex>> cells;
  std::size_t annulus_points = 0;
  std::size_t uncovered = 0;  // annulus points met by no ray

  // Ann'(t) = (t + w) B \ (t - w) B
  bool in_annulus(const Vertex& y) const;
  bool covered() const { return uncovered == 0; }
};

// Rays through points of the circle of radius s * scale spaced <= 1/2 apart,
// i.e. ceil(4 pi s scale) of them. Coverage of Ann'(t) is verified directly.
SectorDecomposition build_sectors(double t, double scale = 1.0, double c = 1.0);

// Lattice cells [y, y+1)^2 crossed by the ray {r v : r_lo <= r <= r_hi}.
std::vector<Vertex> ray_cells(const std::array<double, 2>& v, double r_lo, double r_hi);

struct SectorProfile {
  std::vector<long> counts;  // boundary edges of B(t) with an endpoint in S~_i(t)
  long max_count = 0;
  long total = 0;            // sum over sectors (with multiplicity)
  long boundary = 0;         // #boundary edges of B(t)
  long uncovered_edges = 0;  // boundary edges with no endpoint in any S~_i(t)
};
SectorProfile sector_boundary_profile(const PassageField& pf, const SectorDecomposition& sectors, double t);

// ---- Busemann increments ----

// T(0,[kx]) - T(0,[lx]) as an unevaluated sum hi + lo that equals the
// difference of the two passage times exactly.
struct ExactDifference {
  double hi = 0.0;
  double lo = 0.0;
  double value() const { return hi + lo; }
};
ExactDifference exact_difference(double a, double b);

// nullopt when either cell is unreached; throws when a cell is outside the box.
std::optional<ExactDifference> busemann_increment(const PassageField& pf, std::span<const double> x, double k,
                                                  double l);

}  // namespace fpplab
