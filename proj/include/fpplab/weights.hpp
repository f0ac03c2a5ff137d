#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fpplab/lattice.hpp"

namespace fpplab {

struct Exponential {
  double rate = 1.0;
};
struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
struct Dirac {
  double value = 1.0;
};
// P(t_e = 0) = p0, P(t_e = high) = 1 - p0.
struct BernoulliZero {
  double p0 = 0.0;
  double high = 1.0;
};
// P(t_e > y) = min(1, y^-beta); support [1, inf).
struct ParetoEdgeTail {
  double beta = 1.0;
};
// Iterated-power tower x_1 = 3, x_{n+1} = x_n^{x_n}, with
// P(t_e > t) = (log x_n)^{-1/(2d)} on [x_{n-1}, x_n), 1 below 3 and 0 from
// x_levels on (the truncation atom).
struct TowerTail {
  int levels = 3;
  int dim = 2;
};

using ModelParams = std::variant<Exponential, Uniform, Dirac, BernoulliZero, ParetoEdgeTail, TowerTail>;

// Critical bond-percolation thresholds used by the subcriticality guard.
double critical_probability(int d);

class WeightModel {
 public:
  explicit WeightModel(ModelParams params);

  static WeightModel exponential(double rate) { return WeightModel(Exponential{rate}); }
  static WeightModel uniform(double lo, double hi) { return WeightModel(Uniform{lo, hi}); }
  static WeightModel dirac(double c) { return WeightModel(Dirac{c}); }
  static WeightModel bernoulli_zero(double p0, double high) { return WeightModel(BernoulliZero{p0, high}); }
  static WeightModel pareto(double beta) { return WeightModel(ParetoEdgeTail{beta}); }
  static WeightModel tower(int levels, int d) { return WeightModel(TowerTail{levels, d}); }

  const ModelParams& params() const { return params_; }

  double cdf(double y) const;
  // P(t_e > y)
  double survival(double y) const;
  // generalized inverse inf{y : cdf(y) >= u}, u in (0,1)
  double quantile(double u) const;
  double zero_mass() const { return cdf(0.0); }
  // smallest y with survival(y) == 0, or +inf
  double essential_sup() const;

  bool is_subcritical(int d) const { return zero_mass() < critical_probability(d); }

  // "name key=value ..." with 17 significant digits; round-trips through parse().
  std::string descriptor() const;
  static WeightModel parse(const std::string& text);
  std::uint64_t hash() const;

  friend bool operator==(const WeightModel& a, const WeightModel& b) { return a.descriptor() == b.descriptor(); }

 private:
  ModelParams params_;
  std::vector<double> tower_points_;      // x_1 .. x_levels
  std::vector<double> tower_log_points_;  // log x_1 .. log x_levels
};

// Thresholds x_1..x_levels and their logs for the tower construction.
// log x_{n+1} = x_n log x_n stays finite one level further than x_n itself.
struct TowerLevels {
  std::vector<double> points;
  std::vector<double> log_points;
};
TowerLevels tower_levels(int levels);

// Deterministic environment: weight(e) = quantile(u(seed, e)) with u drawn
// from a counter-based hash of (seed, edge coordinates, axis).
class EdgeWeightField {
 public:
  EdgeWeightField(WeightModel model, std::uint64_t seed) : model_(std::move(model)), seed_(seed) {}

  const WeightModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

  double uniform(const Edge& e) const;
  double weight(const Edge& e) const { return model_.quantile(uniform(e)); }
  // the edge from vertex v in direction +axis
  double weight_from(const Vertex& v, int axis) const { return weight(Edge{v, axis}); }

 private:
  WeightModel model_;
  std::uint64_t seed_;
};

// Y = min of 2d independent copies of t_e.
class YStatistic {
 public:
  YStatistic(WeightModel model, int d);

  const WeightModel& model() const { return model_; }
  int dim() const { return dim_; }

  // P(Y > y) = (1 - F(y))^{2d}
  double tail(double y) const;
  double cdf(double y) const { return 1.0 - tail(y); }
  // E[Y ^ t] = int_0^t P(Y > y) dy, closed form for every model
  double expected_truncated(double t) const;

 private:
  WeightModel model_;
  int dim_;
};

struct BoundRatio {
  double lower;  // t * P(Y > t) v 1
  double upper;  // E[Y ^ t]
  double ratio;
};
BoundRatio bound_ratio(const YStatistic& ys, double t);

double tower_survival(int levels, int d, double t);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fpplab
