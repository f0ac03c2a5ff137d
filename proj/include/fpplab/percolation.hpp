#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fpplab/boundary.hpp"
#include "fpplab/growth.hpp"
#include "fpplab/lattice.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

// Bond configuration omega(e) = 1{t_e <= M} on a box with its open clusters.
// Cluster 0 is the largest (ties: the one holding the smaller vertex index);
// the rest are numbered by their smallest vertex index.
class PercolationView {
 public:
  PercolationView(const EdgeWeightFn& weight, double threshold, LatticeBox box);

  const LatticeBox& box() const { return box_; }
  double threshold() const { return threshold_; }

  bool open(std::size_t base_index, int axis) const {
    return open_[base_index * static_cast<std::size_t>(box_.dim()) + static_cast<std::size_t>(axis)] != 0;
  }
  bool open(const Edge& e) const { return open(box_.index(e.base), e.axis); }

  int label(std::size_t i) const { return labels_[i]; }
  int label(const Vertex& v) const { return labels_[box_.index(v)]; }
  bool in_largest(std::size_t i) const { return labels_[i] == 0; }
  bool in_largest(const Vertex& v) const { return labels_[box_.index(v)] == 0; }

  std::size_t cluster_count() const { return sizes_.size(); }
  std::size_t cluster_size(int label) const { return sizes_[static_cast<std::size_t>(label)]; }
  // largest cluster touches all 2d faces
  bool spans() const { return spans_; }
  double open_fraction() const;

 private:
  LatticeBox box_;
  double threshold_;
  std::vector<std::uint8_t> open_;
  std::vector<int> labels_;
  std::vector<std::size_t> sizes_;
  bool spans_ = false;
};

PercolationView label_clusters(const EdgeWeightField& field, double threshold, const LatticeBox& box);
PercolationView label_clusters(const WeightTable& table, double threshold);

// Hop count between x and y inside the open subgraph; nullopt when they lie
// in different clusters.
std::optional<long> chemical_distance(const PercolationView& view, const Vertex& x, const Vertex& y);

// Hop counts from `source` to every vertex of its cluster, -1 elsewhere.
std::vector<long> chemical_distances_from(const PercolationView& view, const Vertex& source);

struct LinfScatter {
  struct Row {
    long linf;
    double passage;
  };
  std::vector<Row> rows;    // x in the largest cluster, reached, |x|_inf >= min_linf
  double max_ratio = 0.0;   // max T(0,x) / |x|_inf over rows
  long min_linf = 8;
};

// Throws if the origin is not in the largest cluster.
LinfScatter passage_vs_linf(const EdgeWeightField& field, double threshold, const LatticeBox& box, double horizon,
                            long min_linf = 8);

// Empirical constants frozen into configs: D1 is the 0.1% quantile of
// T(0,z)/|z|_1 and D4 the 99.9% quantile of dist_C(0,x)/|x|_inf, both over
// |x|_inf >= min_linf.
struct CalibratedConstants {
  double d1;
  double d4;
  std::size_t passage_samples;
  std::size_t chemical_samples;
};
CalibratedConstants calibrate_constants(const EdgeWeightField& field, double threshold, const LatticeBox& box,
                                        double horizon, long min_linf = 8);

// Level-n parameters of the hole-candidate count:
// delta = D1 / (16 D4 M), R = 1/(1-delta), t_n = 4 D4 M R^{n+1}.
struct HoleCandidateSpec {
  int n = 0;
  double m = 1.0;
  double d1 = 0.0;
  double d4 = 0.0;
  double delta = 0.0;
  double r = 1.0;
  double t_n = 0.0;

  static HoleCandidateSpec make(int n, double m, double d1, double d4);
  // same family with delta given directly (D1 is then implied)
  static HoleCandidateSpec with_delta(int n, double m, double d4, double delta);

  // Ann(R^n, R^{n+1}), floors applied
  Annulus annulus() const;
  // box radius needed to see every candidate and its incident edges
  int required_radius() const;
};

// v in 3Z^d with v - e1 in Ann(R^n, R^{n+1}), in lexicographic order.
std::vector<Vertex> candidate_sites(const HoleCandidateSpec& spec, int d);

// L_n: candidate sites v with v - e1 in the largest cluster and every edge at
// v heavier than t_n.
std::size_t count_hole_candidates(const PercolationView& view, const EdgeWeightFn& weight,
                                  const HoleCandidateSpec& spec);

struct ShieldingParams {
  WeightModel model = WeightModel::uniform(0.0, 1.0);
  double threshold = 0.9;  // M, open iff t_e <= M
  double heavy = 0.2;       // N counts v in V with every incident edge > heavy
  int n = 2;
  double r = 5.0 / 3.0;
  std::vector<std::size_t> subset{0, 2, 4};  // positions of V among candidate_sites
  int box_radius = 12;
  int replications = 10000;
  std::uint64_t seed = 1;
};

struct ShieldingReport {
  std::vector<Vertex> sites;
  std::vector<Vertex> subset;
  // counts[k][0]: N = k and V_n != V, counts[k][1]: N = k and V_n = V
  std::vector<std::array<std::size_t, 2>> counts;
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t event_hits = 0;
  std::size_t access_overlaps = 0;     // replications where the two edge sets met
  std::size_t shield_mismatches = 0;   // V subset of B_n but A_n != A'_n(V)
};

ShieldingReport shielded_independence_check(const ShieldingParams& params);

// Pearson chi-square test of independence on an r x 2 table after pooling
// adjacent rows until every expected count is >= 5. Rows with no mass are
// dropped. Returns {statistic, dof, p-value}.
struct ChiSquareResult {
  double statistic;
  int dof;
  double p_value;
};
ChiSquareResult chi_square_independence(const std::vector<std::array<std::size_t, 2>>& table);

}  // namespace fpplab
