#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpplab/lattice.hpp"
#include "fpplab/weights.hpp"

namespace fpplab {

// Explicit per-edge weights on a box; used for hand-built fixtures and for
// freezing a field so it can be perturbed.
class WeightTable {
 public:
  WeightTable(LatticeBox box, double fill);
  static WeightTable from_field(const EdgeWeightField& field, const LatticeBox& box);

  const LatticeBox& box() const { return box_; }
  double weight(const Edge& e) const;
  double weight_at(std::size_t base_index, int axis) const {
    return w_[base_index * static_cast<std::size_t>(box_.dim()) + static_cast<std::size_t>(axis)];
  }
  void set(const Edge& e, double w);
  // sets every edge incident to v
  void set_incident(const Vertex& v, double w);
  void add_to_all(double delta);

 private:
  std::size_t slot(const Edge& e) const;

  LatticeBox box_;
  std::vector<double> w_;
};

// Passage times T(source, x) restricted to paths inside the box, truncated at
// the horizon. Unreached vertices (T > horizon) hold NaN.
class PassageField {
 public:
  PassageField(LatticeBox box, double horizon, std::vector<double> times, Vertex source = {});

  const LatticeBox& box() const { return box_; }
  double horizon() const { return horizon_; }
  const Vertex& source() const { return source_; }
  int dim() const { return box_.dim(); }
  std::span<const double> times() const { return times_; }

  bool reached(std::size_t i) const { return !std::isnan(times_[i]); }
  double time_at(std::size_t i) const { return times_[i]; }
  std::optional<double> time(const Vertex& v) const;
  std::size_t reached_count() const;

  // Ball B(s) membership for s <= horizon.
  bool in_ball(std::size_t i, double s) const { return times_[i] <= s; }
  std::size_t ball_size(double s) const;

  // provenance carried into binary dumps
  std::uint64_t seed = 0;
  std::uint64_t model_hash = 0;

 private:
  LatticeBox box_;
  double horizon_;
  Vertex source_;
  std::vector<double> times_;
};

// Dijkstra from the source (default: origin). Rejects models with
// P(t_e = 0) >= p_c(d) and a zero-radius box with positive horizon.
PassageField compute_passage(const EdgeWeightField& field, const LatticeBox& box, double horizon);
PassageField compute_passage(const EdgeWeightField& field, const LatticeBox& box, double horizon,
                             const Vertex& source);
PassageField compute_passage(const WeightTable& table, double horizon);
PassageField compute_passage(const WeightTable& table, double horizon, const Vertex& source);

// Label-correcting sweep over all box edges until nothing relaxes. O(V E);
// reference solver for validating compute_passage.
PassageField reference_passage(const EdgeWeightField& field, const LatticeBox& box, double horizon);

struct AdoptionEvent {
  double time;
  Vertex vertex;
};

// (T(0,x), x) for every reached x, sorted by time then lexicographically.
std::vector<AdoptionEvent> adoption_schedule(const PassageField& pf);

// True iff every reached vertex lies in S(floor(M * horizon)).
// Throws when the box does not contain that S.
bool check_containment(const PassageField& pf, double margin);

// T(0, [p]) for a real point p; nullopt when [p] is unreached.
std::optional<double> passage_at_real_point(const PassageField& pf, std::span<const double> p);

void write_passage_field(std::ostream& out, const PassageField& pf);
PassageField read_passage_field(std::istream& in);

}  // namespace fpplab
