#include <cmath>
#include <set>

#include "doctest.h"
#include "fpplab/boundary.hpp"
#include "fpplab/seeds.hpp"
#include "oracles.hpp"

using namespace fpplab;

namespace {

// B = 3x3 block centred at (1,0) minus its centre, reached by time 10; all
// other edges cost 100.
WeightTable ring_fixture() {
  LatticeBox box(2, 6);
  WeightTable table(box, 100.0);
  Vertex centre{1, 0};
  std::vector<Vertex> block;
  for (int x = 0; x <= 2; ++x)
    for (int y = -1; y <= 1; ++y)
      if (Vertex{x, y} != centre) block.push_back(Vertex{x, y});
  for (const Vertex& v : block)
    for (const Vertex& w : block) {
      long dist = std::abs(v[0] - w[0]) + std::abs(v[1] - w[1]);
      if (dist == 1 && v < w) table.set(canonical_edge(v, w), 1.0);
    }
  return table;
}

std::vector<double> times_of(const PassageField& pf) { return {pf.times().begin(), pf.times().end()}; }

}  // namespace

TEST_CASE("edge boundary intervals") {
  LatticeBox box(2, 3);
  WeightTable table(box, 2.0);
  table.set(Edge{Vertex{1, 0}, 0}, 3.0);
  PassageField pf = compute_passage(table, 5.0);
  auto iv = edge_boundary_interval(Edge{Vertex{0, 0}, 0}, pf);
  REQUIRE(iv);
  CHECK(iv->lo == 0.0);
  CHECK(iv->hi == 2.0);
  CHECK(iv->length() == 2.0);
  CHECK_FALSE(iv->open_ended);
  auto up = edge_boundary_interval(Edge{Vertex{1, 0}, 1}, pf);  // T(1,0) = 2, T(1,1) = 4
  REQUIRE(up);
  CHECK(up->lo == 2.0);
  CHECK(up->hi == 4.0);
  CHECK_THROWS(edge_boundary_interval(Edge{Vertex{3, 0}, 0}, pf));

  EdgeWeightField dirac(WeightModel::dirac(1.0), 1);
  PassageField pd = compute_passage(dirac, LatticeBox(2, 5), 3.0);
  auto d2 = edge_boundary_interval(Edge{Vertex{1, 1}, 1}, pd);  // T = 2, 3
  REQUIRE(d2);
  CHECK(d2->length() == 1.0);
  // (1,2) has T = 3, (2,2) is beyond the horizon
  auto open = edge_boundary_interval(Edge{Vertex{1, 2}, 0}, pd);
  REQUIRE(open);
  CHECK(open->open_ended);
  CHECK(open->lo == 3.0);
  CHECK(open->hi == 3.0);
  CHECK_FALSE(edge_boundary_interval(Edge{Vertex{3, 3}, 0}, pd).has_value());
}

TEST_CASE("equal endpoint times give no interval") {
  LatticeBox box(2, 2);
  WeightTable table(box, 1.0);
  table.set(Edge{Vertex{1, 0}, 1}, 5.0);
  // T(1,0) = 1, T(0,1) = 1; the edge (1,1)-(0,1)... use a zero edge instead
  table.set(Edge{Vertex{0, 0}, 0}, 0.0);
  PassageField pf = compute_passage(table, 3.0);
  CHECK_FALSE(edge_boundary_interval(Edge{Vertex{0, 0}, 0}, pf).has_value());
}

TEST_CASE("diamond timeline matches the closed form") {
  EdgeWeightField dirac(WeightModel::dirac(1.0), 1);
  PassageField pf = compute_passage(dirac, LatticeBox(2, 24), 20.0);
  BoundaryTimeline tl = boundary_timeline(pf);
  CHECK(tl.count_at(-0.5) == 0);
  CHECK(tl.count_at(0.0) == 4);
  CHECK(tl.count_at(0.99) == 4);
  CHECK(tl.count_at(1.0) == 12);
  CHECK(tl.count_at(1.5) == 12);
  for (int n = 0; n <= 20; ++n) CHECK(tl.count_at(n) == 8 * n + 4);
  CHECK(hole_census_at(pf, 13.0).components.empty());
}

TEST_CASE("timeline equals a brute-force recount") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EdgeWeightField f(WeightModel::exponential(1.0), seed);
    PassageField pf = compute_passage(f, LatticeBox(2, 40), 8.0);
    BoundaryTimeline tl = boundary_timeline(pf);
    auto times = times_of(pf);
    for (int k = 0; k < 20; ++k) {
      double s = 8.0 * (k + 0.37) / 20.0;
      CHECK(tl.count_at(s) == oracle::boundary_count(pf.box(), times, s));
      CHECK(tl.count_at(s) == count_edge_boundary(pf, s));
    }
    // at most 2d change per adoption
    for (std::size_t i = 1; i < tl.counts.size(); ++i) {
      // several vertices can share a breakpoint only on ties; continuous model here
      CHECK(std::abs(tl.counts[i] - tl.counts[i - 1]) <= 4);
    }
  }
}

TEST_CASE("timeline rejects a ball on the box face") {
  EdgeWeightField dirac(WeightModel::dirac(1.0), 1);
  CHECK_THROWS(boundary_timeline(compute_passage(dirac, LatticeBox(2, 3), 5.0)));
}

TEST_CASE("exterior boundary of a single vertex") {
  LatticeBox box(2, 3);
  WeightTable table(box, 5.0);
  PassageField pf = compute_passage(table, 1.0);
  auto ext = exterior_boundary_at(pf, 1.0);
  CHECK(ext.vertex_part.size() == 4);
  CHECK(ext.edge_part.size() == 4);
}

TEST_CASE("size-one hole fixture") {
  WeightTable table = ring_fixture();
  PassageField pf = compute_passage(table, 10.0);
  BallTopology top = ball_topology(pf, 10.0);
  CHECK(top.ball_size == 8);
  CHECK(top.edge_boundary == 16);
  CHECK(top.exterior.edge_part.size() == 12);
  CHECK(count_edge_boundary(pf, 10.0) == 16);
  REQUIRE(top.holes.components.size() == 1);
  CHECK(top.holes.components[0].size == 1);
  CHECK(top.holes.components[0].representative == Vertex{1, 0});
  CHECK(top.holes.size_one_count() == 1);
  CHECK(top.hole_edge_boundary == 4);
  CHECK(top.size_one_hole_edges == 4);
}

TEST_CASE("boundary splits into exterior and hole parts") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    WeightModel m = seed % 2 ? WeightModel::pareto(0.125) : WeightModel::exponential(1.0);
    EdgeWeightField f(m, seed_stream(3, seed));
    PassageField pf = compute_passage(f, LatticeBox(2, 40), seed % 2 ? 60.0 : 8.0);
    double s = pf.horizon() * 0.8;
    BallTopology top = ball_topology(pf, s);
    long full = count_edge_boundary(pf, s);
    CHECK(top.edge_boundary == full);
    CHECK(static_cast<long>(top.exterior.edge_part.size()) + top.hole_edge_boundary == full);
    // every exterior edge is a boundary edge with exactly one endpoint in the ball
    for (const Edge& e : top.exterior.edge_part) {
      bool x = pf.in_ball(pf.box().index(e.base), s), y = pf.in_ball(pf.box().index(e.tip()), s);
      CHECK(x != y);
    }
    CHECK((top.holes.components.empty() == (full == static_cast<long>(top.exterior.edge_part.size()))));
  }
}

TEST_CASE("rough time density") {
  BoundaryTimeline zero;
  zero.horizon = 10.0;
  zero.breakpoints = {0.0};
  zero.counts = {0};
  auto one = [](double) { return 1.0; };
  CHECK(rough_time_density(zero, 1.0, one, 2) == 0.0);

  // count(s) = s sampled at left endpoints of 1000 cells: above a s for a < 1
  // except on the first cell, a null set for a >= 1
  StepFunction lin = StepFunction::sample([](double s) { return s; }, 10.0, 1000);
  CHECK(threshold_measure(lin, 0.5, one, 2) == doctest::Approx(9.99));
  CHECK(threshold_measure(lin, 1.0, one, 2) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(threshold_measure(lin, 2.0, one, 2) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("rough time density decreases in a on a real run") {
  EdgeWeightField f(WeightModel::exponential(1.0), 12);
  PassageField pf = compute_passage(f, LatticeBox(2, 160), 48.0);
  BoundaryTimeline tl = boundary_timeline(pf);
  YStatistic ys(f.model(), 2);
  auto psi = [&](double s) { return ys.expected_truncated(s); };
  double prev = 1.0;
  for (double a : {2.0, 5.0, 10.0, 20.0}) {
    double dens = rough_time_density(tl, a, psi, 2);
    CHECK(dens <= prev);
    prev = dens;
  }
}

TEST_CASE("array method identity") {
  EdgeWeightField dirac(WeightModel::dirac(1.0), 1);
  PassageField pd = compute_passage(dirac, LatticeBox(2, 3), 2.0);
  auto rd = array_method_identity_check(pd, [&](const Edge& e) { return dirac.weight(e); });
  CHECK(rd.timeline_integral == rd.interval_sum);
  CHECK(rd.cap_violations == 0);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EdgeWeightField f(WeightModel::exponential(1.0), seed_stream(9, seed));
    PassageField pf = compute_passage(f, LatticeBox(2, 30), 6.0);
    auto rep = array_method_identity_check(pf, [&](const Edge& e) { return f.weight(e); });
    CHECK(rep.relative_error <= 1e-9);
    CHECK(rep.cap_violations == 0);
    CHECK(rep.ok(1e-9));
  }
}

TEST_CASE("isoperimetric sanity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EdgeWeightField f(WeightModel::exponential(1.0), seed);
    PassageField pf = compute_passage(f, LatticeBox(2, 60), 16.0);
    auto tl = boundary_timeline(pf);
    double n = static_cast<double>(pf.ball_size(16.0));
    long c = tl.count_at(16.0);
    // a set of n vertices in Z^2 has at least 4 sqrt(n) boundary edges
    CHECK(c >= 4.0 * std::sqrt(n) - 1e-9);
    CHECK(c <= 4.0 * n);
  }
}
