#include <cmath>

#include "doctest.h"
#include "fpplab/percolation.hpp"
#include "fpplab/seeds.hpp"

using namespace fpplab;

TEST_CASE("all open and all closed") {
  EdgeWeightField dirac(WeightModel::dirac(1.0), 1);
  LatticeBox box(2, 6);
  PercolationView all = label_clusters(dirac, 2.0, box);
  CHECK(all.cluster_count() == 1);
  CHECK(all.cluster_size(0) == box.vertex_count());
  CHECK(all.spans());
  CHECK(all.open_fraction() == 1.0);
  CHECK(all.in_largest(Vertex{6, -6}));

  PercolationView none = label_clusters(dirac, 0.5, box);
  CHECK(none.cluster_count() == box.vertex_count());
  CHECK(none.open_fraction() == 0.0);
  CHECK_FALSE(none.spans());
  // singletons: the largest is the one with the smallest index
  CHECK(none.label(std::size_t{0}) == 0);
  for (std::size_t i = 0; i < box.vertex_count(); ++i) CHECK(none.label(i) == static_cast<int>(i));
  CHECK_THROWS(label_clusters(dirac, 0.0, box));
}

TEST_CASE("supercritical boxes span") {
  LatticeBox box(2, 32);
  int spans = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    EdgeWeightField f(WeightModel::uniform(0.0, 1.0), seed_stream(5, seed));
    spans += label_clusters(f, 0.7, box).spans();
  }
  CHECK(spans >= 190);
}

TEST_CASE("open density") {
  EdgeWeightField f(WeightModel::exponential(1.0), 3);
  LatticeBox box(2, 50);
  PercolationView v = label_clusters(f, 1.0, box);
  double p = 1.0 - std::exp(-1.0);
  double n = static_cast<double>(box.edges().size());
  CHECK(std::abs(v.open_fraction() - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("raising the threshold merges clusters") {
  EdgeWeightField f(WeightModel::uniform(0.0, 1.0), 17);
  LatticeBox box(2, 20);
  PercolationView lo = label_clusters(f, 0.45, box), hi = label_clusters(f, 0.55, box);
  CHECK(hi.cluster_count() <= lo.cluster_count());
  for (std::size_t i = 0; i + 1 < box.vertex_count(); ++i) {
    if (lo.label(i) == lo.label(i + 1)) CHECK(hi.label(i) == hi.label(i + 1));
    for (int a = 0; a < 2; ++a)
      if (box.coord(i, a) < box.radius() && lo.open(i, a)) CHECK(hi.open(i, a));
  }
  // labels are a partition consistent with the open edges
  for (const Edge& e : box.edges())
    if (hi.open(e)) CHECK(hi.label(e.base) == hi.label(e.tip()));
}

TEST_CASE("chemical distance") {
  LatticeBox box(2, 5);
  WeightTable table(box, 10.0);
  table.set(Edge{Vertex{0, 0}, 0}, 0.5);
  table.set(Edge{Vertex{1, 0}, 1}, 0.5);
  table.set(Edge{Vertex{1, 1}, 0}, 0.5);
  PercolationView v = label_clusters(table, 1.0);
  CHECK(chemical_distance(v, Vertex{0, 0}, Vertex{2, 1}) == 3);
  CHECK(chemical_distance(v, Vertex{2, 1}, Vertex{2, 1}) == 0);
  CHECK_FALSE(chemical_distance(v, Vertex{0, 0}, Vertex{3, 3}).has_value());
  auto d = chemical_distances_from(v, Vertex{0, 0});
  CHECK(d[box.index(Vertex{1, 1})] == 2);
  CHECK(d[box.index(Vertex{-1, 0})] == -1);
  CHECK(v.cluster_size(0) == 4);
  CHECK(v.in_largest(Vertex{1, 1}));
}

TEST_CASE("passage against sup norm") {
  EdgeWeightField dirac(WeightModel::dirac(1.0), 1);
  LinfScatter sc = passage_vs_linf(dirac, 2.0, LatticeBox(2, 20), 50.0);
  CHECK(sc.max_ratio == 2.0);
  CHECK_FALSE(sc.rows.empty());
  for (const auto& row : sc.rows) {
    CHECK(row.linf >= 8);
    CHECK(row.passage <= 2.0 * static_cast<double>(row.linf));
    CHECK(row.passage >= static_cast<double>(row.linf));
  }
  CHECK_THROWS(passage_vs_linf(dirac, 0.5, LatticeBox(2, 20), 50.0));

  CalibratedConstants c = calibrate_constants(dirac, 2.0, LatticeBox(2, 20), 50.0);
  CHECK(c.d1 == doctest::Approx(1.0));
  CHECK(c.d4 <= 2.0);
  CHECK(c.d4 >= 1.0);
  CHECK(c.passage_samples > 0);
}

TEST_CASE("hole candidate parameters") {
  HoleCandidateSpec s = HoleCandidateSpec::make(2, 1.0, 0.8, 1.0);
  CHECK(s.delta == doctest::Approx(0.05));
  CHECK(s.r == doctest::Approx(1.0 / 0.95));
  CHECK(s.t_n == doctest::Approx(4.0 * std::pow(1.0 / 0.95, 3)));
  CHECK_THROWS(HoleCandidateSpec::with_delta(2, 1.0, 1.0, 0.5));
  CHECK_THROWS(HoleCandidateSpec::with_delta(-1, 1.0, 1.0, 0.2));
  CHECK_THROWS(HoleCandidateSpec::make(2, 1.0, 0.0, 1.0));

  HoleCandidateSpec w = HoleCandidateSpec::with_delta(2, 1.0, 1.0, 0.4);
  auto sites = candidate_sites(w, 2);
  // independent enumeration: v in 3Z^2 with |v - e1|_inf in {3, 4}
  std::vector<Vertex> expect;
  for (int x = -9; x <= 9; x += 3)
    for (int y = -9; y <= 9; y += 3) {
      long linf = std::max(std::abs(x - 1), std::abs(y));
      if (linf >= 3 && linf <= 4) expect.push_back(Vertex{x, y});
    }
  std::sort(expect.begin(), expect.end());
  CHECK(sites == expect);
  CHECK(sites.size() == 7);
}

TEST_CASE("hole candidate count") {
  HoleCandidateSpec spec = HoleCandidateSpec::with_delta(2, 1.0, 1.0, 0.4);
  LatticeBox box(2, 8);
  WeightTable table(box, 0.5);
  EdgeWeightFn w = [&](const Edge& e) { return table.weight(e); };
  CHECK(count_hole_candidates(label_clusters(table, 1.0), w, spec) == 0);

  auto sites = candidate_sites(spec, 2);
  table.set_incident(sites[3], spec.t_n + 1.0);
  CHECK(count_hole_candidates(label_clusters(table, 1.0), w, spec) == 1);
  // a heavy edge at exactly t_n does not count
  table.set_incident(sites[5], spec.t_n);
  CHECK(count_hole_candidates(label_clusters(table, 1.0), w, spec) == 1);
  // cut v - e1 off the largest cluster
  table.set_incident(sites[3].shifted(0, -1), 5.0);
  CHECK(count_hole_candidates(label_clusters(table, 1.0), w, spec) == 0);

  WeightTable tiny(LatticeBox(2, 4), 0.5);
  EdgeWeightFn wt = [&](const Edge& e) { return tiny.weight(e); };
  CHECK_THROWS(count_hole_candidates(label_clusters(tiny, 1.0), wt, spec));
}

TEST_CASE("chi-square independence") {
  auto r = chi_square_independence({{10, 20}, {30, 40}});
  CHECK(r.statistic == doctest::Approx(0.7936507936507936).epsilon(1e-12));
  CHECK(r.dof == 1);
  CHECK(r.p_value == doctest::Approx(0.37299848361348714).epsilon(1e-9));

  auto exact = chi_square_independence({{10, 20}, {20, 40}, {30, 60}});
  CHECK(exact.statistic == doctest::Approx(0.0));
  CHECK(exact.dof == 2);
  CHECK(exact.p_value == doctest::Approx(1.0));

  // a thin first row is pooled into the next
  auto pooled = chi_square_independence({{1, 1}, {30, 40}, {10, 20}});
  CHECK(pooled.dof == 1);
  CHECK(chi_square_independence({{5, 0}, {7, 0}}).dof == 0);
}

TEST_CASE("shielded independence") {
  ShieldingParams p;
  p.replications = 3000;
  ShieldingReport rep = shielded_independence_check(p);
  CHECK(rep.sites.size() == 7);
  CHECK(rep.subset.size() == 3);
  std::size_t total = 0, hits = 0;
  for (const auto& row : rep.counts) {
    total += row[0] + row[1];
    hits += row[1];
  }
  CHECK(total == 3000);
  CHECK(hits == rep.event_hits);
  CHECK(rep.event_hits > 0);
  CHECK(rep.access_overlaps == 0);
  CHECK(rep.shield_mismatches == 0);
  CHECK(rep.p_value > 1e-3);

  ShieldingParams bad = p;
  bad.subset = {40};
  CHECK_THROWS(shielded_independence_check(bad));
  bad = p;
  bad.box_radius = 4;
  CHECK_THROWS(shielded_independence_check(bad));
}
