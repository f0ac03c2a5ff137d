#include <cmath>

#include "doctest.h"
#include "fpplab/contours.hpp"
#include "fpplab/seeds.hpp"
#include "oracles.hpp"

using namespace fpplab;

namespace {

// An enclosing *-connected set must meet both half-axes, so with n cells
// every coordinate has |c| <= n - 2.
long brute_force_enclosing(int n) {
  const int r = n - 2;
  std::vector<Vertex> cells;
  for (int x = -r; x <= r; ++x)
    for (int y = -r; y <= r; ++y)
      if (x != 0 || y != 0) cells.push_back(Vertex{x, y});
  LatticeBox guard(2, n);
  long count = 0;
  std::vector<Vertex> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(pick.size()) == n) {
      count += is_star_connected(pick) && encloses_origin(pick, guard);
      return;
    }
    for (std::size_t k = start; k < cells.size(); ++k) {
      pick.push_back(cells[k]);
      rec(k + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return count;
}

}  // namespace

TEST_CASE("fixed *-animal counts") {
  const std::uint64_t known[] = {1, 4, 20, 110, 638, 3832, 23592, 147941};
  for (int n = 1; n <= 8; ++n) CHECK(count_fixed_star_animals(n, 2) == known[n - 1]);
  CHECK(enumerate_star_animals(1, 2) == 1);
  CHECK(enumerate_star_animals(2, 2) == 8);
  CHECK(count_fixed_star_animals(2, 3) == 13);
  CHECK(enumerate_star_animals(2, 3) == 26);
  CHECK_THROWS(count_fixed_star_animals(9, 2));
  CHECK_THROWS(count_fixed_star_animals(6, 3));
  CHECK_THROWS(count_fixed_star_animals(2, 4));
  CHECK_THROWS(count_fixed_star_animals(0, 2));
}

TEST_CASE("animal enumeration agrees with subset search") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    CHECK(enumerate_star_animals(n, 2) == static_cast<std::uint64_t>(oracle::brute_force_animals_2d(n)));
  }
}

TEST_CASE("counts do not depend on the generator symmetry") {
  CHECK(symmetry_count(2) == 8);
  CHECK(symmetry_count(3) == 48);
  for (int sym = 0; sym < 8; ++sym)
    for (int n = 1; n <= 6; ++n) CHECK(count_fixed_star_animals(n, 2, sym) == count_fixed_star_animals(n, 2));
  for (int sym = 0; sym < 48; ++sym) CHECK(count_fixed_star_animals(3, 3, sym) == count_fixed_star_animals(3, 3));
  // each symmetry is a bijection of the star neighbourhood
  for (int sym = 0; sym < 48; ++sym) {
    auto nb = star_neighbors(Vertex::origin(3));
    std::vector<Vertex> img;
    for (const Vertex& v : nb) img.push_back(apply_symmetry(sym, v));
    std::sort(nb.begin(), nb.end());
    std::sort(img.begin(), img.end());
    CHECK(img == nb);
  }
  CHECK(apply_symmetry(0, Vertex{2, -5}) == Vertex{2, -5});
  CHECK_THROWS(apply_symmetry(8, Vertex{1, 1}));
}

TEST_CASE("count bound") {
  CHECK(contour_growth_base(2) == doctest::Approx(std::pow(9.0, 9) / std::pow(8.0, 8)).epsilon(1e-12));
  CHECK(contour_growth_base(2) == doctest::Approx(23.0921).epsilon(1e-5));
  for (int n = 1; n <= 6; ++n) {
    CHECK(static_cast<double>(enumerate_star_animals(n, 2)) <= contour_count_bound(n, 2));
    CHECK(static_cast<double>(count_enclosing_contours(n)) <= contour_count_bound(n, 2));
  }
  for (int n = 1; n <= 4; ++n) CHECK(static_cast<double>(enumerate_star_animals(n, 3)) <= contour_count_bound(n, 3));
}

TEST_CASE("enclosing contours") {
  CHECK(count_enclosing_contours(3) == 0);
  CHECK(count_enclosing_contours(4) == 1);
  for (int n = 4; n <= 5; ++n) {
    CAPTURE(n);
    CHECK(count_enclosing_contours(n) == static_cast<std::uint64_t>(brute_force_enclosing(n)));
  }
  for (int n = 4; n <= 7; ++n)
    CHECK(count_enclosing_contours(n) <= static_cast<std::uint64_t>(n) * enumerate_star_animals(n, 2));
}

TEST_CASE("alpha-bad contours") {
  LatticeBox box(2, 5);
  WeightTable table(box, 1.0);
  EdgeWeightFn w = [&](const Edge& e) { return table.weight(e); };
  Contour diamond({Vertex{1, 0}, Vertex{0, 1}, Vertex{-1, 0}, Vertex{0, -1}});
  CHECK(diamond.size() == 4);
  CHECK_FALSE(is_alpha_bad(diamond, w, 2.0));
  // a heavy edge between (1,0) and (2,0) flags one vertex
  table.set(Edge{Vertex{1, 0}, 0}, 5.0);
  CHECK(alpha_flagged(diamond, w, 2.0) == std::vector<Vertex>{Vertex{1, 0}});
  CHECK_FALSE(is_alpha_bad(diamond, w, 2.0));
  // exactly half flagged is bad
  table.set(Edge{Vertex{-1, 0}, 1}, 5.0);
  CHECK(alpha_flagged(diamond, w, 2.0).size() == 2);
  CHECK(is_alpha_bad(diamond, w, 2.0));
  CHECK_FALSE(is_alpha_bad(diamond, w, 5.0));

  // #W = 5 needs three flagged vertices
  Contour five({Vertex{1, 0}, Vertex{0, 1}, Vertex{-1, 0}, Vertex{0, -1}, Vertex{1, 1}});
  CHECK_FALSE(is_alpha_bad(five, w, 2.0));
  table.set(Edge{Vertex{1, 1}, 1}, 5.0);
  CHECK(is_alpha_bad(five, w, 2.0));

  // edges away from W do not matter
  table.set(Edge{Vertex{3, 3}, 0}, 100.0);
  table.set(Edge{Vertex{-4, 2}, 1}, 100.0);
  CHECK(alpha_flagged(five, w, 2.0).size() == 3);

  CHECK_THROWS(is_alpha_bad(Contour({}), w, 1.0));
}

TEST_CASE("exterior boundary is *-connected") {
  LatticeBox box(2, 4);
  WeightTable table(box, 10.0);
  CHECK(verify_timar(compute_passage(table, 1.0), 1.0));

  EdgeWeightField dirac(WeightModel::dirac(1.0), 1);
  PassageField diamond = compute_passage(dirac, LatticeBox(2, 8), 3.0);
  CHECK(verify_timar(diamond, 3.0));
  CHECK(exterior_boundary_at(diamond, 3.0).vertex_part.size() == 16);

  int ok = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    WeightModel m = seed % 2 ? WeightModel::pareto(0.125) : WeightModel::exponential(1.0);
    EdgeWeightField f(m, seed_stream(41, seed));
    double horizon = seed % 2 ? 40.0 : 10.0;
    PassageField pf = compute_passage(f, LatticeBox(2, 60), horizon);
    for (int k = 1; k <= 4; ++k) {
      ++total;
      ok += verify_timar(pf, horizon * k / 4);
    }
  }
  CHECK(total == 200);
  CHECK(ok == total);
}

TEST_CASE("bad contour rate") {
  BadContourParams p;
  p.model = WeightModel::uniform(0.0, 1.0);
  p.horizon = 6.0;
  p.box_radius = 60;
  p.probes_per_run = 4;
  p.replications = 6;
  p.bin_edges = {4, 16, 64, 256, 1024};
  p.alpha = 1.5;  // above the essential supremum: nothing is bad
  BadContourTable none = bad_contour_rate(p);
  CHECK(none.probes == 24);
  CHECK(none.non_enclosing == 0);
  CHECK(none.fitted_bins == 0);
  std::size_t seen = 0;
  for (const auto& b : none.bins) {
    CHECK(b.bad == 0);
    seen += b.probes;
  }
  CHECK(seen > 0);

  p.alpha = 0.0;  // every vertex flagged
  BadContourTable all = bad_contour_rate(p);
  for (const auto& b : all.bins) CHECK(b.bad == b.probes);

  p.bin_edges = {4};
  CHECK_THROWS(bad_contour_rate(p));
}
