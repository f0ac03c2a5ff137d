#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fpplab/seeds.hpp"
#include "fpplab/weights.hpp"
#include "oracles.hpp"

using namespace fpplab;

namespace {

std::vector<WeightModel> all_models() {
  return {WeightModel::exponential(1.0),    WeightModel::exponential(2.5),   WeightModel::uniform(0.5, 2.0),
          WeightModel::dirac(1.0),          WeightModel::bernoulli_zero(0.3, 2.0), WeightModel::pareto(0.125),
          WeightModel::pareto(0.75),        WeightModel::tower(3, 2),        WeightModel::tower(2, 3)};
}

}  // namespace

TEST_CASE("field samples are deterministic quantiles") {
  EdgeWeightField dirac(WeightModel::dirac(1.0), 3);
  CHECK(dirac.weight(Edge{Vertex{4, -2}, 1}) == 1.0);

  EdgeWeightField ex(WeightModel::exponential(1.0), 7);
  Edge e{Vertex{0, 0}, 0};
  CHECK(ex.weight(e) == ex.weight(e));
  CHECK(ex.weight(e) == ex.model().quantile(ex.uniform(e)));
  CHECK(ex.weight(e) != EdgeWeightField(WeightModel::exponential(1.0), 8).weight(e));
  CHECK(ex.weight(e) != ex.weight(Edge{Vertex{0, 0}, 1}));
}

TEST_CASE("field is independent of query order") {
  EdgeWeightField f(WeightModel::exponential(1.0), 11);
  LatticeBox box(2, 120);
  auto edges = box.edges();
  edges.resize(100000);
  std::vector<double> first;
  for (const Edge& e : edges) first.push_back(f.weight(e));
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), std::mt19937_64(5));
  for (std::size_t i : order) REQUIRE(f.weight(edges[i]) == first[i]);
}

TEST_CASE("pareto tail matches by Monte Carlo") {
  EdgeWeightField f(WeightModel::pareto(0.125), 1);
  const int n = 1000000;
  int over = 0;
  for (int i = 0; i < n; ++i) over += f.weight(Edge{Vertex{i, 0}, 0}) > 10.0;
  double p = std::pow(10.0, -0.125);
  double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(static_cast<double>(over) / n - p) < 3 * se);
}

TEST_CASE("tail of Y") {
  CHECK(YStatistic(WeightModel::exponential(1.0), 2).tail(1.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
  CHECK(std::exp(-4.0) == doctest::Approx(0.018316).epsilon(1e-5));
  YStatistic dirac(WeightModel::dirac(1.0), 2);
  CHECK(dirac.tail(0.5) == 1.0);
  CHECK(dirac.tail(1.5) == 0.0);
  const double alpha = 0.5, d = 2;
  YStatistic par(WeightModel::pareto((1 - alpha) / (2 * d)), 2);
  CHECK(par.tail(16.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("E[Y ^ t] closed forms") {
  YStatistic ex(WeightModel::exponential(1.0), 2);
  CHECK(ex.expected_truncated(INFINITY) == 0.25);
  CHECK(ex.expected_truncated(1e6) == doctest::Approx(0.25));
  YStatistic dirac(WeightModel::dirac(1.0), 2);
  CHECK(dirac.expected_truncated(0.5) == 0.5);
  CHECK(dirac.expected_truncated(3.0) == 1.0);
  YStatistic tower(WeightModel::tower(3, 2), 2);
  CHECK(tower.expected_truncated(27.0) >= (27.0 - 3.0) / std::log(27.0));
  CHECK(tower.expected_truncated(3.0) == 3.0);
}

TEST_CASE("E[Y ^ t] agrees with adaptive quadrature of the tail") {
  for (const WeightModel& m : all_models()) {
    for (int d = 2; d <= 3; ++d) {
      YStatistic ys(m, d);
      std::vector<double> cuts = {0.5, 1.0, 2.0, 3.0, 27.0};
      for (double t : {0.3, 1.0, 2.5, 10.0, 26.5, 27.0, 100.0}) {
        double quad = oracle::integrate([&](double y) { return ys.tail(y); }, 0.0, t, cuts);
        CAPTURE(m.descriptor());
        CAPTURE(t);
        CHECK(ys.expected_truncated(t) == doctest::Approx(quad).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("E[Y ^ t] is monotone with the doubling property") {
  for (const WeightModel& m : all_models()) {
    YStatistic ys(m, 2);
    double prev = 0.0;
    for (double t = 0.25; t < 2000; t *= 1.37) {
      double v = ys.expected_truncated(t);
      CHECK(v >= prev);
      CHECK(ys.expected_truncated(2 * t) <= 2 * v * (1 + 1e-14));
      prev = v;
    }
  }
}

TEST_CASE("quantile is the generalized inverse") {
  for (const WeightModel& m : all_models()) {
    for (int k = 1; k < 1000; ++k) {
      double u = k / 1000.0;
      double q = m.quantile(u);
      CAPTURE(m.descriptor());
      CAPTURE(u);
      CHECK(m.cdf(q) >= u - 1e-15);
      double below = q - 1e-9 * std::max(1.0, q);
      CHECK(m.cdf(below) < u);
    }
    CHECK_THROWS(m.quantile(0.0));
    CHECK_THROWS(m.quantile(1.0));
  }
}

TEST_CASE("min of 2d sampled weights follows tail_Y") {
  for (const WeightModel& m : all_models()) {
    YStatistic ys(m, 2);
    EdgeWeightField f(m, 99);
    const int n = 100000;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      double mn = INFINITY;
      for (const Vertex& nb : neighbors(Vertex{i, 7})) mn = std::min(mn, f.weight(canonical_edge(Vertex{i, 7}, nb)));
      y[static_cast<std::size_t>(i)] = mn;
    }
    // the four edges at (i, 7) are distinct from those at (j, 7) except the
    // shared horizontal edge between consecutive i; use every other vertex
    std::vector<double> sample;
    for (int i = 0; i < n; i += 2) sample.push_back(y[static_cast<std::size_t>(i)]);
    std::sort(sample.begin(), sample.end());
    // sup |ECDF - F| is attained at sample values or just below them
    double ks = 0.0;
    const double ns = static_cast<double>(sample.size());
    for (std::size_t i = 0; i < sample.size();) {
      std::size_t j = i;
      while (j < sample.size() && sample[j] == sample[i]) ++j;
      double v = sample[i];
      double f_at = ys.cdf(v);
      double f_below = 1.0 - std::pow(m.survival(std::nextafter(v, -INFINITY)), 4);
      ks = std::max({ks, std::abs(static_cast<double>(j) / ns - f_at), std::abs(static_cast<double>(i) / ns - f_below)});
      i = j;
    }
    CAPTURE(m.descriptor());
    CHECK(ks < 0.01);
  }
}

TEST_CASE("tower survival") {
  CHECK(tower_survival(3, 2, 2.0) == 1.0);
  CHECK(tower_survival(3, 2, 5.0) == doctest::Approx(std::pow(std::log(27.0), -0.25)).epsilon(1e-15));
  CHECK(tower_survival(3, 2, 5.0) == doctest::Approx(0.7421).epsilon(1e-4));
  CHECK(tower_survival(3, 2, 27.0) == doctest::Approx(1.0 / std::sqrt(std::sqrt(27.0 * std::log(27.0)))));
  auto tl = tower_levels(3);
  CHECK(tl.points[1] == 27.0);
  CHECK(tower_survival(3, 2, tl.points[2]) == 0.0);
  CHECK(tower_survival(3, 2, 1e300) == 0.0);
  CHECK_THROWS(tower_survival(1, 2, 5.0));
  CHECK_THROWS(WeightModel::tower(4, 2));
}

TEST_CASE("bound ratio") {
  auto ex = bound_ratio(YStatistic(WeightModel::exponential(1.0), 2), 10.0);
  CHECK(ex.lower == 1.0);
  CHECK(ex.upper == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ex.ratio == doctest::Approx(0.25).epsilon(1e-12));
  auto di = bound_ratio(YStatistic(WeightModel::dirac(1.0), 2), 2.0);
  CHECK(di.lower == 1.0);
  CHECK(di.upper == 1.0);
  CHECK(di.ratio == 1.0);
  // tower at t = x_2: t P(Y > t) = 1 / log x_2 <= 1
  auto tw = bound_ratio(YStatistic(WeightModel::tower(3, 2), 2), 27.0);
  CHECK(tw.lower == 1.0);
  CHECK(tw.ratio >= 27.0 / (2 * std::log(27.0)));
}

TEST_CASE("descriptors round-trip") {
  for (const WeightModel& m : all_models()) {
    WeightModel back = WeightModel::parse(m.descriptor());
    CHECK(back == m);
    CHECK(back.hash() == m.hash());
  }
  CHECK_THROWS(WeightModel::parse("gamma shape=2"));
  CHECK_THROWS(WeightModel::parse("exponential"));
  CHECK_THROWS(WeightModel::parse("exponential rate=1 extra=2"));
}

TEST_CASE("subcriticality of zero mass") {
  CHECK(WeightModel::bernoulli_zero(0.4, 1.0).is_subcritical(2));
  CHECK_FALSE(WeightModel::bernoulli_zero(0.5, 1.0).is_subcritical(2));
  CHECK_FALSE(WeightModel::bernoulli_zero(0.3, 1.0).is_subcritical(3));
}

TEST_CASE("seed stream") {
  CHECK(seed_stream(7, 0) != seed_stream(7, 1));
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 0; i < 10000; ++i) s.push_back(seed_stream(7, i));
  std::sort(s.begin(), s.end());
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  // frozen value; changing the mixing breaks every recorded run
  CHECK(seed_stream(7, 3) == 0xd795c8f26f6a33a1ULL);
}
