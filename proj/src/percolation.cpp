#include "fpplab/percolation.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/pending/disjoint_sets.hpp>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fpplab/seeds.hpp"

namespace fpplab {

namespace {

double quantile_of(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(xs.begin(), xs.end());
  // type-7 linear interpolation
  double h = q * static_cast<double>(xs.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(h));
  auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace

PercolationView::PercolationView(const EdgeWeightFn& weight, double threshold, LatticeBox box)
    : box_(std::move(box)), threshold_(threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("label_clusters: threshold must be positive");
  const std::size_t n = box_.vertex_count();
  const int d = box_.dim();
  open_.assign(n * static_cast<std::size_t>(d), 0);

  boost::disjoint_sets_with_storage<> sets(n);
  box_.for_each_edge([&](std::size_t i, int a) {
    if (weight(Edge{box_.vertex_at(i), a}) <= threshold_) {
      open_[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] = 1;
      sets.union_set(i, i + box_.stride(a));
    }
  });

  // root -> (size, smallest member); members are visited in index order
  std::vector<std::size_t> root(n), size(n, 0), first(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    root[i] = sets.find_set(i);
    if (size[root[i]]++ == 0) first[root[i]] = i;
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i)
    if (root[i] == i) roots.push_back(i);
  std::sort(roots.begin(), roots.end(), [&](std::size_t x, std::size_t y) { return first[x] < first[y]; });
  auto largest = std::max_element(roots.begin(), roots.end(),
                                   [&](std::size_t x, std::size_t y) { return size[x] < size[y]; });
  std::rotate(roots.begin(), largest, largest + 1);

  std::vector<int> id(n, -1);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    id[roots[k]] = static_cast<int>(k);
    sizes_.push_back(size[roots[k]]);
  }
  labels_.resize(n);
  for (std::size_t i = 0; i < n; ++i) labels_[i] = id[root[i]];

  std::vector<std::uint8_t> touched(static_cast<std::size_t>(2 * d), 0);
  const int r = box_.radius();
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i] != 0) continue;
    for (int a = 0; a < d; ++a) {
      int c = box_.coord(i, a);
      if (c == r) touched[static_cast<std::size_t>(2 * a)] = 1;
      if (c == -r) touched[static_cast<std::size_t>(2 * a + 1)] = 1;
    }
  }
  spans_ = std::all_of(touched.begin(), touched.end(), [](std::uint8_t t) { return t != 0; });
}

double PercolationView::open_fraction() const {
  std::size_t edges = box_.edge_count();
  if (edges == 0) return 0.0;
  std::size_t n_open = static_cast<std::size_t>(std::count(open_.begin(), open_.end(), std::uint8_t{1}));
  return static_cast<double>(n_open) / static_cast<double>(edges);
}

PercolationView label_clusters(const EdgeWeightField& field, double threshold, const LatticeBox& box) {
  return PercolationView([&field](const Edge& e) { return field.weight(e); }, threshold, box);
}

PercolationView label_clusters(const WeightTable& table, double threshold) {
  return PercolationView([&table](const Edge& e) { return table.weight(e); }, threshold, table.box());
}

std::vector<long> chemical_distances_from(const PercolationView& view, const Vertex& source) {
  const LatticeBox& box = view.box();
  std::vector<long> dist(box.vertex_count(), -1);
  std::size_t s = box.index(source);
  dist[s] = 0;
  std::deque<std::size_t> queue{s};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (int a = 0; a < box.dim(); ++a) {
      int c = box.coord(i, a);
      if (c < box.radius() && view.open(i, a)) {
        std::size_t j = i + box.stride(a);
        if (dist[j] < 0) {
          dist[j] = dist[i] + 1;
          queue.push_back(j);
        }
      }
      if (c > -box.radius() && view.open(i - box.stride(a), a)) {
        std::size_t j = i - box.stride(a);
        if (dist[j] < 0) {
          dist[j] = dist[i] + 1;
          queue.push_back(j);
        }
      }
    }
  }
  return dist;
}

std::optional<long> chemical_distance(const PercolationView& view, const Vertex& x, const Vertex& y) {
  if (view.label(x) != view.label(y)) return std::nullopt;
  long d = chemical_distances_from(view, x)[view.box().index(y)];
  if (d < 0) return std::nullopt;
  return d;
}

LinfScatter passage_vs_linf(const EdgeWeightField& field, double threshold, const LatticeBox& box, double horizon,
                            long min_linf) {
  PercolationView view = label_clusters(field, threshold, box);
  if (!view.in_largest(box.origin_index()))
    throw std::runtime_error("passage_vs_linf: origin is not in the largest cluster");
  PassageField pf = compute_passage(field, box, horizon);
  LinfScatter out;
  out.min_linf = min_linf;
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (!view.in_largest(i) || !pf.reached(i)) continue;
    long linf = box.vertex_at(i).linf_norm();
    if (linf < min_linf) continue;
    out.rows.push_back({linf, pf.time_at(i)});
    out.max_ratio = std::max(out.max_ratio, pf.time_at(i) / static_cast<double>(linf));
  }
  return out;
}

CalibratedConstants calibrate_constants(const EdgeWeightField& field, double threshold, const LatticeBox& box,
                                        double horizon, long min_linf) {
  PassageField pf = compute_passage(field, box, horizon);
  std::vector<double> kesten, chem;
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (!pf.reached(i)) continue;
    Vertex z = box.vertex_at(i);
    if (z.linf_norm() < min_linf) continue;
    kesten.push_back(pf.time_at(i) / static_cast<double>(z.l1_norm()));
  }
  PercolationView view = label_clusters(field, threshold, box);
  if (!view.in_largest(box.origin_index()))
    throw std::runtime_error("calibrate_constants: origin is not in the largest cluster");
  auto dist = chemical_distances_from(view, Vertex::origin(box.dim()));
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (dist[i] < 0) continue;
    long linf = box.vertex_at(i).linf_norm();
    if (linf < min_linf) continue;
    chem.push_back(static_cast<double>(dist[i]) / static_cast<double>(linf));
  }
  return {quantile_of(kesten, 0.001), quantile_of(chem, 0.999), kesten.size(), chem.size()};
}

HoleCandidateSpec HoleCandidateSpec::make(int n, double m, double d1, double d4) {
  if (!(m > 0.0) || !(d1 > 0.0) || !(d4 > 0.0))
    throw std::invalid_argument("HoleCandidateSpec: M, D1, D4 must be positive");
  HoleCandidateSpec s = with_delta(n, m, d4, d1 / (16.0 * d4 * m));
  s.d1 = d1;
  return s;
}

HoleCandidateSpec HoleCandidateSpec::with_delta(int n, double m, double d4, double delta) {
  if (n < 0) throw std::invalid_argument("HoleCandidateSpec: n must be >= 0");
  if (!(delta > 0.0) || !(delta < 0.5)) throw std::invalid_argument("HoleCandidateSpec: delta must lie in (0, 1/2)");
  HoleCandidateSpec s;
  s.n = n;
  s.m = m;
  s.d4 = d4;
  s.delta = delta;
  s.d1 = 16.0 * d4 * m * delta;
  s.r = 1.0 / (1.0 - delta);
  s.t_n = 4.0 * d4 * m * std::pow(s.r, n + 1);
  return s;
}

Annulus HoleCandidateSpec::annulus() const { return Annulus(std::pow(r, n), std::pow(r, n + 1)); }

int HoleCandidateSpec::required_radius() const { return static_cast<int>(std::floor(std::pow(r, n + 1))) + 2; }

std::vector<Vertex> candidate_sites(const HoleCandidateSpec& spec, int d) {
  check_dimension(d);
  Annulus ann = spec.annulus();
  const int reach = static_cast<int>(std::floor(ann.outer)) + 1;
  const int lo = -(reach / 3) * 3;
  std::vector<Vertex> out;
  Vertex v = Vertex::origin(d);
  for (int a = 0; a < d; ++a) v[a] = lo;
  // odometer over multiples of 3 in [lo, reach], last axis fastest
  while (true) {
    Vertex u = v.shifted(0, -1);
    if (ann.contains(u)) out.push_back(v);
    int a = d - 1;
    while (a >= 0 && v[a] + 3 > reach) v[a--] = lo;
    if (a < 0) break;
    v[a] += 3;
  }
  return out;
}

std::size_t count_hole_candidates(const PercolationView& view, const EdgeWeightFn& weight,
                                  const HoleCandidateSpec& spec) {
  const LatticeBox& box = view.box();
  if (box.radius() < spec.required_radius())
    throw std::invalid_argument("count_hole_candidates: box too small for the annulus");
  std::size_t count = 0;
  for (const Vertex& v : candidate_sites(spec, box.dim())) {
    if (!view.in_largest(v.shifted(0, -1))) continue;
    bool heavy = true;
    for (const Vertex& n : neighbors(v)) {
      if (!(weight(canonical_edge(v, n)) > spec.t_n)) {
        heavy = false;
        break;
      }
    }
    count += heavy;
  }
  return count;
}

ChiSquareResult chi_square_independence(const std::vector<std::array<std::size_t, 2>>& table) {
  double col[2] = {0, 0};
  for (const auto& row : table) {
    col[0] += static_cast<double>(row[0]);
    col[1] += static_cast<double>(row[1]);
  }
  const double total = col[0] + col[1];
  if (col[0] == 0 || col[1] == 0) return {0.0, 0, 1.0};

  auto expected_ok = [&](const std::array<double, 2>& g) {
    double rt = g[0] + g[1];
    return rt * col[0] / total >= 5.0 && rt * col[1] / total >= 5.0;
  };
  std::vector<std::array<double, 2>> groups;
  std::array<double, 2> cur{0, 0};
  for (const auto& row : table) {
    cur[0] += static_cast<double>(row[0]);
    cur[1] += static_cast<double>(row[1]);
    if (expected_ok(cur)) {
      groups.push_back(cur);
      cur = {0, 0};
    }
  }
  if (cur[0] + cur[1] > 0) {
    if (groups.empty()) groups.push_back(cur);
    else {
      groups.back()[0] += cur[0];
      groups.back()[1] += cur[1];
    }
  }
  if (groups.size() < 2) return {0.0, 0, 1.0};

  double stat = 0.0;
  for (const auto& g : groups) {
    double rt = g[0] + g[1];
    for (int c = 0; c < 2; ++c) {
      double e = rt * col[c] / total;
      stat += (g[static_cast<std::size_t>(c)] - e) * (g[static_cast<std::size_t>(c)] - e) / e;
    }
  }
  int dof = static_cast<int>(groups.size()) - 1;
  boost::math::chi_squared_distribution<double> dist(dof);
  return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

ShieldingReport shielded_independence_check(const ShieldingParams& p) {
  if (p.replications < 1) throw std::invalid_argument("shielded_independence_check: replications must be >= 1");
  const int d = 2;
  LatticeBox box(d, p.box_radius);
  HoleCandidateSpec spec = HoleCandidateSpec::with_delta(p.n, p.threshold, 1.0, 1.0 - 1.0 / p.r);
  ShieldingReport rep;
  rep.sites = candidate_sites(spec, d);
  if (box.radius() < spec.required_radius() + 2)
    throw std::invalid_argument("shielded_independence_check: box too small for the annulus");
  for (std::size_t k : p.subset) {
    if (k >= rep.sites.size()) throw std::invalid_argument("shielded_independence_check: subset index out of range");
    rep.subset.push_back(rep.sites[k]);
  }
  std::sort(rep.subset.begin(), rep.subset.end());
  rep.counts.assign(rep.subset.size() + 1, {0, 0});

  const std::size_t slots = box.vertex_count() * static_cast<std::size_t>(d);
  auto slot = [&](const Edge& e) { return box.index(e.base) * static_cast<std::size_t>(d) + static_cast<std::size_t>(e.axis); };
  std::vector<std::uint8_t> incident_to_v(slots, 0);
  for (const Vertex& w : rep.subset)
    for (const Vertex& n : neighbors(w)) incident_to_v[slot(canonical_edge(w, n))] = 1;

  auto in_subset = [&](const Vertex& v) { return std::binary_search(rep.subset.begin(), rep.subset.end(), v); };

  std::vector<std::uint8_t> read_n(slots), read_ab(slots);
  for (int r = 0; r < p.replications; ++r) {
    WeightTable table = WeightTable::from_field(EdgeWeightField(p.model, seed_stream(p.seed, static_cast<std::uint64_t>(r))), box);
    std::fill(read_n.begin(), read_n.end(), 0);
    std::fill(read_ab.begin(), read_ab.end(), 0);
    auto reader = [&](std::vector<std::uint8_t>& log) {
      return [&table, &log, &slot](const Edge& e) {
        log[slot(e)] = 1;
        return table.weight(e);
      };
    };
    auto read_for_n = reader(read_n);
    auto read_for_ab = reader(read_ab);

    // N_{V,n}
    std::size_t n_heavy = 0;
    for (const Vertex& w : rep.subset) {
      bool heavy = true;
      for (const Vertex& n : neighbors(w))
        if (!(read_for_n(canonical_edge(w, n)) > p.heavy)) heavy = false;
      n_heavy += heavy;
    }

    // (B): every edge between vertices of the *-ring around v is open
    auto shielded = [&](const Vertex& v) {
      bool all_open = true;
      for (const Vertex& x : star_neighbors(v)) {
        for (int a = 0; a < d; ++a) {
          Vertex y = x.shifted(a, 1);
          Vertex diff = y;
          for (int b = 0; b < d; ++b) diff[b] -= v[b];
          if (y == v || diff.linf_norm() != 1) continue;
          if (!(read_for_ab(Edge{x, a}) <= p.threshold)) all_open = false;
        }
      }
      return all_open;
    };
    std::vector<std::uint8_t> b(rep.sites.size());
    for (std::size_t k = 0; k < rep.sites.size(); ++k) b[k] = shielded(rep.sites[k]);

    // (A') on the configuration with every edge at V closed, never reading them
    PercolationView shielded_view(
        [&](const Edge& e) {
          if (incident_to_v[slot(e)]) return std::numeric_limits<double>::infinity();
          return read_for_ab(e);
        },
        p.threshold, box);
    // (A) on the full configuration; not part of the audit
    PercolationView full_view = label_clusters(table, p.threshold);

    bool event = true, event_shielded = true, v_in_b = true, a_differs = false;
    for (std::size_t k = 0; k < rep.sites.size(); ++k) {
      const Vertex& v = rep.sites[k];
      Vertex u = v.shifted(0, -1);
      bool a = full_view.in_largest(u);
      bool a_prime = shielded_view.in_largest(u);
      bool want = in_subset(v);
      if ((a && b[k]) != want) event = false;
      if ((a_prime && b[k]) != want) event_shielded = false;
      if (want && !b[k]) v_in_b = false;
      if (a != a_prime) a_differs = true;
    }
    if ((v_in_b && a_differs) || event != event_shielded) ++rep.shield_mismatches;

    bool overlap = false;
    for (std::size_t s = 0; s < slots && !overlap; ++s) overlap = read_n[s] && read_ab[s];
    rep.access_overlaps += overlap;

    rep.counts[n_heavy][event ? 1 : 0] += 1;
    rep.event_hits += event;
  }
  ChiSquareResult chi = chi_square_independence(rep.counts);
  rep.chi_square = chi.statistic;
  rep.dof = chi.dof;
  rep.p_value = chi.p_value;
  return rep;
}

}  // namespace fpplab
