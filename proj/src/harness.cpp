#include "fpplab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <gmpxx.h>

#include "fpplab/boundary.hpp"
#include "fpplab/contours.hpp"
#include "fpplab/percolation.hpp"
#include "fpplab/scaling.hpp"
#include "fpplab/seeds.hpp"

namespace fpplab {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects an integer, got '" + v + "'");
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "model") c.model = WeightModel::parse(value);
  else if (key == "dim") c.dim = static_cast<int>(to_long(key, value));
  else if (key == "horizons") {
    c.horizons.clear();
    for (const auto& h : split_list(value)) c.horizons.push_back(to_double(key, h));
  } else if (key == "margin") c.margin = to_double(key, value);
  else if (key == "speed") c.speed = to_double(key, value);
  else if (key == "box_radius") c.box_radius = static_cast<int>(to_long(key, value));
  else if (key == "replications") c.replications = static_cast<int>(to_long(key, value));
  else if (key == "seed") {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("config: seed expects an unsigned integer, got '" + value + "'");
    }
  } else if (key == "probes") c.probes = static_cast<int>(to_long(key, value));
  else if (key == "out") c.out = value;
  else if (key == "threads") c.threads = static_cast<int>(to_long(key, value));
  else if (key == "memory_mb") c.memory_mb = to_double(key, value);
  else c.params[key] = value;
}

double quantile7(std::vector<double> xs, double q) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  double h = q * static_cast<double>(xs.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile7(std::move(xs), 0.5); }

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::string str(long x) { return std::to_string(x); }
std::string str(std::size_t x) { return std::to_string(x); }
std::string str(int x) { return std::to_string(x); }
std::string str(double x) { return format_double(x); }
std::string str(bool x) { return x ? "1" : "0"; }

nlohmann::json fit_json(const ExponentFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}, {"stderr_slope", f.stderr_slope}};
}

// No reached vertex on the box face: the ball is not box-truncated.
bool ball_inside(const PassageField& pf) {
  const LatticeBox& box = pf.box();
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (!pf.reached(i)) continue;
    for (int a = 0; a < box.dim(); ++a)
      if (std::abs(box.coord(i, a)) == box.radius()) return false;
  }
  return true;
}

struct RunContext {
  const ExperimentConfig& cfg;
  RunRecord& rec;

  LatticeBox box() const { return LatticeBox(cfg.dim, cfg.resolved_box_radius()); }
  EdgeWeightField field(std::size_t rep) const { return EdgeWeightField(cfg.model, seed_stream(cfg.seed, rep)); }
  PassageField passage(std::size_t rep) const { return compute_passage(field(rep), box(), cfg.max_horizon()); }

  template <class R>
  std::vector<R> each_replication(const std::function<R(std::size_t)>& fn) const {
    return parallel_ordered<R>(static_cast<std::size_t>(cfg.replications), cfg.threads, fn);
  }

  // excluded replications are counted; more than 1% aborts the run
  void guard(std::size_t failures) const {
    rec.guard_failures = failures;
    rec.summary["guard_failures"] = failures;
    if (failures * 100 > static_cast<std::size_t>(cfg.replications))
      throw GuardFailure("guard: " + std::to_string(failures) + " of " + std::to_string(cfg.replications) +
                         " replications reached the box face");
  }
};

// ---- recipes ----

void recipe_diamond(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const Dirac* dirac = std::get_if<Dirac>(&cfg.model.params());
  const bool closed_form = dirac && cfg.dim == 2;
  CsvTable t{"timeline", {"replication", "t", "boundary_edges", "closed_form", "holes", "metric_mismatches"}, {}};
  bool all_match = true;
  std::size_t failures = 0;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    PassageField pf = ctx.passage(static_cast<std::size_t>(rep));
    if (!ball_inside(pf)) {
      ++failures;
      continue;
    }
    // T(0, x) = c |x|_1 under a constant weight
    long mismatches = 0;
    if (dirac) {
      const LatticeBox& box = pf.box();
      for (std::size_t i = 0; i < box.vertex_count(); ++i) {
        long l1 = 0;
        for (int a = 0; a < box.dim(); ++a) l1 += std::abs(box.coord(i, a));
        double expect = dirac->value * static_cast<double>(l1);
        bool want = expect <= pf.horizon();
        if (want != pf.reached(i) || (want && pf.time_at(i) != expect)) ++mismatches;
      }
    }
    BoundaryTimeline tl = boundary_timeline(pf);
    for (int s = 0; s <= static_cast<int>(std::floor(pf.horizon())); ++s) {
      long count = tl.count_at(s);
      std::size_t holes = hole_census_at(pf, s).components.size();
      long expect = closed_form ? 8 * static_cast<long>(std::floor(s / dirac->value)) + 4 : -1;
      if (closed_form && (count != expect || holes != 0 || mismatches != 0)) all_match = false;
      t.add({str(rep), str(s), str(count), closed_form ? str(expect) : "", str(holes), str(mismatches)});
    }
  }
  ctx.guard(failures);
  ctx.rec.summary["closed_form_applies"] = closed_form;
  ctx.rec.summary["matches_closed_form"] = closed_form && all_match;
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_simulate(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  struct Rep {
    bool inside = false;
    BoundaryTimeline tl;
    std::vector<std::size_t> ball;
  };
  auto reps = ctx.each_replication<Rep>([&](std::size_t rep) {
    Rep r;
    PassageField pf = ctx.passage(rep);
    r.inside = ball_inside(pf);
    if (!r.inside) return r;
    r.tl = boundary_timeline(pf);
    for (double h : cfg.horizons) r.ball.push_back(pf.ball_size(h));
    return r;
  });
  CsvTable t{"timeline", {"replication", "breakpoint", "boundary_edges"}, {}};
  CsvTable b{"balls", {"replication", "t", "ball_size", "boundary_edges"}, {}};
  std::size_t failures = 0;
  for (std::size_t rep = 0; rep < reps.size(); ++rep) {
    const Rep& r = reps[rep];
    if (!r.inside) {
      ++failures;
      continue;
    }
    for (std::size_t i = 0; i < r.tl.breakpoints.size(); ++i)
      t.add({str(rep), str(r.tl.breakpoints[i]), str(r.tl.counts[i])});
    for (std::size_t k = 0; k < cfg.horizons.size(); ++k)
      b.add({str(rep), str(cfg.horizons[k]), str(r.ball[k]), str(r.tl.count_at(cfg.horizons[k]))});
  }
  ctx.guard(failures);
  ctx.rec.tables.push_back(std::move(t));
  ctx.rec.tables.push_back(std::move(b));
}

void recipe_oracle(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const std::vector<WeightModel> models{WeightModel::exponential(1.0), WeightModel::uniform(0.0, 1.0),
                                        WeightModel::pareto(0.125), WeightModel::bernoulli_zero(0.2, 1.0),
                                        WeightModel::tower(3, 2)};
  const long fixtures = cfg.param_int("fixtures", 100);
  CsvTable t{"oracle", {"fixture", "model", "dim", "radius", "seed", "vertices", "reached", "mismatches"}, {}};
  long total = 0;
  auto start = std::chrono::steady_clock::now();
  for (long i = 0; i < fixtures; ++i) {
    const WeightModel& m = models[static_cast<std::size_t>(i) % models.size()];
    const int d = i % 2 == 0 ? 2 : 3;
    const int r = 1 + static_cast<int>((i / 2) % (d == 2 ? 6 : 4));
    const std::uint64_t seed = seed_stream(cfg.seed, static_cast<std::uint64_t>(i));
    EdgeWeightField f(m, seed);
    LatticeBox box(d, r);
    PassageField fast = compute_passage(f, box, cfg.max_horizon());
    PassageField slow = reference_passage(f, box, cfg.max_horizon());
    long mismatches = 0;
    for (std::size_t k = 0; k < box.vertex_count(); ++k) {
      double a = fast.time_at(k), b = slow.time_at(k);
      if (!(a == b || (std::isnan(a) && std::isnan(b)))) ++mismatches;
    }
    total += mismatches;
    t.add({str(i), m.descriptor(), str(d), str(r), std::to_string(seed), str(box.vertex_count()),
           str(fast.reached_count()), str(mismatches)});
  }
  ctx.rec.summary["fixtures"] = fixtures;
  ctx.rec.summary["mismatches"] = total;
  ctx.rec.summary["oracle_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_array_identity(RunContext& ctx) {
  auto reps = ctx.each_replication<std::optional<ArrayMethodReport>>([&](std::size_t rep) {
    EdgeWeightField f = ctx.field(rep);
    PassageField pf = compute_passage(f, ctx.box(), ctx.cfg.max_horizon());
    if (!ball_inside(pf)) return std::optional<ArrayMethodReport>{};
    return std::optional<ArrayMethodReport>(
        array_method_identity_check(pf, [&](const Edge& e) { return f.weight(e); }));
  });
  CsvTable t{"array_identity",
             {"replication", "edges", "timeline_integral", "interval_sum", "relative_error", "cap_violations",
              "max_excess"},
             {}};
  double worst = 0.0;
  std::size_t caps = 0, failures = 0;
  for (std::size_t rep = 0; rep < reps.size(); ++rep) {
    if (!reps[rep]) {
      ++failures;
      continue;
    }
    const auto& r = *reps[rep];
    worst = std::max(worst, r.relative_error);
    caps += r.cap_violations;
    t.add({str(rep), str(r.edges), str(r.timeline_integral), str(r.interval_sum), str(r.relative_error),
           str(r.cap_violations), str(r.max_excess)});
  }
  ctx.guard(failures);
  ctx.rec.summary["fixtures"] = reps.size() - failures;
  ctx.rec.summary["max_relative_error"] = worst;
  ctx.rec.summary["cap_violations"] = caps;
  ctx.rec.tables.push_back(std::move(t));
}

// One run per replication at the largest horizon, measured at every grid time.
void recipe_scaling(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  struct Row {
    std::size_t ball;
    long edge;
    std::size_t exterior;
    std::size_t holes;
    std::size_t size_one;
  };
  struct Rep {
    bool inside = false;
    std::vector<Row> rows;
  };
  auto reps = ctx.each_replication<Rep>([&](std::size_t rep) {
    Rep r;
    PassageField pf = ctx.passage(rep);
    r.inside = ball_inside(pf);
    if (!r.inside) return r;
    for (double h : cfg.horizons) {
      BallTopology top = ball_topology(pf, h);
      r.rows.push_back({top.ball_size, top.edge_boundary, top.exterior.edge_part.size(), top.holes.components.size(),
                        top.holes.size_one_count()});
    }
    return r;
  });
  CsvTable t{"scaling", {"replication", "t", "ball_size", "boundary_edges", "exterior_edges", "holes", "size_one_holes"},
             {}};
  const std::size_t k = cfg.horizons.size();
  std::vector<std::vector<double>> edge(k), ext(k), ones(k);
  std::size_t failures = 0;
  for (std::size_t rep = 0; rep < reps.size(); ++rep) {
    if (!reps[rep].inside) {
      ++failures;
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const Row& r = reps[rep].rows[j];
      t.add({str(rep), str(cfg.horizons[j]), str(r.ball), str(r.edge), str(r.exterior), str(r.holes),
             str(r.size_one)});
      edge[j].push_back(static_cast<double>(r.edge));
      ext[j].push_back(static_cast<double>(r.exterior));
      ones[j].push_back(static_cast<double>(r.size_one));
    }
  }
  ctx.guard(failures);

  YStatistic ys(cfg.model, cfg.dim);
  CsvTable s{"scaling_summary",
             {"t", "median_boundary_edges", "median_exterior_edges", "mean_size_one_holes", "hole_ratio"}, {}};
  std::vector<std::pair<double, double>> pe, px;
  std::vector<double> ratios;
  for (std::size_t j = 0; j < k; ++j) {
    double h = cfg.horizons[j];
    double me = median(edge[j]), mx = median(ext[j]), mo = mean(ones[j]);
    // size-one holes against t^d P(Y > t)
    double norm = std::pow(h, cfg.dim) * ys.tail(h);
    double ratio = norm > 0.0 ? mo / norm : std::numeric_limits<double>::quiet_NaN();
    ratios.push_back(ratio);
    pe.emplace_back(h, me);
    px.emplace_back(h, mx);
    s.add({str(h), str(me), str(mx), str(mo), str(ratio)});
  }
  auto& sum = ctx.rec.summary;
  if (k >= 4) {
    sum["boundary_fit"] = fit_json(fit_exponent(pe));
    sum["exterior_fit"] = fit_json(fit_exponent(px));
  }
  // null when P(Y > t) underflows or no size-one hole was seen at some t
  bool usable = std::all_of(ratios.begin(), ratios.end(), [](double r) { return std::isfinite(r) && r > 0.0; });
  sum["hole_ratio"] = ratios;
  if (usable) {
    auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    sum["hole_ratio_band"] = *hi / *lo;
  } else {
    sum["hole_ratio_band"] = nullptr;
  }
  sum["replications_used"] = reps.size() - failures;
  ctx.rec.tables.push_back(std::move(t));
  ctx.rec.tables.push_back(std::move(s));
}

void recipe_rough_density(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto as = cfg.param_list("a", {2, 5, 10, 20});
  YStatistic ys(cfg.model, cfg.dim);
  auto psi = [&](double s) { return ys.expected_truncated(s); };
  auto reps = ctx.each_replication<std::optional<std::vector<double>>>([&](std::size_t rep) {
    PassageField pf = ctx.passage(rep);
    if (!ball_inside(pf)) return std::optional<std::vector<double>>{};
    BoundaryTimeline tl = boundary_timeline(pf);
    std::vector<double> dens;
    for (double a : as) dens.push_back(rough_time_density(tl, a, psi, cfg.dim));
    return std::optional<std::vector<double>>(dens);
  });
  CsvTable t{"rough_density", {"replication", "a", "density"}, {}};
  std::vector<std::vector<double>> by_a(as.size());
  std::size_t failures = 0;
  for (std::size_t rep = 0; rep < reps.size(); ++rep) {
    if (!reps[rep]) {
      ++failures;
      continue;
    }
    for (std::size_t j = 0; j < as.size(); ++j) {
      t.add({str(rep), str(as[j]), str((*reps[rep])[j])});
      by_a[j].push_back((*reps[rep])[j]);
    }
  }
  ctx.guard(failures);
  std::vector<double> med;
  CsvTable s{"rough_density_summary", {"a", "median_density", "three_over_a"}, {}};
  for (std::size_t j = 0; j < as.size(); ++j) {
    med.push_back(median(by_a[j]));
    s.add({str(as[j]), str(med.back()), str(3.0 / as[j])});
  }
  bool nonincreasing = true;
  for (std::size_t j = 1; j < med.size(); ++j) nonincreasing = nonincreasing && med[j] <= med[j - 1];
  ctx.rec.summary["a"] = as;
  ctx.rec.summary["median_density"] = med;
  ctx.rec.summary["nonincreasing"] = nonincreasing;
  ctx.rec.tables.push_back(std::move(t));
  ctx.rec.tables.push_back(std::move(s));
}

void recipe_ratio_table(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<WeightModel> models{WeightModel::exponential(1.0), WeightModel::tower(3, cfg.dim)};
  if (std::find(models.begin(), models.end(), cfg.model) == models.end()) models.push_back(cfg.model);
  CsvTable t{"ratio_table", {"model", "t", "t_tail", "lower", "upper", "ratio", "t_over_2logt"}, {}};
  auto row = [&](const WeightModel& m, double x) {
    YStatistic ys(m, cfg.dim);
    BoundRatio b = bound_ratio(ys, x);
    t.add({m.descriptor(), str(x), str(x * ys.tail(x)), str(b.lower), str(b.upper), str(b.ratio),
           str(x / (2.0 * std::log(x)))});
    return b;
  };
  double exp_max = 0.0;
  for (const WeightModel& m : models) {
    for (double x : cfg.horizons) {
      BoundRatio b = row(m, x);
      if (m == models[0]) exp_max = std::max(exp_max, b.ratio);
    }
  }
  // the first tower threshold beyond 3 is 27; probe it and its left limit
  const double x2 = 27.0, x2_minus = std::nextafter(27.0, 0.0);
  BoundRatio at = row(models[1], x2);
  BoundRatio below = row(models[1], x2_minus);
  auto& s = ctx.rec.summary;
  s["exponential_max_ratio"] = exp_max;
  s["tower_ratio_at_27"] = at.ratio;
  s["tower_ratio_below_27"] = below.ratio;
  s["target_at_27"] = x2 / (2.0 * std::log(x2));
  s["target_below_27"] = x2_minus / (2.0 * std::log(x2_minus));
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_contour_count(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const int n_max = static_cast<int>(cfg.param_int("n_max", 6));
  if (n_max > animal_budget(cfg.dim))
    throw std::invalid_argument("contour-count: n_max exceeds the enumeration budget for d=" + str(cfg.dim));
  CsvTable t{"contours",
             {"n", "fixed_animals", "animals_at_origin", "bound", "within_bound", "symmetric", "enclosing_contours"},
             {}};
  bool within = true, symmetric = true;
  auto start = std::chrono::steady_clock::now();
  for (int n = 1; n <= n_max; ++n) {
    std::uint64_t fixed = count_fixed_star_animals(n, cfg.dim);
    std::uint64_t at0 = enumerate_star_animals(n, cfg.dim);
    double bound = contour_count_bound(n, cfg.dim);
    bool ok = static_cast<double>(at0) <= bound;
    bool sym = true;
    for (int g = 1; g < symmetry_count(cfg.dim); ++g) sym = sym && count_fixed_star_animals(n, cfg.dim, g) == fixed;
    within = within && ok;
    symmetric = symmetric && sym;
    std::string enclosing = cfg.dim == 2 ? std::to_string(count_enclosing_contours(n)) : "";
    t.add({str(n), std::to_string(fixed), std::to_string(at0), str(bound), str(ok), str(sym), enclosing});
  }
  ctx.rec.summary["n_max"] = n_max;
  ctx.rec.summary["within_bound"] = within;
  ctx.rec.summary["symmetry_invariant"] = symmetric;
  ctx.rec.summary["enumeration_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_bad_contours(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  BadContourParams p;
  p.model = cfg.model;
  p.alpha = cfg.param("alpha", 3.0);
  p.dim = cfg.dim;
  p.horizon = cfg.max_horizon();
  p.box_radius = cfg.resolved_box_radius();
  p.probes_per_run = cfg.probes;
  p.replications = cfg.replications;
  p.seed = cfg.seed;
  p.bin_edges.clear();
  for (double e : cfg.param_list("bins", {4, 8, 16, 32, 64, 128, 256, 512, 1024}))
    p.bin_edges.push_back(static_cast<std::size_t>(e));
  BadContourTable table = bad_contour_rate(p);
  CsvTable t{"bad_contours", {"size_lo", "size_hi", "probes", "bad", "frequency"}, {}};
  for (const auto& b : table.bins) t.add({str(b.size_lo), str(b.size_hi), str(b.probes), str(b.bad), str(b.frequency())});
  ctx.rec.summary["slope"] = table.slope;
  ctx.rec.summary["slope_stderr"] = table.slope_stderr;
  ctx.rec.summary["fitted_bins"] = table.fitted_bins;
  ctx.rec.summary["probes"] = table.probes;
  ctx.rec.summary["non_enclosing"] = table.non_enclosing;
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_timar(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  struct Probe {
    double s;
    std::size_t vertices;
    bool connected;
  };
  struct Rep {
    bool inside = false;
    std::vector<Probe> probes;
  };
  auto reps = ctx.each_replication<Rep>([&](std::size_t rep) {
    Rep r;
    PassageField pf = ctx.passage(rep);
    r.inside = ball_inside(pf);
    if (!r.inside) return r;
    for (int k = 1; k <= cfg.probes; ++k) {
      double s = pf.horizon() * k / cfg.probes;
      auto ext = exterior_boundary_at(pf, s);
      r.probes.push_back({s, ext.vertex_part.size(), is_star_connected(ext.vertex_part)});
    }
    return r;
  });
  CsvTable t{"timar", {"replication", "s", "exterior_vertices", "star_connected"}, {}};
  std::size_t total = 0, ok = 0, failures = 0;
  for (std::size_t rep = 0; rep < reps.size(); ++rep) {
    if (!reps[rep].inside) {
      ++failures;
      continue;
    }
    for (const Probe& p : reps[rep].probes) {
      ++total;
      ok += p.connected;
      t.add({str(rep), str(p.s), str(p.vertices), str(p.connected)});
    }
  }
  ctx.guard(failures);
  ctx.rec.summary["probes"] = total;
  ctx.rec.summary["star_connected"] = ok;
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_lemmas(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  auto& sum = ctx.rec.summary;

  RegularitySearch reg = regularity_randomized_search(static_cast<int>(cfg.param_int("regularity_trials", 10000)),
                                                      seed_stream(cfg.seed, 0));
  CsvTable r{"lemmas_regularity", {"trials", "inadmissible", "violations", "worst_margin"}, {}};
  r.add({str(reg.trials), str(reg.inadmissible), str(reg.violations), str(reg.worst_margin)});
  sum["regularity"] = {{"trials", reg.trials},
                       {"inadmissible", reg.inadmissible},
                       {"violations", reg.violations},
                       {"worst_margin", reg.worst_margin}};

  const double p = cfg.param("bernstein_p", 0.3);
  const long n = cfg.param_int("bernstein_n", 1000);
  const auto ts = cfg.param_list("bernstein_t", {30, 40, 50, 60});
  const int breps = static_cast<int>(cfg.param_int("bernstein_replications", 10000));
  CsvTable b{"lemmas_bernstein", {"p", "n", "t", "empirical", "bound", "replications"}, {}};
  bool bern_ok = true;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    BernsteinTail tail = bernstein_bernoulli_check(p, n, ts[i], breps, seed_stream(cfg.seed, 1 + i));
    bern_ok = bern_ok && tail.empirical <= tail.bound;
    b.add({str(p), str(n), str(ts[i]), str(tail.empirical), str(tail.bound), str(tail.replications)});
  }
  sum["bernstein_ok"] = bern_ok;

  std::vector<long> grid;
  for (double x : cfg.param_list("truncation_n", {100, 1000, 10000})) grid.push_back(static_cast<long>(x));
  auto rows = truncation_lemma_check(cfg.model, cfg.dim, grid, cfg.param("truncation_c", 1.0),
                                     static_cast<int>(cfg.param_int("truncation_replications", 500)),
                                     seed_stream(cfg.seed, 100));
  CsvTable tr{"lemmas_truncation",
              {"n", "cap", "mean_exact", "mean_mc", "mean_mc_stderr", "failure_frequency", "replications"},
              {}};
  std::vector<double> freq;
  for (const auto& row : rows) {
    freq.push_back(row.failure_frequency);
    tr.add({str(row.n), str(row.cap), str(row.mean_exact), str(row.mean_mc), str(row.mean_mc_stderr),
            str(row.failure_frequency), str(row.replications)});
  }
  bool nonincreasing = true;
  for (std::size_t i = 1; i < freq.size(); ++i) nonincreasing = nonincreasing && freq[i] <= freq[i - 1];
  sum["truncation_failure_frequency"] = freq;
  sum["truncation_nonincreasing"] = nonincreasing;

  ctx.rec.tables.push_back(std::move(r));
  ctx.rec.tables.push_back(std::move(b));
  ctx.rec.tables.push_back(std::move(tr));
}

void recipe_shielding(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  ShieldingParams p;
  p.model = cfg.model;
  p.threshold = cfg.param("threshold", p.threshold);
  p.heavy = cfg.param("heavy", p.heavy);
  p.n = static_cast<int>(cfg.param_int("n", p.n));
  p.r = cfg.param("r", p.r);
  p.subset.clear();
  for (double k : cfg.param_list("subset", {0, 2, 4})) p.subset.push_back(static_cast<std::size_t>(k));
  p.box_radius = cfg.resolved_box_radius();
  p.replications = cfg.replications;
  p.seed = cfg.seed;
  ShieldingReport rep = shielded_independence_check(p);
  CsvTable t{"shielding", {"n_count", "event_absent", "event_present"}, {}};
  for (std::size_t k = 0; k < rep.counts.size(); ++k) t.add({str(k), str(rep.counts[k][0]), str(rep.counts[k][1])});
  auto& s = ctx.rec.summary;
  s["sites"] = rep.sites.size();
  s["event_hits"] = rep.event_hits;
  s["access_overlaps"] = rep.access_overlaps;
  s["shield_mismatches"] = rep.shield_mismatches;
  s["chi_square"] = rep.chi_square;
  s["dof"] = rep.dof;
  s["p_value"] = rep.p_value;
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_holes(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const double m = cfg.param("threshold", 1.0);
  const double delta = cfg.param("delta", 0.4);
  const double d4 = cfg.param("d4", 1.0);
  std::vector<int> levels;
  for (double n : cfg.param_list("levels", {2, 3})) levels.push_back(static_cast<int>(n));
  struct Rep {
    bool inside = false;
    std::vector<std::array<double, 4>> census;  // holes, size-one, largest, hole edges
    std::vector<std::pair<std::size_t, std::size_t>> candidates;  // sites, L_n
  };
  auto reps = ctx.each_replication<Rep>([&](std::size_t rep) {
    Rep r;
    EdgeWeightField f = ctx.field(rep);
    PassageField pf = compute_passage(f, ctx.box(), cfg.max_horizon());
    r.inside = ball_inside(pf);
    if (!r.inside) return r;
    for (double h : cfg.horizons) {
      BallTopology top = ball_topology(pf, h);
      std::size_t largest = 0;
      for (const auto& c : top.holes.components) largest = std::max(largest, c.size);
      r.census.push_back({static_cast<double>(top.holes.components.size()),
                          static_cast<double>(top.holes.size_one_count()), static_cast<double>(largest),
                          static_cast<double>(top.hole_edge_boundary)});
    }
    PercolationView view = label_clusters(f, m, ctx.box());
    EdgeWeightFn w = [&](const Edge& e) { return f.weight(e); };
    for (int n : levels) {
      auto spec = HoleCandidateSpec::with_delta(n, m, d4, delta);
      r.candidates.emplace_back(candidate_sites(spec, cfg.dim).size(), count_hole_candidates(view, w, spec));
    }
    return r;
  });
  CsvTable h{"holes", {"replication", "t", "holes", "size_one_holes", "largest_hole", "hole_edges"}, {}};
  CsvTable c{"hole_candidates", {"replication", "level", "t_n", "sites", "candidates"}, {}};
  std::size_t failures = 0;
  std::vector<double> mean_l(levels.size(), 0.0);
  for (std::size_t rep = 0; rep < reps.size(); ++rep) {
    if (!reps[rep].inside) {
      ++failures;
      continue;
    }
    for (std::size_t j = 0; j < cfg.horizons.size(); ++j) {
      const auto& x = reps[rep].census[j];
      h.add({str(rep), str(cfg.horizons[j]), str(x[0]), str(x[1]), str(x[2]), str(x[3])});
    }
    for (std::size_t j = 0; j < levels.size(); ++j) {
      auto spec = HoleCandidateSpec::with_delta(levels[j], m, d4, delta);
      c.add({str(rep), str(levels[j]), str(spec.t_n), str(reps[rep].candidates[j].first),
             str(reps[rep].candidates[j].second)});
      mean_l[j] += static_cast<double>(reps[rep].candidates[j].second);
    }
  }
  ctx.guard(failures);
  for (double& x : mean_l) x /= static_cast<double>(std::max<std::size_t>(1, reps.size() - failures));
  ctx.rec.summary["levels"] = levels;
  ctx.rec.summary["mean_candidates"] = mean_l;
  ctx.rec.tables.push_back(std::move(h));
  ctx.rec.tables.push_back(std::move(c));
}

void recipe_busemann(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto dir = cfg.param_list("direction", {1.0, 0.0});
  if (static_cast<int>(dir.size()) != cfg.dim) throw std::invalid_argument("busemann: direction has wrong dimension");
  const long gap = cfg.param_int("gap", 32);
  const long step = cfg.param_int("step", 4);
  const long per_rep = cfg.param_int("samples", 10);
  struct Sample {
    long l;
    ExactDifference inc;
  };
  struct Rep {
    bool complete = true;
    bool telescopes = true;
    std::vector<Sample> samples;
  };
  auto reps = ctx.each_replication<Rep>([&](std::size_t rep) {
    Rep r;
    PassageField pf = ctx.passage(rep);
    for (long i = 0; i < per_rep; ++i) {
      const long l = i * step, k = l + gap;
      auto inc = busemann_increment(pf, dir, static_cast<double>(k), static_cast<double>(l));
      if (!inc) {
        r.complete = false;
        return r;
      }
      // unit steps must add up to the increment exactly
      mpq_class sum = 0;
      for (long j = l; j < k; ++j) {
        auto u = busemann_increment(pf, dir, static_cast<double>(j + 1), static_cast<double>(j));
        sum += mpq_class(u->hi) + mpq_class(u->lo);
      }
      r.telescopes = r.telescopes && sum == mpq_class(inc->hi) + mpq_class(inc->lo);
      r.samples.push_back({l, *inc});
    }
    return r;
  });
  CsvTable t{"busemann", {"replication", "l", "k", "hi", "lo", "per_unit"}, {}};
  std::vector<double> per_unit;
  std::size_t failures = 0, broken = 0;
  for (std::size_t rep = 0; rep < reps.size(); ++rep) {
    if (!reps[rep].complete) {
      ++failures;
      continue;
    }
    broken += !reps[rep].telescopes;
    for (const Sample& s : reps[rep].samples) {
      double v = s.inc.value() / static_cast<double>(gap);
      per_unit.push_back(v);
      t.add({str(rep), str(s.l), str(s.l + gap), str(s.inc.hi), str(s.inc.lo), str(v)});
    }
  }
  ctx.guard(failures);
  ctx.rec.summary["samples"] = per_unit.size();
  ctx.rec.summary["telescoping_failures"] = broken;
  ctx.rec.summary["p05_per_unit"] = quantile7(per_unit, 0.05);
  ctx.rec.summary["median_per_unit"] = quantile7(per_unit, 0.5);
  ctx.rec.tables.push_back(std::move(t));
}

void recipe_determinism(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  CsvTable t{"determinism", {"target", "table", "bytes", "identical"}, {}};
  bool all = true;
  for (const std::string& target : split_list(cfg.param_str("targets", "smoke,timar,array-identity,busemann"))) {
    if (target == "determinism") throw std::invalid_argument("determinism: cannot target itself");
    ExperimentConfig a = default_config(target);
    a.seed = cfg.seed;
    ExperimentConfig b = a;
    a.threads = 1;
    b.threads = std::max(2, cfg.threads);
    RunRecord ra = execute_recipe(a), rb = execute_recipe(b);
    for (std::size_t i = 0; i < ra.tables.size(); ++i) {
      std::string x = ra.tables[i].render(ra.config_hash), y = rb.tables[i].render(rb.config_hash);
      bool same = x == y && ra.tables.size() == rb.tables.size();
      all = all && same;
      t.add({target, ra.tables[i].name, str(x.size()), str(same)});
    }
  }
  ctx.rec.summary["identical"] = all;
  ctx.rec.tables.push_back(std::move(t));
}

struct Recipe {
  const char* name;
  bool uses_box;
  void (*run)(RunContext&);
  ExperimentConfig (*defaults)();
};

ExperimentConfig base(const char* name, WeightModel model, std::vector<double> horizons, double speed, int reps) {
  ExperimentConfig c;
  c.recipe = name;
  c.model = std::move(model);
  c.horizons = std::move(horizons);
  c.speed = speed;
  c.replications = reps;
  return c;
}

// Exp(1) in d = 2 has |x|_inf <= 2.5 t for x in B(t) at these scales.
constexpr double kExpSpeed = 2.6;

const std::vector<Recipe>& registry() {
  static const std::vector<Recipe> recipes{
      {"smoke", true, recipe_diamond, [] { return base("smoke", WeightModel::dirac(1.0), {8}, 1.0, 1); }},
      {"simulate", true, recipe_simulate,
       [] { return base("simulate", WeightModel::exponential(1.0), {16, 32, 64}, kExpSpeed, 1); }},
      {"oracle", false, recipe_oracle,
       [] {
         auto c = base("oracle", WeightModel::exponential(1.0), {40}, 1.0, 1);
         c.params["fixtures"] = "100";
         return c;
       }},
      {"diamond", true, recipe_diamond, [] { return base("diamond", WeightModel::dirac(1.0), {20}, 1.0, 1); }},
      {"array-identity", true, recipe_array_identity,
       [] {
         auto c = base("array-identity", WeightModel::exponential(1.0), {8}, kExpSpeed, 50);
         c.box_radius = 40;  // small t fluctuates well beyond 2.6 t
         return c;
       }},
      {"smooth-scaling", true, recipe_scaling,
       [] {
         return base("smooth-scaling", WeightModel::exponential(1.0), {32, 64, 128, 256, 512}, kExpSpeed, 50);
       }},
      {"rough-scaling", true, recipe_scaling,
       [] { return base("rough-scaling", WeightModel::pareto(0.125), {32, 64, 128, 256, 512}, 1.0, 200); }},
      {"hole-order", true, recipe_scaling,
       [] { return base("hole-order", WeightModel::pareto(0.125), {64, 128, 256}, 1.0, 2000); }},
      {"rough-density", true, recipe_rough_density,
       [] {
         auto c = base("rough-density", WeightModel::exponential(1.0), {256}, kExpSpeed, 20);
         c.params["a"] = "2,5,10,20";
         return c;
       }},
      {"ratio-table", false, recipe_ratio_table,
       [] {
         std::vector<double> grid;
         for (int k = 1; k <= 20; ++k) grid.push_back(std::ldexp(1.0, k));
         return base("ratio-table", WeightModel::exponential(1.0), grid, 1.0, 1);
       }},
      {"contour-count", false, recipe_contour_count,
       [] {
         auto c = base("contour-count", WeightModel::exponential(1.0), {1}, 1.0, 1);
         c.params["n_max"] = "6";
         return c;
       }},
      {"bad-contours", true, recipe_bad_contours,
       [] {
         auto c = base("bad-contours", WeightModel::exponential(1.0), {48}, kExpSpeed, 20);
         c.probes = 16;
         c.params["alpha"] = "2";
         return c;
       }},
      {"timar", true, recipe_timar,
       [] {
         auto c = base("timar", WeightModel::exponential(1.0), {32}, kExpSpeed, 50);
         c.probes = 4;
         return c;
       }},
      {"lemmas", false, recipe_lemmas,
       [] {
         auto c = base("lemmas", WeightModel::pareto(0.125), {1}, 1.0, 1);
         c.params["regularity_trials"] = "10000";
         c.params["bernstein_replications"] = "10000";
         c.params["truncation_n"] = "100,1000,10000";
         c.params["truncation_replications"] = "500";
         return c;
       }},
      {"shielding", true, recipe_shielding,
       [] {
         auto c = base("shielding", WeightModel::uniform(0.0, 1.0), {1}, 1.0, 10000);
         c.box_radius = 12;
         c.params["threshold"] = "0.9";
         c.params["heavy"] = "0.2";
         c.params["n"] = "2";
         c.params["r"] = format_double(5.0 / 3.0);
         c.params["subset"] = "0,2,4";
         return c;
       }},
      {"holes", true, recipe_holes,
       [] {
         auto c = base("holes", WeightModel::exponential(1.0), {16, 32}, kExpSpeed, 20);
         c.params["threshold"] = "1";
         c.params["delta"] = "0.4";
         c.params["d4"] = "1";
         c.params["levels"] = "2,3";
         return c;
       }},
      {"busemann", true, recipe_busemann,
       [] {
         auto c = base("busemann", WeightModel::exponential(1.0), {48}, kExpSpeed, 100);
         c.params["direction"] = "1,0";
         c.params["gap"] = "32";
         c.params["step"] = "4";
         c.params["samples"] = "10";
         return c;
       }},
      {"determinism", false, recipe_determinism,
       [] {
         auto c = base("determinism", WeightModel::dirac(1.0), {1}, 1.0, 1);
         c.params["targets"] = "smoke,timar,array-identity,busemann";
         return c;
       }},
  };
  return recipes;
}

const Recipe& find_recipe(const std::string& name) {
  for (const Recipe& r : registry())
    if (name == r.name) return r;
  throw std::invalid_argument("unknown recipe '" + name + "'");
}

}  // namespace

// ---- config ----

double ExperimentConfig::max_horizon() const {
  return horizons.empty() ? 0.0 : *std::max_element(horizons.begin(), horizons.end());
}

int ExperimentConfig::resolved_box_radius() const {
  if (box_radius > 0) return box_radius;
  return static_cast<int>(std::ceil(margin * speed * max_horizon())) + 1;
}

void ExperimentConfig::validate() const {
  const Recipe& r = find_recipe(recipe);
  if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
  check_dimension(dim);
  if (horizons.empty()) throw std::invalid_argument("config: horizons must not be empty");
  for (double h : horizons)
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("config: horizons must be positive and finite");
  if (!(margin > 0.0) || !(speed > 0.0)) throw std::invalid_argument("config: margin and speed must be positive");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (probes < 1) throw std::invalid_argument("config: probes must be >= 1");
  if (box_radius < 0) throw std::invalid_argument("config: box_radius must be >= 0");
  if (!model.is_subcritical(dim)) throw std::invalid_argument("config: P(t_e = 0) >= p_c for this dimension");
  if (!r.uses_box) return;
  const double need = margin * speed * max_horizon();
  if (static_cast<double>(resolved_box_radius()) < need)
    throw std::invalid_argument("config: box_radius " + std::to_string(box_radius) + " < margin * speed * horizon = " +
                                format_double(need));
  // times, heap entries and flood-fill marks per vertex, per concurrent worker
  const double vertices = std::pow(2.0 * resolved_box_radius() + 1.0, dim);
  const double workers = std::min(threads, replications);
  const double mb = vertices * 48.0 * workers / (1024.0 * 1024.0);
  if (mb > memory_mb)
    throw std::invalid_argument("config: estimated memory " + format_double(std::round(mb)) + " MB exceeds memory_mb");
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream o;
  std::string hs;
  for (std::size_t i = 0; i < horizons.size(); ++i) hs += (i ? "," : "") + format_double(horizons[i]);
  o << "[" << recipe << "]\n";
  o << "model = " << model.descriptor() << "\n";
  o << "dim = " << dim << "\n";
  o << "horizons = " << hs << "\n";
  o << "margin = " << format_double(margin) << "\n";
  o << "speed = " << format_double(speed) << "\n";
  o << "box_radius = " << box_radius << "\n";
  o << "replications = " << replications << "\n";
  o << "seed = " << seed << "\n";
  o << "probes = " << probes << "\n";
  o << "memory_mb = " << format_double(memory_mb) << "\n";
  for (const auto& [k, v] : params) o << k << " = " << v << "\n";
  o << "out = " << out << "\n";
  o << "threads = " << threads << "\n";
  return o.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text, const std::string& section) {
  struct Entry {
    std::string key, value;
    int line;
  };
  std::vector<Entry> global;
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": malformed section header");
      sections.emplace_back(trim(line.substr(1, line.size() - 2)), std::vector<Entry>{});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
    if (e.key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    (sections.empty() ? global : sections.back().second).push_back(std::move(e));
  }

  std::string name = section;
  const std::vector<Entry>* chosen = nullptr;
  if (name.empty()) {
    if (!sections.empty()) name = sections.front().first;
    else {
      name = "smoke";
      for (const auto& e : global)
        if (e.key == "recipe") name = e.value;
    }
  }
  for (const auto& [n, entries] : sections)
    if (n == name) chosen = &entries;
  if (!chosen && !section.empty() && !sections.empty())
    throw std::invalid_argument("config: no section [" + section + "]");

  ExperimentConfig c = is_recipe(name) ? default_config(name) : ExperimentConfig{};
  c.recipe = name;
  for (const auto& e : global)
    if (e.key != "recipe") apply_key(c, e.key, e.value);
  if (chosen)
    for (const auto& e : *chosen) {
      if (e.key == "recipe") throw std::invalid_argument("config line " + std::to_string(e.line) + ": recipe is set by the section name");
      apply_key(c, e.key, e.value);
    }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path, const std::string& section) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), section);
}

std::uint64_t ExperimentConfig::hash() const {
  ExperimentConfig c = *this;
  c.out.clear();
  c.threads = 1;
  return fnv1a(c.serialize());
}

std::string ExperimentConfig::hash_hex() const { return hex64(hash()); }

double ExperimentConfig::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : to_double(key, it->second);
}

long ExperimentConfig::param_int(const std::string& key, long fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : to_long(key, it->second);
}

std::string ExperimentConfig::param_str(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::vector<double> ExperimentConfig::param_list(const std::string& key, const std::vector<double>& fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<double> out;
  for (const auto& v : split_list(it->second)) out.push_back(to_double(key, v));
  return out;
}

// ---- records ----

std::string CsvTable::render(const std::string& config_hash) const {
  std::string s = "# config_hash=" + config_hash + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      // descriptors contain spaces but never commas or quotes
      s += row[i];
    }
    s += "\n";
  }
  return s;
}

std::vector<std::string> recipe_names() {
  std::vector<std::string> out;
  for (const Recipe& r : registry()) out.emplace_back(r.name);
  return out;
}

bool is_recipe(const std::string& name) {
  for (const Recipe& r : registry())
    if (name == r.name) return true;
  return false;
}

ExperimentConfig default_config(const std::string& recipe) { return find_recipe(recipe).defaults(); }

RunRecord execute_recipe(const ExperimentConfig& config) {
  config.validate();
  const Recipe& r = find_recipe(config.recipe);
  RunRecord rec;
  rec.recipe = config.recipe;
  rec.config_hash = config.hash_hex();
  auto start = std::chrono::steady_clock::now();
  RunContext ctx{config, rec};
  r.run(ctx);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

void write_record(const RunRecord& record, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  auto put = [](const std::filesystem::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << body;
  };
  for (const CsvTable& t : record.tables) put(out / (record.recipe + "." + t.name + ".csv"), t.render(record.config_hash));
  nlohmann::json j = {{"recipe", record.recipe},
                      {"config_hash", record.config_hash},
                      {"version", record.version},
                      {"guard_failures", record.guard_failures},
                      {"wall_seconds", record.wall_seconds},
                      {"summary", record.summary}};
  put(out / (record.recipe + ".json"), j.dump(2) + "\n");
}

RunRecord run_recipe(const ExperimentConfig& config) {
  RunRecord rec = execute_recipe(config);
  const std::filesystem::path out = config.out;
  write_record(rec, out);
  for (const CsvTable& t : rec.tables) rec.files.push_back(out / (rec.recipe + "." + t.name + ".csv"));
  rec.files.push_back(out / (rec.recipe + ".json"));
  std::ofstream(out / (rec.recipe + ".ini"), std::ios::binary) << config.serialize();
  rec.files.push_back(out / (rec.recipe + ".ini"));
  return rec;
}

nlohmann::json aggregate_report(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("report: no directory " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json" && e.path().filename() != "report.json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  nlohmann::json report = {{"version", kLibraryVersion}, {"runs", nlohmann::json::object()}};
  for (const auto& p : files) {
    std::ifstream in(p);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      continue;
    }
    if (!j.contains("recipe") || !j.contains("summary")) continue;
    report["runs"][j["recipe"].get<std::string>()] = j;
  }
  return report;
}

}  // namespace fpplab
