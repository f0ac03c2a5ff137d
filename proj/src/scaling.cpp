#include "fpplab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "fpplab/seeds.hpp"

namespace fpplab {

namespace {

StepFunction restrict_to(const StepFunction& f, double t) {
  StepFunction g;
  g.end = t;
  for (std::size_t i = 0; i < f.breaks.size(); ++i) {
    if (f.breaks[i] >= t) break;
    g.breaks.push_back(f.breaks[i]);
    g.values.push_back(f.values[i]);
  }
  return g;
}

}  // namespace

RegularityResult regularity_bound_check(const StepFunction& phi, const std::function<double(double)>& psi, double c,
                                        double s0, double a, int d, double t, int grid) {
  if (!(t > 0.0) || !(a > 0.0) || !(c > 0.0) || !(s0 > 0.0) || d < 1)
    throw std::invalid_argument("regularity_bound_check: need t, a, C, s0 > 0 and d >= 1");
  if (phi.end < t) throw std::invalid_argument("regularity_bound_check: phi is not sampled up to t");
  RegularityResult res;
  res.bound = 2.0 * s0 / t + std::pow(2.0, d + 1) * c / a;

  for (double v : phi.values) {
    if (!(v >= 0.0)) {
      res.hypothesis_ok = false;
      res.violation = "phi negative";
    }
  }

  // probe points: breakpoints, a uniform grid and the dyadic points t / 2^i
  std::vector<double> probes;
  for (double b : phi.breaks)
    if (b > s0 && b <= t) probes.push_back(b);
  for (int i = 1; i <= grid; ++i) probes.push_back(t * i / grid);
  for (double ti = t; ti > s0; ti /= 2) probes.push_back(ti);
  std::sort(probes.begin(), probes.end());

  double prev_psi = -1.0;
  for (double tau : probes) {
    double p = psi(tau), p2 = psi(2 * tau);
    if (res.hypothesis_ok && !(p > 0.0 && p2 <= 2.0 * p * (1 + 1e-12) && p >= prev_psi)) {
      res.hypothesis_ok = false;
      res.violation = "psi not positive, nondecreasing with psi(2t) <= 2 psi(t)";
    }
    prev_psi = p;
    if (res.hypothesis_ok && tau > s0 && phi.integral(tau) > c * std::pow(tau, d) * p * (1 + 1e-12)) {
      res.hypothesis_ok = false;
      res.violation = "int_0^t phi > C t^d psi(t)";
    }
  }

  res.measured = threshold_measure(restrict_to(phi, t), a, psi, d) / t;
  res.pass = res.hypothesis_ok && res.measured <= res.bound + 1e-9;
  return res;
}

RegularitySearch regularity_randomized_search(int trials, std::uint64_t seed) {
  RegularitySearch out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    std::mt19937_64 eng(seed_stream(seed, static_cast<std::uint64_t>(k)));
    auto u = [&] { return open_uniform(eng); };
    const int d = 1 + static_cast<int>(u() * 3);
    const double t = 1.0 + 99.0 * u();
    const double s0 = t * 0.5 * u();
    const double a = 0.5 + 50.0 * u();

    std::function<double(double)> psi;
    switch (static_cast<int>(u() * 3)) {
      case 0:
        psi = [](double) { return 1.0; };
        break;
      case 1: {
        double g = u();
        psi = [g](double s) { return std::pow(s, g); };
        break;
      }
      default:
        psi = [](double s) { return std::log(std::numbers::e + s); };
    }

    // phi: pieces with random heights, half of the trials concentrated near t
    StepFunction phi;
    phi.end = t;
    int pieces = 1 + static_cast<int>(u() * 40);
    std::vector<double> br{0.0};
    for (int i = 1; i < pieces; ++i) br.push_back(t * u());
    std::sort(br.begin(), br.end());
    bool late = u() < 0.5;
    for (double b : br) {
      double h = std::pow(u(), 3.0) * std::pow(t, d - 1) * 20.0;
      if (late) h *= std::pow(b / t, 8.0) * 50.0;
      if (u() < 0.2) h = 0.0;
      phi.breaks.push_back(b);
      phi.values.push_back(h);
    }

    double sup = 0.0;
    const int grid = 2048;
    std::vector<double> probes(phi.breaks.begin(), phi.breaks.end());
    for (int i = 1; i <= grid; ++i) probes.push_back(t * i / grid);
    for (double ti = t; ti > s0; ti /= 2) probes.push_back(ti);
    for (double tau : probes)
      if (tau > s0) sup = std::max(sup, phi.integral(tau) / (std::pow(tau, d) * psi(tau)));
    double c = std::max(sup * 1.01, 1e-9);

    RegularityResult r = regularity_bound_check(phi, psi, c, s0, a, d, t, grid);
    ++out.trials;
    if (!r.hypothesis_ok) {
      ++out.inadmissible;
      continue;
    }
    out.worst_margin = std::max(out.worst_margin, r.measured - r.bound);
    if (!r.pass) ++out.violations;
  }
  return out;
}

std::vector<TruncationRow> truncation_lemma_check(const WeightModel& model, int d, const std::vector<long>& n_grid,
                                                  double c, int replications, std::uint64_t seed) {
  if (replications < 1) throw std::invalid_argument("truncation_lemma_check: replications must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("truncation_lemma_check: c must be positive");
  YStatistic ys(model, d);
  std::vector<TruncationRow> rows;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const long n = n_grid[g];
    if (n < 1) throw std::invalid_argument("truncation_lemma_check: n must be >= 1");
    TruncationRow row{};
    row.n = n;
    row.cap = c * std::pow(static_cast<double>(n), 1.0 / d);
    row.mean_exact = ys.expected_truncated(row.cap);
    row.replications = replications;
    double sum_all = 0.0, sum_sq = 0.0;
    long fails = 0;
    for (int r = 0; r < replications; ++r) {
      std::mt19937_64 eng(seed_stream(seed_stream(seed, g), static_cast<std::uint64_t>(r)));
      double s = 0.0;
      for (long i = 0; i < n; ++i) {
        double y = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 2 * d; ++k) y = std::min(y, model.quantile(open_uniform(eng)));
        double z = std::min(y, row.cap);
        s += z;
        sum_sq += z * z;
      }
      sum_all += s;
      if (s > 2.0 * static_cast<double>(n) * row.mean_exact) ++fails;
    }
    const double total = static_cast<double>(n) * replications;
    row.mean_mc = sum_all / total;
    double var = std::max(0.0, sum_sq / total - row.mean_mc * row.mean_mc);
    row.mean_mc_stderr = std::sqrt(var / total);
    row.failure_frequency = static_cast<double>(fails) / replications;
    rows.push_back(row);
  }
  return rows;
}

BernsteinBound bernstein_bound(double b, double second_moment_sum, double t) {
  if (!(b > 0.0) || !(t >= 0.0) || !(second_moment_sum >= 0.0))
    throw std::invalid_argument("bernstein_bound: need b > 0, t >= 0, sum E X^2 >= 0");
  double denom = 2.0 * (b * t / 3.0 + second_moment_sum);
  double raw = denom > 0.0 ? 2.0 * std::exp(-t * t / denom) : (t > 0.0 ? 0.0 : 2.0);
  return {raw, std::min(1.0, raw)};
}

BernsteinTail bernstein_bernoulli_check(double p, long n, double t, int replications, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0) || n < 1 || replications < 1)
    throw std::invalid_argument("bernstein_bernoulli_check: need 0 < p < 1, n >= 1, replications >= 1");
  const double mean = p * static_cast<double>(n);
  int hits = 0;
  for (int r = 0; r < replications; ++r) {
    std::mt19937_64 eng(seed_stream(seed, static_cast<std::uint64_t>(r)));
    long s = 0;
    for (long i = 0; i < n; ++i) s += open_uniform(eng) < p;
    if (std::abs(static_cast<double>(s) - mean) >= t) ++hits;
  }
  double b = std::max(p, 1.0 - p);
  return {static_cast<double>(hits) / replications,
          bernstein_bound(b, static_cast<double>(n) * p * (1.0 - p), t).clamped, replications};
}

ExponentFit fit_exponent(std::vector<std::pair<double, double>> points) {
  if (points.size() < 4) throw std::invalid_argument("fit_exponent: need at least 4 points");
  for (const auto& [t, v] : points)
    if (!(t > 0.0) || !(v > 0.0)) throw std::invalid_argument("fit_exponent: t and value must be positive");
  ExponentFit fit;
  fit.points = std::move(points);
  const double n = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [t, v] : fit.points) {
    mx += std::log(t);
    my += std::log(v);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [t, v] : fit.points) {
    double dx = std::log(t) - mx, dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: all t equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.stderr_slope = std::sqrt(sse / (n - 2.0) / sxx);
  return fit;
}

bool SectorDecomposition::in_annulus(const Vertex& y) const {
  double r = std::hypot(static_cast<double>(y[0]), static_cast<double>(y[1]));
  return r > (t - width) * scale && r <= (t + width) * scale;
}

std::vector<Vertex> ray_cells(const std::array<double, 2>& v, double r_lo, double r_hi) {
  // grid traversal (Amanatides-Woo) along the segment
  std::vector<Vertex> out;
  double px = v[0] * r_lo, py = v[1] * r_lo;
  int cx = static_cast<int>(std::floor(px)), cy = static_cast<int>(std::floor(py));
  const double inf = std::numeric_limits<double>::infinity();
  int sx = v[0] > 0 ? 1 : -1, sy = v[1] > 0 ? 1 : -1;
  double tmx = v[0] > 0 ? (cx + 1 - px) / v[0] : v[0] < 0 ? (px - cx) / -v[0] : inf;
  double tmy = v[1] > 0 ? (cy + 1 - py) / v[1] : v[1] < 0 ? (py - cy) / -v[1] : inf;
  double dx = v[0] != 0 ? 1.0 / std::abs(v[0]) : inf;
  double dy = v[1] != 0 ? 1.0 / std::abs(v[1]) : inf;
  const double len = r_hi - r_lo;
  while (true) {
    out.push_back(Vertex{cx, cy});
    if (tmx < tmy) {
      if (tmx > len) break;
      cx += sx;
      tmx += dx;
    } else {
      if (tmy > len) break;
      cy += sy;
      tmy += dy;
    }
  }
  return out;
}

SectorDecomposition build_sectors(double t, double scale, double c) {
  if (!(t >= 8.0)) throw std::invalid_argument("build_sectors: t must be >= 8");
  if (!(scale > 0.0) || !(c > 0.0)) throw std::invalid_argument("build_sectors: scale and c must be positive");
  SectorDecomposition sec;
  sec.t = t;
  sec.s = 2.0 * t;
  sec.scale = scale;
  sec.width = c * std::sqrt(t) * std::log(t);
  if (sec.width >= t) throw std::invalid_argument("build_sectors: annulus width exceeds t");

  const auto m = static_cast<std::size_t>(std::ceil(4.0 * std::numbers::pi * sec.s * scale));
  const double r_in = (t - sec.width) * scale, r_out = (t + sec.width) * scale;
  const int reach = static_cast<int>(std::ceil(r_out)) + 2;
  const int side = 2 * reach + 1;
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), 0);
  auto slot = [&](const Vertex& y) {
    return static_cast<std::size_t>(y[0] + reach) * static_cast<std::size_t>(side) + static_cast<std::size_t>(y[1] + reach);
  };

  for (std::size_t i = 0; i < m; ++i) {
    double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
    std::array<double, 2> v{std::cos(th), std::sin(th)};
    sec.rays.push_back(v);
    std::vector<Vertex> cells;
    for (const Vertex& y : ray_cells(v, std::max(0.0, r_in - 2.0), r_out + 2.0)) {
      if (!sec.in_annulus(y)) continue;
      cells.push_back(y);
      hit[slot(y)] = 1;
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    sec.cells.push_back(std::move(cells));
  }
  for (int x = -reach; x <= reach; ++x)
    for (int y = -reach; y <= reach; ++y) {
      Vertex p{x, y};
      if (!sec.in_annulus(p)) continue;
      ++sec.annulus_points;
      if (!hit[slot(p)]) ++sec.uncovered;
    }
  return sec;
}

SectorProfile sector_boundary_profile(const PassageField& pf, const SectorDecomposition& sectors, double t) {
  const LatticeBox& box = pf.box();
  if (box.dim() != 2) throw std::invalid_argument("sector_boundary_profile: d must be 2");
  std::unordered_map<std::size_t, std::vector<int>> owners;
  for (std::size_t i = 0; i < sectors.cells.size(); ++i)
    for (const Vertex& y : sectors.cells[i])
      if (box.contains(y)) owners[box.index(y)].push_back(static_cast<int>(i));

  SectorProfile prof;
  prof.counts.assign(sectors.cells.size(), 0);
  std::vector<int> seen;
  box.for_each_edge([&](std::size_t i, int a) {
    std::size_t j = i + box.stride(a);
    if (pf.in_ball(i, t) == pf.in_ball(j, t)) return;
    ++prof.boundary;
    seen.clear();
    for (std::size_t end : {i, j}) {
      auto it = owners.find(end);
      if (it != owners.end()) seen.insert(seen.end(), it->second.begin(), it->second.end());
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    if (seen.empty()) ++prof.uncovered_edges;
    for (int s : seen) ++prof.counts[static_cast<std::size_t>(s)];
  });
  for (long c : prof.counts) {
    prof.total += c;
    prof.max_count = std::max(prof.max_count, c);
  }
  return prof;
}

ExactDifference exact_difference(double a, double b) {
  // TwoSum of a and -b: hi + lo == a - b exactly
  double nb = -b;
  double hi = a + nb;
  double bb = hi - a;
  double lo = (a - (hi - bb)) + (nb - bb);
  return {hi, lo};
}

std::optional<ExactDifference> busemann_increment(const PassageField& pf, std::span<const double> x, double k,
                                                  double l) {
  if (!(k >= l) || !(l >= 0.0)) throw std::invalid_argument("busemann_increment: need k >= l >= 0");
  const int d = pf.dim();
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("busemann_increment: direction has wrong dimension");
  std::array<double, kMaxDim> kx{}, lx{};
  for (int a = 0; a < d; ++a) {
    kx[static_cast<std::size_t>(a)] = k * x[static_cast<std::size_t>(a)];
    lx[static_cast<std::size_t>(a)] = l * x[static_cast<std::size_t>(a)];
  }
  auto tk = passage_at_real_point(pf, std::span<const double>(kx.data(), static_cast<std::size_t>(d)));
  auto tl = passage_at_real_point(pf, std::span<const double>(lx.data(), static_cast<std::size_t>(d)));
  if (!tk || !tl) return std::nullopt;
  return exact_difference(*tk, *tl);
}

}  // namespace fpplab
