#include "fpplab/contours.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "fpplab/seeds.hpp"

namespace fpplab {

namespace {

// Animals are sorted arrays of packed vertices; each coordinate is stored
// offset by kBias in 5 bits, which covers |c| <= 15 for n <= 8.
constexpr int kBias = 16;
using Packed = std::uint16_t;
using Animal = std::vector<Packed>;

Packed pack(const std::array<int, kMaxDim>& c, int d) {
  Packed p = 0;
  for (int a = 0; a < d; ++a) p = static_cast<Packed>(p << 5 | (c[static_cast<std::size_t>(a)] + kBias));
  return p;
}

std::array<int, kMaxDim> unpack(Packed p, int d) {
  std::array<int, kMaxDim> c{};
  for (int a = d - 1; a >= 0; --a) {
    c[static_cast<std::size_t>(a)] = (p & 31) - kBias;
    p = static_cast<Packed>(p >> 5);
  }
  return c;
}

struct AnimalHash {
  std::size_t operator()(const Animal& a) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (Packed p : a) h = splitmix64(h ^ p);
    return static_cast<std::size_t>(h);
  }
};

// Packed order equals lexicographic order, so the first element is the
// lexicographically least vertex.
Animal canonical(std::vector<std::array<int, kMaxDim>> cells, int d) {
  auto least = *std::min_element(cells.begin(), cells.end(), [d](const auto& x, const auto& y) {
    return std::lexicographical_compare(x.begin(), x.begin() + d, y.begin(), y.begin() + d);
  });
  Animal out;
  out.reserve(cells.size());
  for (auto& c : cells) {
    for (int a = 0; a < d; ++a) c[static_cast<std::size_t>(a)] -= least[static_cast<std::size_t>(a)];
    out.push_back(pack(c, d));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::array<int, kMaxDim>> generator_offsets(int d, int symmetry) {
  std::vector<std::array<int, kMaxDim>> out;
  for (const Vertex& v : star_neighbors(Vertex::origin(d))) {
    Vertex g = apply_symmetry(symmetry, v);
    out.push_back(g.coords);
  }
  return out;
}

std::vector<Animal> fixed_animals(int n, int d, int symmetry) {
  if (n < 1) throw std::invalid_argument("animal enumeration: n must be positive");
  if (d != 2 && d != 3) throw std::invalid_argument("animal enumeration: d must be 2 or 3");
  if (n > animal_budget(d))
    throw std::invalid_argument("animal enumeration: n exceeds the exhaustive budget for this dimension");
  const auto gens = generator_offsets(d, symmetry);
  std::vector<Animal> level{Animal{pack({}, d)}};
  for (int k = 1; k < n; ++k) {
    std::unordered_set<Animal, AnimalHash> next;
    for (const Animal& a : level) {
      std::vector<std::array<int, kMaxDim>> cells;
      for (Packed p : a) cells.push_back(unpack(p, d));
      for (const auto& c : cells) {
        for (const auto& g : gens) {
          std::array<int, kMaxDim> nc{};
          for (int i = 0; i < d; ++i) nc[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)] + g[static_cast<std::size_t>(i)];
          Packed np = pack(nc, d);
          if (std::binary_search(a.begin(), a.end(), np)) continue;
          auto grown = cells;
          grown.push_back(nc);
          next.insert(canonical(std::move(grown), d));
        }
      }
    }
    level.assign(next.begin(), next.end());
  }
  return level;
}

// Does the 2D cell set (local coordinates, bbox [0,w) x [0,h)) enclose the
// local point (ox, oy)? Flood from the padded border.
bool encloses_local(const std::vector<std::array<int, kMaxDim>>& cells, int w, int h, int ox, int oy) {
  const int W = w + 2, H = h + 2;
  std::vector<std::uint8_t> m(static_cast<std::size_t>(W * H), 0);
  auto at = [&](int x, int y) -> std::uint8_t& { return m[static_cast<std::size_t>((y + 1) * W + (x + 1))]; };
  for (const auto& c : cells) at(c[0], c[1]) = 1;
  std::vector<std::pair<int, int>> stack;
  for (int x = -1; x <= w; ++x)
    for (int y = -1; y <= h; ++y)
      if (x == -1 || y == -1 || x == w || y == h) {
        at(x, y) = 2;
        stack.emplace_back(x, y);
      }
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (nx < -1 || ny < -1 || nx > w || ny > h) continue;
      if (at(nx, ny) == 0) {
        if (nx == ox && ny == oy) return false;
        at(nx, ny) = 2;
        stack.emplace_back(nx, ny);
      }
    }
  }
  return at(ox, oy) == 0;
}

}  // namespace

Contour::Contour(std::vector<Vertex> v) : vertices(std::move(v)) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
}

int symmetry_count(int d) {
  int f = 1;
  for (int i = 2; i <= d; ++i) f *= i;
  return f << d;
}

Vertex apply_symmetry(int symmetry, const Vertex& v) {
  const int d = v.dim;
  if (symmetry < 0 || symmetry >= symmetry_count(d))
    throw std::invalid_argument("apply_symmetry: index out of range");
  int mask = symmetry & ((1 << d) - 1);
  int perm_index = symmetry >> d;
  std::array<int, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + d, 0);
  for (int k = 0; k < perm_index; ++k) std::next_permutation(perm.begin(), perm.begin() + d);
  Vertex out = Vertex::origin(d);
  for (int a = 0; a < d; ++a) {
    int x = v[perm[static_cast<std::size_t>(a)]];
    out[a] = (mask >> a & 1) ? -x : x;
  }
  return out;
}

int animal_budget(int d) { return d == 2 ? 8 : d == 3 ? 5 : 0; }

std::uint64_t count_fixed_star_animals(int n, int d, int symmetry) {
  return fixed_animals(n, d, symmetry).size();
}

std::uint64_t enumerate_star_animals(int n, int d, int symmetry) {
  return static_cast<std::uint64_t>(n) * count_fixed_star_animals(n, d, symmetry);
}

std::uint64_t count_enclosing_contours(int n) {
  std::uint64_t total = 0;
  for (const Animal& a : fixed_animals(n, 2, 0)) {
    std::vector<std::array<int, kMaxDim>> cells;
    for (Packed p : a) cells.push_back(unpack(p, 2));
    int xmin = cells[0][0], xmax = xmin, ymin = cells[0][1], ymax = ymin;
    for (const auto& c : cells) {
      xmin = std::min(xmin, c[0]);
      xmax = std::max(xmax, c[0]);
      ymin = std::min(ymin, c[1]);
      ymax = std::max(ymax, c[1]);
    }
    for (auto& c : cells) {
      c[0] -= xmin;
      c[1] -= ymin;
    }
    int w = xmax - xmin + 1, h = ymax - ymin + 1;
    if (w < 3 || h < 3) continue;
    // origin strictly inside the bounding box, translated into local coords
    for (int ox = 1; ox < w - 1; ++ox)
      for (int oy = 1; oy < h - 1; ++oy)
        if (encloses_local(cells, w, h, ox, oy)) ++total;
  }
  return total;
}

double contour_growth_base(int d) {
  double k = std::pow(3.0, d);
  return std::exp(k * std::log(k) - (k - 1.0) * std::log(k - 1.0));
}

double contour_count_bound(int n, int d) { return n * std::pow(contour_growth_base(d), n); }

std::vector<Vertex> alpha_flagged(const Contour& w, const EdgeWeightFn& weight, double alpha) {
  std::vector<Vertex> out;
  for (const Vertex& v : w.vertices) {
    for (const Vertex& n : neighbors(v)) {
      if (weight(canonical_edge(v, n)) > alpha) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

bool is_alpha_bad(const Contour& w, const EdgeWeightFn& weight, double alpha) {
  if (w.vertices.empty()) throw std::invalid_argument("is_alpha_bad: empty contour");
  return 2 * alpha_flagged(w, weight, alpha).size() >= w.size();
}

bool verify_timar(const PassageField& pf, double s) {
  auto ext = exterior_boundary_at(pf, s);
  return is_star_connected(ext.vertex_part);
}

BadContourTable bad_contour_rate(const BadContourParams& p) {
  if (p.bin_edges.size() < 2) throw std::invalid_argument("bad_contour_rate: need at least two bin edges");
  BadContourTable table;
  for (std::size_t b = 0; b + 1 < p.bin_edges.size(); ++b)
    table.bins.push_back({p.bin_edges[b], p.bin_edges[b + 1] - 1});
  LatticeBox box(p.dim, p.box_radius);
  for (int rep = 0; rep < p.replications; ++rep) {
    EdgeWeightField field(p.model, seed_stream(p.seed, static_cast<std::uint64_t>(rep)));
    PassageField pf = compute_passage(field, box, p.horizon);
    EdgeWeightFn weight = [&field](const Edge& e) { return field.weight(e); };
    LatticeBox guard(p.dim, p.box_radius);
    for (int k = 1; k <= p.probes_per_run; ++k) {
      double s = p.horizon * k / p.probes_per_run;
      auto top = ball_topology(pf, s);
      Contour w(top.exterior.vertex_part);
      ++table.probes;
      if (!is_star_connected(w.vertices) || !encloses_origin(w.vertices, guard)) {
        ++table.non_enclosing;
        continue;
      }
      for (auto& bin : table.bins) {
        if (w.size() < bin.size_lo || w.size() > bin.size_hi) continue;
        ++bin.probes;
        bin.bad += is_alpha_bad(w, weight, p.alpha);
      }
    }
  }
  std::vector<double> xs, ys;
  for (const auto& bin : table.bins) {
    if (bin.bad == 0) continue;
    xs.push_back(0.5 * static_cast<double>(bin.size_lo + bin.size_hi));
    ys.push_back(std::log(bin.frequency()));
  }
  table.fitted_bins = xs.size();
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    table.slope = sxy / sxx;
    if (xs.size() > 2) {
      double sse = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (my + table.slope * (xs[i] - mx));
        sse += r * r;
      }
      table.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    }
  }
  return table;
}

}  // namespace fpplab
