#include "fpplab/growth.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace fpplab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr char kMagic[8] = {'F', 'P', 'P', 'L', 'A', 'B', '0', '1'};

// Dijkstra over the box. weight_fn(base_index, axis) returns the weight of
// the edge from the vertex at base_index in direction +axis.
template <class WeightFn>
std::vector<double> dijkstra(const LatticeBox& box, double horizon, std::size_t source, WeightFn&& weight_fn) {
  const std::size_t n = box.vertex_count();
  const int d = box.dim();
  const int r = box.radius();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> settled(n, 0);

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);

  std::array<int, kMaxDim> c{};
  while (!pq.empty()) {
    auto [t, i] = pq.top();
    if (t > horizon) break;
    pq.pop();
    if (settled[i]) continue;
    settled[i] = 1;
    for (int a = 0; a < d; ++a) c[static_cast<std::size_t>(a)] = box.coord(i, a);
    for (int a = 0; a < d; ++a) {
      const std::size_t st = box.stride(a);
      const int ca = c[static_cast<std::size_t>(a)];
      if (ca < r) {
        std::size_t j = i + st;
        if (!settled[j]) {
          double nt = t + weight_fn(i, a);
          if (nt < dist[j]) {
            dist[j] = nt;
            pq.emplace(nt, j);
          }
        }
      }
      if (ca > -r) {
        std::size_t j = i - st;
        if (!settled[j]) {
          double nt = t + weight_fn(j, a);
          if (nt < dist[j]) {
            dist[j] = nt;
            pq.emplace(nt, j);
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!settled[i]) dist[i] = kNaN;
  return dist;
}

void check_run(const LatticeBox& box, double horizon, const Vertex& source) {
  if (!(horizon >= 0.0))
    throw std::invalid_argument("compute_passage: horizon must be nonnegative");
  if (box.radius() == 0 && horizon > 0.0)
    throw std::invalid_argument("compute_passage: degenerate zero-radius box with positive horizon");
  if (!box.contains(source))
    throw std::invalid_argument("compute_passage: source outside box");
}

}  // namespace

WeightTable::WeightTable(LatticeBox box, double fill)
    : box_(box), w_(box.vertex_count() * static_cast<std::size_t>(box.dim()), fill) {}

WeightTable WeightTable::from_field(const EdgeWeightField& field, const LatticeBox& box) {
  WeightTable t(box, 0.0);
  box.for_each_edge([&](std::size_t i, int a) { t.w_[i * static_cast<std::size_t>(box.dim()) + static_cast<std::size_t>(a)] = field.weight(Edge{box.vertex_at(i), a}); });
  return t;
}

std::size_t WeightTable::slot(const Edge& e) const {
  if (!box_.contains(e.base) || !box_.contains(e.tip()))
    throw std::out_of_range("WeightTable: edge leaves the box");
  return box_.index(e.base) * static_cast<std::size_t>(box_.dim()) + static_cast<std::size_t>(e.axis);
}

double WeightTable::weight(const Edge& e) const { return w_[slot(e)]; }

void WeightTable::set(const Edge& e, double w) {
  if (!(w >= 0.0))
    throw std::invalid_argument("WeightTable: weights must be nonnegative");
  w_[slot(e)] = w;
}

void WeightTable::set_incident(const Vertex& v, double w) {
  for (const Vertex& n : neighbors(v))
    set(canonical_edge(v, n), w);
}

void WeightTable::add_to_all(double delta) {
  for (double& w : w_) w += delta;
}

PassageField::PassageField(LatticeBox box, double horizon, std::vector<double> times, Vertex source)
    : box_(box), horizon_(horizon), source_(source), times_(std::move(times)) {
  if (times_.size() != box_.vertex_count())
    throw std::invalid_argument("PassageField: table size does not match box");
  if (source_.dim != box_.dim()) source_ = Vertex::origin(box_.dim());
}

std::optional<double> PassageField::time(const Vertex& v) const {
  double t = times_[box_.index(v)];
  if (std::isnan(t)) return std::nullopt;
  return t;
}

std::size_t PassageField::reached_count() const {
  return static_cast<std::size_t>(std::count_if(times_.begin(), times_.end(), [](double t) { return !std::isnan(t); }));
}

std::size_t PassageField::ball_size(double s) const {
  return static_cast<std::size_t>(std::count_if(times_.begin(), times_.end(), [s](double t) { return t <= s; }));
}

PassageField compute_passage(const EdgeWeightField& field, const LatticeBox& box, double horizon) {
  return compute_passage(field, box, horizon, Vertex::origin(box.dim()));
}

PassageField compute_passage(const EdgeWeightField& field, const LatticeBox& box, double horizon,
                             const Vertex& source) {
  check_run(box, horizon, source);
  if (!field.model().is_subcritical(box.dim()))
    throw std::invalid_argument("compute_passage: P(t_e = 0) >= p_c; supercritical zero weights are not supported");
  auto times = dijkstra(box, horizon, box.index(source), [&](std::size_t i, int a) {
    return field.weight(Edge{box.vertex_at(i), a});
  });
  PassageField pf(box, horizon, std::move(times), source);
  pf.seed = field.seed();
  pf.model_hash = field.model().hash();
  return pf;
}

PassageField compute_passage(const WeightTable& table, double horizon) {
  return compute_passage(table, horizon, Vertex::origin(table.box().dim()));
}

PassageField compute_passage(const WeightTable& table, double horizon, const Vertex& source) {
  const LatticeBox& box = table.box();
  check_run(box, horizon, source);
  auto times = dijkstra(box, horizon, box.index(source), [&](std::size_t i, int a) { return table.weight_at(i, a); });
  return PassageField(box, horizon, std::move(times), source);
}

PassageField reference_passage(const EdgeWeightField& field, const LatticeBox& box, double horizon) {
  const Vertex source = Vertex::origin(box.dim());
  check_run(box, horizon, source);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(box.vertex_count(), inf);
  dist[box.index(source)] = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  std::vector<double> w;
  box.for_each_edge([&](std::size_t i, int a) {
    ends.emplace_back(i, i + box.stride(a));
    w.push_back(field.weight(Edge{box.vertex_at(i), a}));
  });
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < ends.size(); ++k) {
      auto [i, j] = ends[k];
      if (dist[i] + w[k] < dist[j]) {
        dist[j] = dist[i] + w[k];
        changed = true;
      }
      if (dist[j] + w[k] < dist[i]) {
        dist[i] = dist[j] + w[k];
        changed = true;
      }
    }
  }
  for (double& t : dist)
    if (!(t <= horizon)) t = std::numeric_limits<double>::quiet_NaN();
  PassageField pf(box, horizon, std::move(dist), source);
  pf.seed = field.seed();
  pf.model_hash = field.model().hash();
  return pf;
}

std::vector<AdoptionEvent> adoption_schedule(const PassageField& pf) {
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(pf.reached_count());
  for (std::size_t i = 0; i < pf.box().vertex_count(); ++i)
    if (pf.reached(i)) order.emplace_back(pf.time_at(i), i);
  // index order is lexicographic vertex order
  std::sort(order.begin(), order.end());
  std::vector<AdoptionEvent> events;
  events.reserve(order.size());
  for (auto [t, i] : order) events.push_back({t, pf.box().vertex_at(i)});
  return events;
}

bool check_containment(const PassageField& pf, double margin) {
  double scaled = margin * pf.horizon();
  if (!(scaled >= 0.0) || std::floor(scaled) > pf.box().radius())
    throw std::invalid_argument("check_containment: box smaller than S(M t)");
  const long k = static_cast<long>(std::floor(scaled));
  const LatticeBox& box = pf.box();
  for (std::size_t i = 0; i < box.vertex_count(); ++i) {
    if (!pf.reached(i)) continue;
    for (int a = 0; a < box.dim(); ++a)
      if (std::abs(box.coord(i, a)) > k) return false;
  }
  return true;
}

std::optional<double> passage_at_real_point(const PassageField& pf, std::span<const double> p) {
  if (static_cast<int>(p.size()) != pf.dim())
    throw std::invalid_argument("passage_at_real_point: dimension mismatch");
  Vertex v = cell_of(p);
  if (!pf.box().contains(v))
    throw std::out_of_range("passage_at_real_point: cell " + v.to_string() + " outside box");
  return pf.time(v);
}

namespace {

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("read_passage_field: truncated input");
  return v;
}

}  // namespace

// Layout (little-endian host order): magic[8], int32 d, int32 r,
// f64 horizon, u64 seed, u64 model hash, then (2r+1)^d f64 row-major with
// NaN marking unreached vertices.
void write_passage_field(std::ostream& out, const PassageField& pf) {
  out.write(kMagic, sizeof kMagic);
  put<std::int32_t>(out, pf.dim());
  put<std::int32_t>(out, pf.box().radius());
  put<double>(out, pf.horizon());
  put<std::uint64_t>(out, pf.seed);
  put<std::uint64_t>(out, pf.model_hash);
  auto t = pf.times();
  out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
}

PassageField read_passage_field(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("read_passage_field: bad magic");
  auto d = get<std::int32_t>(in);
  auto r = get<std::int32_t>(in);
  double horizon = get<double>(in);
  auto seed = get<std::uint64_t>(in);
  auto hash = get<std::uint64_t>(in);
  LatticeBox box(d, r);
  std::vector<double> times(box.vertex_count());
  in.read(reinterpret_cast<char*>(times.data()), static_cast<std::streamsize>(times.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_passage_field: truncated payload");
  PassageField pf(box, horizon, std::move(times));
  pf.seed = seed;
  pf.model_hash = hash;
  return pf;
}

}  // namespace fpplab
