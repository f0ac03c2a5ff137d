#include "fpplab/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace fpplab {

Vertex::Vertex(std::initializer_list<int> c) : dim(static_cast<int>(c.size())) {
  if (c.size() > kMaxDim)
    throw std::invalid_argument("Vertex: dimension exceeds kMaxDim");
  std::size_t i = 0;
  for (int x : c)
    coords[i++] = x;
}

long Vertex::l1_norm() const {
  long s = 0;
  for (int i = 0; i < dim; ++i)
    s += std::labs(coords[static_cast<std::size_t>(i)]);
  return s;
}

long Vertex::linf_norm() const {
  long s = 0;
  for (int i = 0; i < dim; ++i)
    s = std::max(s, std::labs(coords[static_cast<std::size_t>(i)]));
  return s;
}

std::string Vertex::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dim; ++i) {
    if (i) s += ",";
    s += std::to_string((*this)[i]);
  }
  return s + ")";
}

void check_dimension(int d) {
  if (d < 2 || d > kMaxDim)
    throw std::invalid_argument("dimension must be in [2, " + std::to_string(kMaxDim) + "]");
}

Edge canonical_edge(const Vertex& x, const Vertex& y) {
  if (x.dim != y.dim)
    throw std::invalid_argument("canonical_edge: dimension mismatch");
  int axis = -1;
  for (int i = 0; i < x.dim; ++i) {
    int diff = y[i] - x[i];
    if (diff == 0) continue;
    if (axis >= 0 || std::abs(diff) != 1)
      throw std::invalid_argument("canonical_edge: vertices are not adjacent");
    axis = i;
  }
  if (axis < 0)
    throw std::invalid_argument("canonical_edge: loop edge");
  return x < y ? Edge{x, axis} : Edge{y, axis};
}

std::vector<Vertex> neighbors(const Vertex& x) {
  std::vector<Vertex> out;
  out.reserve(static_cast<std::size_t>(2 * x.dim));
  for (int a = 0; a < x.dim; ++a) {
    out.push_back(x.shifted(a, 1));
    out.push_back(x.shifted(a, -1));
  }
  return out;
}

std::vector<Vertex> star_neighbors(const Vertex& x) {
  std::vector<Vertex> out;
  int total = 1;
  for (int i = 0; i < x.dim; ++i) total *= 3;
  out.reserve(static_cast<std::size_t>(total - 1));
  for (int code = 0; code < total; ++code) {
    Vertex y = x;
    int c = code;
    bool zero = true;
    for (int a = 0; a < x.dim; ++a) {
      int step = c % 3 - 1;
      c /= 3;
      y[a] += step;
      zero = zero && step == 0;
    }
    if (!zero) out.push_back(y);
  }
  return out;
}

Vertex cell_of(std::span<const double> p) {
  Vertex v = Vertex::origin(static_cast<int>(p.size()));
  if (p.size() > kMaxDim)
    throw std::invalid_argument("cell_of: dimension exceeds kMaxDim");
  for (std::size_t i = 0; i < p.size(); ++i)
    v.coords[i] = static_cast<int>(std::floor(p[i]));
  return v;
}

LatticeBox::LatticeBox(int dim, int radius) : dim_(dim), radius_(radius) {
  check_dimension(dim);
  if (radius < 0)
    throw std::invalid_argument("LatticeBox: negative radius");
  std::size_t s = static_cast<std::size_t>(side());
  std::size_t stride = 1;
  for (int a = dim - 1; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] = stride;
    stride *= s;
  }
  count_ = stride;
}

std::size_t LatticeBox::edge_count() const {
  // d * (2r+1)^{d-1} * 2r
  std::size_t per_axis = count_ / static_cast<std::size_t>(side()) * static_cast<std::size_t>(2 * radius_);
  return per_axis * static_cast<std::size_t>(dim_);
}

bool LatticeBox::contains(const Vertex& v) const {
  if (v.dim != dim_) return false;
  for (int a = 0; a < dim_; ++a)
    if (std::abs(v[a]) > radius_) return false;
  return true;
}

bool LatticeBox::on_face(const Vertex& v) const {
  for (int a = 0; a < dim_; ++a)
    if (std::abs(v[a]) == radius_) return true;
  return false;
}

bool LatticeBox::on_face(std::size_t index) const {
  for (int a = 0; a < dim_; ++a)
    if (std::abs(coord(index, a)) == radius_) return true;
  return false;
}

std::size_t LatticeBox::index(const Vertex& v) const {
  if (!contains(v))
    throw std::out_of_range("LatticeBox::index: vertex " + v.to_string() + " outside box");
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a)
    idx += static_cast<std::size_t>(v[a] + radius_) * strides_[static_cast<std::size_t>(a)];
  return idx;
}

Vertex LatticeBox::vertex_at(std::size_t index) const {
  Vertex v = Vertex::origin(dim_);
  for (int a = 0; a < dim_; ++a)
    v[a] = coord(index, a);
  return v;
}

int LatticeBox::coord(std::size_t index, int axis) const {
  std::size_t s = static_cast<std::size_t>(side());
  return static_cast<int>((index / strides_[static_cast<std::size_t>(axis)]) % s) - radius_;
}

std::vector<Edge> LatticeBox::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for_each_edge([&](std::size_t i, int a) { out.push_back(Edge{vertex_at(i), a}); });
  return out;
}

Annulus::Annulus(double in, double out) : inner(in), outer(out) {
  if (!(in > 0.0) || !(in < out))
    throw std::invalid_argument("Annulus: need 0 < inner < outer");
}

bool Annulus::contains(const Vertex& v) const {
  long n = v.linf_norm();
  return n <= static_cast<long>(std::floor(outer)) && n > static_cast<long>(std::floor(inner));
}

bool encloses_origin(std::span<const Vertex> w, const LatticeBox& guard) {
  std::vector<std::uint8_t> blocked(guard.vertex_count(), 0);
  for (const Vertex& v : w) {
    if (!guard.contains(v) || guard.on_face(v))
      throw std::invalid_argument("encloses_origin: W must lie strictly inside the guard box");
    if (v.l1_norm() == 0)
      throw std::invalid_argument("encloses_origin: W contains the origin");
    blocked[guard.index(v)] = 1;
  }
  std::size_t start = guard.origin_index();
  if (guard.on_face(start)) return false;
  std::vector<std::size_t> stack{start};
  blocked[start] = 1;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (int a = 0; a < guard.dim(); ++a) {
      std::size_t st = guard.stride(a);
      // interior vertices never sit on the face, so both steps stay in range
      for (std::size_t j : {i + st, i - st}) {
        if (blocked[j]) continue;
        if (guard.on_face(j)) return false;
        blocked[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return true;
}

bool is_star_connected(std::span<const Vertex> w) {
  if (w.empty()) return true;
  std::set<Vertex> remaining(w.begin(), w.end());
  std::vector<Vertex> stack{*remaining.begin()};
  remaining.erase(remaining.begin());
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const Vertex& n : star_neighbors(v)) {
      auto it = remaining.find(n);
      if (it != remaining.end()) {
        remaining.erase(it);
        stack.push_back(n);
      }
    }
  }
  return remaining.empty();
}

}  // namespace fpplab
