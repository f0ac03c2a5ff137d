#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fpplab {

inline constexpr int kMaxDim = 4;

// A point of Z^d. Unused trailing coordinates are kept at zero so that
// defaulted comparison is lexicographic over the live coordinates.
struct Vertex {
  int dim = 2;
  std::array<int, kMaxDim> coords{};

  Vertex() = default;
  Vertex(std::initializer_list<int> c);

  int operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }

  static Vertex origin(int d) {
    Vertex v;
    v.dim = d;
    return v;
  }
  Vertex shifted(int axis, int step) const {
    Vertex v = *this;
    v[axis] += step;
    return v;
  }

  long l1_norm() const;
  long linf_norm() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;

  std::string to_string() const;
};

// Undirected nearest-neighbor edge {base, base + e_axis}. The base is always
// the lexicographically smaller endpoint, so each edge has one representation.
struct Edge {
  Vertex base;
  int axis = 0;

  Vertex tip() const { return base.shifted(axis, 1); }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Throws std::invalid_argument unless x and y are nearest neighbors.
Edge canonical_edge(const Vertex& x, const Vertex& y);

// +e_1, -e_1, +e_2, -e_2, ...
std::vector<Vertex> neighbors(const Vertex& x);
// all y != x with |y - x|_inf = 1
std::vector<Vertex> star_neighbors(const Vertex& x);

// Cell rounding [p]: the vertex whose unit cell [x] + [0,1)^d contains p.
Vertex cell_of(std::span<const double> p);

void check_dimension(int d);

// The box S(r) = [-r, r]^d, linearized row-major (first coordinate most
// significant), so index order coincides with lexicographic vertex order.
class LatticeBox {
 public:
  LatticeBox(int dim, int radius);

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  int side() const { return 2 * radius_ + 1; }
  std::size_t vertex_count() const { return count_; }
  std::size_t edge_count() const;

  bool contains(const Vertex& v) const;
  bool on_face(const Vertex& v) const;
  bool on_face(std::size_t index) const;

  std::size_t index(const Vertex& v) const;
  Vertex vertex_at(std::size_t index) const;
  // index offset of a +1 step along axis
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  // coordinate of `index` along axis, in [-r, r]
  int coord(std::size_t index, int axis) const;

  std::size_t origin_index() const { return index(Vertex::origin(dim_)); }

  // Every canonical edge with both endpoints in the box, in index order of
  // the base then axis order.
  std::vector<Edge> edges() const;
  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (std::size_t i = 0; i < count_; ++i)
      for (int a = 0; a < dim_; ++a)
        if (coord(i, a) < radius_) fn(i, a);
  }

  friend bool operator==(const LatticeBox&, const LatticeBox&) = default;

 private:
  int dim_;
  int radius_;
  std::size_t count_;
  std::array<std::size_t, kMaxDim> strides_{};
};

// Ann(inner, outer) = S(outer) \ S(inner), floors applied to both radii.
struct Annulus {
  double inner;
  double outer;

  Annulus(double inner, double outer);
  bool contains(const Vertex& v) const;
};

// True iff W separates the origin from the guard's face: no nearest-neighbor
// path from 0 to the face avoids W. For finite W inside the guard this is the
// same as every infinite self-avoiding path from 0 meeting W.
// Throws if 0 is in W or W touches / leaves the guard face.
bool encloses_origin(std::span<const Vertex> w, const LatticeBox& guard);

// True iff the vertex set is connected under |.|_inf = 1 adjacency.
bool is_star_connected(std::span<const Vertex> w);

}  // namespace fpplab
