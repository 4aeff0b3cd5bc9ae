#pragma once

// Weighted undirected graphs stored as dense symmetric adjacency matrices.
//
// Vertices are 0-based inside the library. Every external format (graph and
// partition files, CLI flags, printed labels) is 1-based; conversion happens
// only in io.hpp and the CLI.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "pstlab/errors.hpp"

namespace pstlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

using Vertex = std::size_t;

// perm[v] is the image of vertex v.
using Permutation = std::vector<Vertex>;

struct SizeLimits {
  std::size_t max_vertices = 5000;
  int max_hypercube_dim = 14;

  // PSTLAB_CAP overrides max_vertices.
  static SizeLimits from_env() {
    SizeLimits limits;
    if (const char* cap = std::getenv("PSTLAB_CAP"); cap != nullptr && *cap != '\0') {
      char* end = nullptr;
      const unsigned long long value = std::strtoull(cap, &end, 10);
      if (end != nullptr && *end == '\0' && value > 0) {
        limits.max_vertices = static_cast<std::size_t>(value);
      }
    }
    return limits;
  }

  void require_vertices(std::size_t count, const std::string& what) const {
    if (count > max_vertices) {
      throw ResourceError(what + " needs " + std::to_string(count) +
                          " vertices, above the cap of " + std::to_string(max_vertices));
    }
  }
};

class GraphBuilder;

class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Validating constructor for matrices that come from outside the builders.
  static WeightedGraph from_matrix(Matrix adjacency) {
    if (adjacency.rows() != adjacency.cols()) {
      throw InvalidSizeError("adjacency matrix must be square");
    }
    if (adjacency.rows() == 0) {
      throw InvalidSizeError("graph must have at least one vertex");
    }
    const Eigen::Index n = adjacency.rows();
    for (Eigen::Index u = 0; u < n; ++u) {
      for (Eigen::Index v = 0; v < n; ++v) {
        if (!std::isfinite(adjacency(u, v))) {
          throw NonFiniteError("non-finite weight at (" + std::to_string(u + 1) + ", " +
                               std::to_string(v + 1) + ")");
        }
        if (adjacency(u, v) != adjacency(v, u)) {
          throw AsymmetryError("adjacency not symmetric at (" + std::to_string(u + 1) + ", " +
                               std::to_string(v + 1) + ")");
        }
      }
    }
    WeightedGraph g;
    g.adjacency_ = std::move(adjacency);
    return g;
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(adjacency_.rows()); }
  const Matrix& adjacency() const noexcept { return adjacency_; }
  double weight(Vertex u, Vertex v) const {
    return adjacency_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }

  // Unordered vertex pairs u < v with a nonzero weight. Self-loops excluded.
  std::size_t edge_count() const {
    std::size_t count = 0;
    for (Eigen::Index u = 0; u < adjacency_.rows(); ++u) {
      for (Eigen::Index v = u + 1; v < adjacency_.cols(); ++v) {
        if (adjacency_(u, v) != 0.0) ++count;
      }
    }
    return count;
  }

  std::size_t degree(Vertex v) const {
    std::size_t d = 0;
    for (Eigen::Index u = 0; u < adjacency_.rows(); ++u) {
      if (static_cast<Vertex>(u) != v && adjacency_(u, static_cast<Eigen::Index>(v)) != 0.0) ++d;
    }
    return d;
  }

  bool has_negative_weight() const { return (adjacency_.array() < 0.0).any(); }

  // Connected components over nonzero off-diagonal entries, ids in order of
  // their smallest vertex.
  std::vector<std::size_t> component_ids(double threshold = 0.0) const {
    const std::size_t n = size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> id(n, unset);
    std::size_t next = 0;
    for (Vertex start = 0; start < n; ++start) {
      if (id[start] != unset) continue;
      std::queue<Vertex> frontier;
      frontier.push(start);
      id[start] = next;
      while (!frontier.empty()) {
        const Vertex u = frontier.front();
        frontier.pop();
        for (Vertex v = 0; v < n; ++v) {
          if (id[v] == unset && v != u && std::abs(weight(u, v)) > threshold) {
            id[v] = next;
            frontier.push(v);
          }
        }
      }
      ++next;
    }
    return id;
  }

  bool is_connected() const {
    const auto ids = component_ids();
    for (std::size_t id : ids) {
      if (id != 0) return false;
    }
    return true;
  }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.adjacency_.rows() == b.adjacency_.rows() && a.adjacency_ == b.adjacency_;
  }

 private:
  friend class GraphBuilder;
  Matrix adjacency_;
};

// Only way to assemble a graph edge by edge; every write sets both (u,v) and
// (v,u), so builder output is symmetric bit for bit.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n) {
    if (n == 0) throw InvalidSizeError("graph must have at least one vertex");
    const auto size = static_cast<Eigen::Index>(n);
    adjacency_ = Matrix::Zero(size, size);
  }

  GraphBuilder& set_edge(Vertex u, Vertex v, double w) {
    check(u);
    check(v);
    if (!std::isfinite(w)) throw NonFiniteError("non-finite edge weight");
    adjacency_(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = w;
    adjacency_(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = w;
    return *this;
  }

  WeightedGraph build() && {
    WeightedGraph g;
    g.adjacency_ = std::move(adjacency_);
    return g;
  }

 private:
  void check(Vertex v) const {
    if (v >= static_cast<Vertex>(adjacency_.rows())) {
      throw OutOfRangeError("vertex " + std::to_string(v + 1) + " out of range");
    }
  }

  Matrix adjacency_;
};

namespace detail {

// A (x) I_m + I_n (x) B in row-major (first factor slowest) order.
inline Matrix kronecker_sum(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  Matrix out = Matrix::Zero(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index ip = 0; ip < n; ++ip) {
      const double aw = a(i, ip);
      if (aw == 0.0) continue;
      for (Eigen::Index j = 0; j < m; ++j) out(i * m + j, ip * m + j) += aw;
    }
    out.block(i * m, i * m, m, m) += b;
  }
  return out;
}

}  // namespace detail

// Path on n vertices with edge (v, v+1) of weight sqrt(v (n - v)), 1-based v.
inline WeightedGraph weighted_path(std::size_t n, const SizeLimits& limits = {}) {
  if (n < 2) throw InvalidSizeError("weighted path needs n >= 2");
  limits.require_vertices(n, "weighted path");
  GraphBuilder builder(n);
  for (std::size_t v = 1; v < n; ++v) {
    builder.set_edge(v - 1, v, std::sqrt(static_cast<double>(v * (n - v))));
  }
  return std::move(builder).build();
}

inline WeightedGraph simple_path(std::size_t n, const SizeLimits& limits = {}) {
  if (n < 2) throw InvalidSizeError("path needs n >= 2");
  limits.require_vertices(n, "path");
  GraphBuilder builder(n);
  for (std::size_t v = 1; v < n; ++v) builder.set_edge(v - 1, v, 1.0);
  return std::move(builder).build();
}

inline WeightedGraph cycle(std::size_t n, const SizeLimits& limits = {}) {
  if (n < 3) throw InvalidSizeError("cycle needs n >= 3");
  limits.require_vertices(n, "cycle");
  GraphBuilder builder(n);
  for (std::size_t v = 0; v < n; ++v) builder.set_edge(v, (v + 1) % n, 1.0);
  return std::move(builder).build();
}

// Q_dim = P_2 [] Q_(dim-1), Q_1 = P_2. Vertex index = binary string read
// most-significant-first, so vertex order is lexicographic in the strings.
inline WeightedGraph hypercube(int dim, const SizeLimits& limits = {}) {
  if (dim < 1) throw InvalidSizeError("hypercube dimension must be >= 1");
  if (dim > limits.max_hypercube_dim) {
    throw ResourceError("hypercube dimension " + std::to_string(dim) + " above the cap of " +
                        std::to_string(limits.max_hypercube_dim));
  }
  limits.require_vertices(std::size_t{1} << dim, "hypercube");
  const Matrix p2 = simple_path(2).adjacency();
  Matrix a = p2;
  for (int d = 2; d <= dim; ++d) a = detail::kronecker_sum(p2, a);
  return WeightedGraph::from_matrix(std::move(a));
}

// i -> n-1-i (0-based), the mirror of a path about its midpoint.
inline Permutation reflection_permutation(std::size_t n) {
  Permutation perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = n - 1 - i;
  return perm;
}

inline bool is_permutation_of(const Permutation& perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (Vertex v : perm) {
    if (v >= n || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

// P A P^T: the entry at (perm[u], perm[v]) is A(u, v).
inline Matrix conjugate(const Matrix& a, const Permutation& perm) {
  const auto n = a.rows();
  Matrix out(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = 0; v < n; ++v) {
      out(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(u)]),
          static_cast<Eigen::Index>(perm[static_cast<std::size_t>(v)])) = a(u, v);
    }
  }
  return out;
}

inline double automorphism_defect(const WeightedGraph& g, const Permutation& perm) {
  if (!is_permutation_of(perm, g.size())) {
    throw PreconditionError("not a permutation of the graph's vertices");
  }
  return (conjugate(g.adjacency(), perm) - g.adjacency()).cwiseAbs().maxCoeff();
}

}  // namespace pstlab
