#pragma once

// Oracles that share no code with the library: Eigen's eigensolver and Pade
// matrix exponential, plus brute-force enumeration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "pstlab/pstlab.hpp"

namespace oracle {

using pstlab::CMatrix;
using pstlab::Complex;
using pstlab::Matrix;

inline std::vector<double> eigenvalues(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  const auto& v = solver.eigenvalues();
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

inline CMatrix expm(const Matrix& a, double t) {
  const CMatrix x = (Complex(0.0, -t) * a.cast<Complex>()).eval();
  return x.exp();
}

inline double max_gap(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return INFINITY;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Sums of every k-subset of values, by enumerating bitmasks.
inline std::vector<double> subset_sums(const std::vector<double>& values, std::size_t k) {
  std::vector<double> out;
  const std::size_t n = values.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s += values[i];
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> tuple_sums(const std::vector<double>& values, std::size_t k) {
  std::vector<double> out{0.0};
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> next;
    for (double s : out) {
      for (double x : values) next.push_back(s + x);
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline pstlab::WeightedGraph random_graph(std::mt19937& rng, std::size_t n, double density = 0.6,
                                          bool allow_negative = true) {
  std::uniform_real_distribution<double> weight(allow_negative ? -2.0 : 0.1, 2.0);
  std::bernoulli_distribution edge(density);
  pstlab::GraphBuilder b(n);
  for (pstlab::Vertex u = 0; u < n; ++u) {
    for (pstlab::Vertex v = u + 1; v < n; ++v) {
      if (edge(rng)) b.set_edge(u, v, weight(rng));
    }
  }
  return std::move(b).build();
}

inline pstlab::WeightedGraph hamming_q3() { return pstlab::hypercube(3); }

inline pstlab::Partition hamming_cells() {
  return pstlab::Partition::from_cells(8, {{0}, {1, 2, 4}, {3, 5, 6}, {7}});
}

struct PartitionFixture {
  std::string name;
  pstlab::WeightedGraph graph;
  pstlab::Partition partition;
  bool equitable = false;
};

inline pstlab::Partition cells(std::size_t n, std::vector<std::vector<pstlab::Vertex>> c) {
  return pstlab::Partition::from_cells(n, std::move(c));
}

inline pstlab::WeightedGraph complete_bipartite(std::size_t a, std::size_t b) {
  pstlab::GraphBuilder g(a + b);
  for (pstlab::Vertex u = 0; u < a; ++u) {
    for (pstlab::Vertex v = a; v < a + b; ++v) g.set_edge(u, v, 1.0);
  }
  return std::move(g).build();
}

// Cells are written out by hand so the fixtures do not depend on the
// library's orbit or label code.
inline std::vector<PartitionFixture> partition_fixtures() {
  using pstlab::Partition;
  std::mt19937 rng(4242);
  std::vector<PartitionFixture> f;
  f.push_back({"Q3 hamming", pstlab::hypercube(3), hamming_cells(), true});
  f.push_back({"Q4 hamming", pstlab::hypercube(4),
               cells(16, {{0}, {1, 2, 4, 8}, {3, 5, 6, 9, 10, 12}, {7, 11, 13, 14}, {15}}), true});
  f.push_back({"Q2 hamming", pstlab::hypercube(2), cells(4, {{0}, {1, 2}, {3}}), true});
  f.push_back({"Q3 bit swap orbits", pstlab::hypercube(3), cells(8, {{0}, {1, 2}, {3}, {4}, {5, 6}, {7}}), true});
  f.push_back({"weighted P4 mirror", pstlab::weighted_path(4), cells(4, {{0, 3}, {1, 2}}), true});
  f.push_back({"weighted P5 mirror", pstlab::weighted_path(5), cells(5, {{0, 4}, {1, 3}, {2}}), true});
  f.push_back({"weighted P6 mirror", pstlab::weighted_path(6), cells(6, {{0, 5}, {1, 4}, {2, 3}}), true});
  f.push_back({"weighted P7 mirror", pstlab::weighted_path(7), cells(7, {{0, 6}, {1, 5}, {2, 4}, {3}}), true});
  f.push_back({"P5 mirror", pstlab::simple_path(5), cells(5, {{0, 4}, {1, 3}, {2}}), true});
  f.push_back({"P3 singletons", pstlab::simple_path(3), Partition::singletons(3), true});
  f.push_back({"random singletons", random_graph(rng, 6), Partition::singletons(6), true});
  f.push_back({"C4 one cell", pstlab::cycle(4), Partition::whole(4), true});
  f.push_back({"C6 one cell", pstlab::cycle(6), Partition::whole(6), true});
  f.push_back({"Q3 one cell", pstlab::hypercube(3), Partition::whole(8), true});
  f.push_back({"C6 reflection orbits", pstlab::cycle(6), cells(6, {{0}, {1, 5}, {2, 4}, {3}}), true});
  f.push_back({"K23 sides", complete_bipartite(2, 3), cells(5, {{0, 1}, {2, 3, 4}}), true});
  // Swap orbits on the 3x3 grid of the weighted path: labels (x,y) at 3(x-1)+(y-1).
  f.push_back({"weighted P3 square swap orbits", pstlab::cartesian_power(pstlab::weighted_path(3), 2),
               cells(9, {{0}, {1, 3}, {2, 6}, {4}, {5, 7}, {8}}), true});
  // Identical hard-core pair on the weighted path P4; vertex order
  // (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
  const auto hc42 = pstlab::symmetric_power(pstlab::weighted_path(4), 2);
  f.push_back({"hard-core (4,2) mirror", hc42, cells(6, {{0, 5}, {1, 4}, {2}, {3}}), true});
  f.push_back({"hard-core (4,2) path collapse", hc42, cells(6, {{0}, {1}, {2, 3}, {4}, {5}}), true});
  f.push_back({"hard-core (4,2) singletons", hc42, Partition::singletons(6), true});

  f.push_back({"P3 split", pstlab::simple_path(3), cells(3, {{0, 1}, {2}}), false});
  f.push_back({"P4 one cell", pstlab::simple_path(4), Partition::whole(4), false});
  f.push_back({"Q3 pair and rest", pstlab::hypercube(3), cells(8, {{0, 1}, {2, 3, 4, 5, 6, 7}}), false});
  f.push_back({"weighted P4 halves", pstlab::weighted_path(4), cells(4, {{0, 1}, {2, 3}}), false});
  f.push_back({"K13 one cell", complete_bipartite(1, 3), Partition::whole(4), true});
  f.push_back({"P4 ends apart", pstlab::simple_path(4), cells(4, {{0, 3}, {1}, {2}}), false});
  f.push_back({"C5 split", pstlab::cycle(5), cells(5, {{0, 1}, {2, 3, 4}}), false});
  f.push_back({"random halves", random_graph(rng, 6, 0.8, false), cells(6, {{0, 1, 2}, {3, 4, 5}}), false});
  return f;
}

}  // namespace oracle
