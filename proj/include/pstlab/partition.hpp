#pragma once

// Weighted equitable partitions and quotient graphs.
//
// Each vertex carries the weight w(v) = sqrt(sum_u A_uv^2), which reduces to
// sqrt(degree) on unweighted graphs. The normalized partition matrix Q has
// column i supported on cell C_i with entries w(v) / w(C_i), where
// w(C_i)^2 = sum_{v in C_i} w(v)^2, so Q^T Q = I. A partition is equitable when
// b_ij(u) = sum_{v in C_j} A_uv w(v) / w(u) does not depend on the choice of
// u in C_i; then B = Q^T A Q is the quotient adjacency and A Q = Q B.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pstlab/graph.hpp"
#include "pstlab/spectral.hpp"

namespace pstlab {

inline constexpr double kEquitableTol = 1e-10;
inline constexpr double kMatrixIdentityTol = 1e-9;
inline constexpr double kSpectrumMatchTol = 1e-8;

class Partition {
 public:
  Partition() = default;

  // Cells are kept in the given order; that order is the quotient vertex order.
  static Partition from_cells(std::size_t n, std::vector<std::vector<Vertex>> cells) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> cell_of(n, unset);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].empty()) throw PreconditionError("partition cell " + std::to_string(c + 1) + " is empty");
      for (Vertex v : cells[c]) {
        if (v >= n) throw OutOfRangeError("partition vertex " + std::to_string(v + 1) + " out of range");
        if (cell_of[v] != unset) {
          throw PreconditionError("vertex " + std::to_string(v + 1) + " appears in two cells");
        }
        cell_of[v] = c;
      }
    }
    for (Vertex v = 0; v < n; ++v) {
      if (cell_of[v] == unset) throw PreconditionError("vertex " + std::to_string(v + 1) + " is in no cell");
    }
    Partition p;
    p.n_ = n;
    p.cells_ = std::move(cells);
    p.cell_of_ = std::move(cell_of);
    return p;
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::vector<Vertex>> cells(n);
    for (Vertex v = 0; v < n; ++v) cells[v] = {v};
    return from_cells(n, std::move(cells));
  }

  static Partition whole(std::size_t n) {
    std::vector<Vertex> all(n);
    for (Vertex v = 0; v < n; ++v) all[v] = v;
    return from_cells(n, {std::move(all)});
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  const std::vector<std::vector<Vertex>>& cells() const noexcept { return cells_; }
  const std::vector<Vertex>& cell(std::size_t i) const { return cells_.at(i); }
  std::size_t cell_of(Vertex v) const { return cell_of_.at(v); }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<Vertex>> cells_;
  std::vector<std::size_t> cell_of_;
};

inline double vertex_weight(const WeightedGraph& g, Vertex v) {
  if (v >= g.size()) throw OutOfRangeError("vertex out of range");
  return g.adjacency().col(static_cast<Eigen::Index>(v)).norm();
}

inline Vector vertex_weights(const WeightedGraph& g) { return g.adjacency().colwise().norm().transpose(); }

struct PartitionMatrix {
  Partition partition;
  Matrix q;               // n x m
  Vector vertex_weights;  // w(v)
  Vector cell_weights;    // w(C_i)
};

inline PartitionMatrix normalized_partition_matrix(const WeightedGraph& g, const Partition& p) {
  if (p.vertex_count() != g.size()) throw PreconditionError("partition size does not match graph");
  PartitionMatrix pm;
  pm.partition = p;
  pm.vertex_weights = vertex_weights(g);
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto m = static_cast<Eigen::Index>(p.cell_count());
  pm.q = Matrix::Zero(n, m);
  pm.cell_weights.resize(m);
  for (Eigen::Index c = 0; c < m; ++c) {
    double sq = 0.0;
    for (Vertex v : p.cell(static_cast<std::size_t>(c))) {
      const double w = pm.vertex_weights(static_cast<Eigen::Index>(v));
      sq += w * w;
    }
    const double cell_weight = std::sqrt(sq);
    if (!(cell_weight > 0.0)) {
      throw PreconditionError("degenerate partition: cell " + std::to_string(c + 1) +
                              " has zero total weight (only isolated vertices)");
    }
    pm.cell_weights(c) = cell_weight;
    for (Vertex v : p.cell(static_cast<std::size_t>(c))) {
      const auto vi = static_cast<Eigen::Index>(v);
      pm.q(vi, c) = pm.vertex_weights(vi) / cell_weight;
    }
  }
  return pm;
}

struct EquitabilityReport {
  bool equitable = false;
  Matrix b;  // b_ij, read off the first member of each cell
  double max_spread = 0.0;
  // Location of the largest spread: target cell j, source cell i and the
  // member u of C_i farthest from the first member's value.
  std::size_t worst_cell = 0;
  std::size_t worst_target_cell = 0;
  Vertex worst_vertex = 0;
};

inline EquitabilityReport check_equitable(const WeightedGraph& g, const Partition& p,
                                          double tol = kEquitableTol) {
  if (p.vertex_count() != g.size()) throw PreconditionError("partition size does not match graph");
  const Vector w = vertex_weights(g);
  const auto m = static_cast<Eigen::Index>(p.cell_count());
  EquitabilityReport report;
  report.b = Matrix::Zero(m, m);

  auto b_of = [&](Vertex u, std::size_t j) {
    const double wu = w(static_cast<Eigen::Index>(u));
    if (wu == 0.0) return 0.0;
    double sum = 0.0;
    for (Vertex v : p.cell(j)) sum += g.weight(u, v) * w(static_cast<Eigen::Index>(v));
    return sum / wu;
  };

  for (std::size_t i = 0; i < p.cell_count(); ++i) {
    const auto& members = p.cell(i);
    for (std::size_t j = 0; j < p.cell_count(); ++j) {
      const double first = b_of(members.front(), j);
      report.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = first;
      for (Vertex u : members) {
        const double spread = std::abs(b_of(u, j) - first);
        if (spread > report.max_spread) {
          report.max_spread = spread;
          report.worst_cell = i;
          report.worst_target_cell = j;
          report.worst_vertex = u;
        }
      }
    }
  }
  report.equitable = report.max_spread <= tol;
  return report;
}

namespace detail {

// Q^T A Q with the lower triangle mirrored from the upper one.
inline Matrix symmetric_sandwich(const Matrix& a, const Matrix& q) {
  Matrix b = q.transpose() * a * q;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) b(i, j) = b(j, i);
  }
  return b;
}

}  // namespace detail

inline WeightedGraph quotient(const WeightedGraph& g, const PartitionMatrix& pm) {
  const auto report = check_equitable(g, pm.partition);
  if (!report.equitable) {
    throw ContractViolation("partition is not equitable (max b spread " +
                            std::to_string(report.max_spread) + " at cell " +
                            std::to_string(report.worst_cell + 1) + ", vertex " +
                            std::to_string(report.worst_vertex + 1) + ")");
  }
  return WeightedGraph::from_matrix(detail::symmetric_sandwich(g.adjacency(), pm.q));
}

inline WeightedGraph quotient(const WeightedGraph& g, const Partition& p) {
  return quotient(g, normalized_partition_matrix(g, p));
}

// The four equivalent characterisations of an equitable partition.
struct TheoremEquivalence {
  bool equitable = false;           // constant b_ij
  bool invariant_subspace = false;  // (I - QQ^T) A Q = 0
  bool commutes = false;            // [A, QQ^T] = 0
  bool intertwines = false;         // A Q = Q B with B = Q^T A Q
  double spread = 0.0;
  double invariant_residual = 0.0;
  double commutator_norm = 0.0;
  double intertwining_residual = 0.0;

  bool agree() const {
    return equitable == invariant_subspace && invariant_subspace == commutes && commutes == intertwines;
  }
};

inline TheoremEquivalence verify_theorem_equivalences(const WeightedGraph& g, const Partition& p,
                                                      double tol = kMatrixIdentityTol) {
  const auto pm = normalized_partition_matrix(g, p);
  const Matrix& a = g.adjacency();
  const Matrix& q = pm.q;
  const auto n = a.rows();
  const Matrix projector = q * q.transpose();
  const Matrix b = q.transpose() * a * q;

  TheoremEquivalence out;
  const auto eq = check_equitable(g, p);
  out.spread = eq.max_spread;
  out.equitable = eq.equitable;
  out.invariant_residual = ((Matrix::Identity(n, n) - projector) * a * q).cwiseAbs().maxCoeff();
  out.invariant_subspace = out.invariant_residual <= tol;
  out.commutator_norm = (a * projector - projector * a).cwiseAbs().maxCoeff();
  out.commutes = out.commutator_norm <= tol;
  out.intertwining_residual = (a * q - q * b).cwiseAbs().maxCoeff();
  out.intertwines = out.intertwining_residual <= tol;
  return out;
}

// QQ^T is a projector: eigenvalues in {0, 1}, with 1 of multiplicity m.
inline bool qqt_eigenvalue_check(const PartitionMatrix& pm, double tol = kMatrixIdentityTol) {
  const Matrix projector = pm.q * pm.q.transpose();
  const auto spec = jacobi_eigh(projector);
  std::size_t ones = 0;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double x = spec.eigenvalues(i);
    if (std::abs(x - 1.0) <= tol) {
      ++ones;
    } else if (std::abs(x) > tol) {
      return false;
    }
  }
  return ones == pm.partition.cell_count();
}

// Greedy nearest matching of a sorted sub-multiset into a sorted multiset.
inline bool spectrum_contains(std::vector<double> outer, std::vector<double> inner,
                              double tol = kSpectrumMatchTol) {
  if (inner.size() > outer.size()) return false;
  std::sort(inner.begin(), inner.end());
  std::vector<bool> used(outer.size(), false);
  for (double x : inner) {
    std::size_t best = outer.size();
    double best_gap = tol;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      if (used[i]) continue;
      const double gap = std::abs(outer[i] - x);
      if (gap <= best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best == outer.size()) return false;
    used[best] = true;
  }
  return true;
}

inline bool spectra_equal(const std::vector<double>& a, const std::vector<double>& b,
                          double tol = kSpectrumMatchTol) {
  return a.size() == b.size() && spectrum_contains(a, b, tol);
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline bool quotient_spectrum_subset(const WeightedGraph& g, const PartitionMatrix& pm) {
  const auto b = quotient(g, pm);
  return spectrum_contains(to_std(eigh(g).eigenvalues), to_std(eigh(b).eigenvalues));
}

// Largest eigenvalue of a connected non-negative graph survives the collapse,
// stays simple on both sides, and lifts to a strictly positive vector.
inline bool max_eigenvalue_preservation(const WeightedGraph& g, const PartitionMatrix& pm,
                                        double tol = kSpectrumMatchTol) {
  if (g.has_negative_weight()) throw PreconditionError("graph has negative weights");
  if (!g.is_connected()) throw PreconditionError("graph is disconnected");
  const auto b = quotient(g, pm);
  const auto spec_a = eigh(g);
  const auto spec_b = eigh(b);
  const auto na = spec_a.eigenvalues.size();
  const auto nb = spec_b.eigenvalues.size();
  const double top_a = spec_a.eigenvalues(na - 1);
  const double top_b = spec_b.eigenvalues(nb - 1);
  if (std::abs(top_a - top_b) > tol) return false;
  if (na > 1 && top_a - spec_a.eigenvalues(na - 2) <= tol) return false;
  if (nb > 1 && top_b - spec_b.eigenvalues(nb - 2) <= tol) return false;
  const Vector lifted = pm.q * spec_b.eigenvectors.col(nb - 1);
  // fix_sign makes the largest entry positive; Perron says then all are.
  return (lifted.array() > 0.0).all();
}

// Max over eigenvectors z of A: either ||Q^T z|| <= tol, or Q^T z is an
// eigenvector of B for the same eigenvalue. Returns the worst residual.
inline double eigenvector_transport_residual(const WeightedGraph& g, const PartitionMatrix& pm,
                                             double tol = kSpectrumMatchTol) {
  const auto b = quotient(g, pm);
  const auto spec = eigh(g);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
    const Vector y = pm.q.transpose() * spec.eigenvectors.col(j);
    if (y.norm() <= tol) continue;
    const double residual = (b.adjacency() * y - spec.eigenvalues(j) * y).norm();
    worst = std::max(worst, residual);
  }
  return worst;
}

// |<u~|U_B(t)|v~> - <u|U_A(t)|v>| for vertices u, v sitting in singleton cells.
inline double singleton_evolution_check(const WeightedGraph& g, const PartitionMatrix& pm, Vertex u,
                                        Vertex v, double t) {
  const auto& p = pm.partition;
  if (u >= g.size() || v >= g.size()) throw OutOfRangeError("vertex out of range");
  const std::size_t cu = p.cell_of(u);
  const std::size_t cv = p.cell_of(v);
  if (p.cell(cu).size() != 1 || p.cell(cv).size() != 1) {
    throw PreconditionError("singleton transport needs both vertices in singleton cells");
  }
  const auto b = quotient(g, pm);
  const Complex lhs = transfer_amplitude(eigh(b), cv, cu, t);
  const Complex rhs = transfer_amplitude(eigh(g), v, u, t);
  return std::abs(lhs - rhs);
}

// Orbits of the cyclic group generated by an automorphism, ordered by their
// smallest member; members ascending.
inline Partition orbit_partition(const WeightedGraph& g, const Permutation& perm, double tol = 1e-12) {
  if (automorphism_defect(g, perm) > tol) throw PreconditionError("permutation is not an automorphism");
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Vertex>> cells;
  for (Vertex start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<Vertex> orbit;
    for (Vertex v = start; !seen[v]; v = perm[v]) {
      seen[v] = true;
      orbit.push_back(v);
    }
    std::sort(orbit.begin(), orbit.end());
    cells.push_back(std::move(orbit));
  }
  return Partition::from_cells(n, std::move(cells));
}

}  // namespace pstlab
