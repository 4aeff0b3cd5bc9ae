#pragma once

// Hard-core bosons on a graph G: delete every vertex of G^k whose label
// repeats a site, then (for identical particles) collapse labels that differ
// only by a permutation of positions.
//
// Three bases appear below:
//   power     - all n^k labels of the Cartesian power, row-major;
//   kept      - the labels without repeats, in power order (the deleted graph);
//   identical - strictly ascending labels in lexicographic order (the
//               symmetric power).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "pstlab/graph.hpp"
#include "pstlab/partition.hpp"
#include "pstlab/products.hpp"

namespace pstlab {

inline std::size_t factorial(std::size_t k) {
  std::size_t out = 1;
  for (std::size_t i = 2; i <= k; ++i) out *= i;
  return out;
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t out = 1;
  for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

struct DeletionMask {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<bool> keep;                 // over the power basis
  std::size_t kept_count = 0;             // n! / (n-k)!
  std::vector<std::size_t> kept_indices;  // kept position -> power index
  std::vector<std::size_t> kept_position; // power index -> kept position, or npos

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  OccupationLabel kept_label(std::size_t position) const { return label_of_index(kept_indices.at(position), n, k); }
};

inline DeletionMask deletion_mask(std::size_t n, std::size_t k, const SizeLimits& limits = {}) {
  if (k < 1 || k > n) throw InvalidSizeError("hard-core bosons need 1 <= k <= n");
  const std::size_t total = power_size(n, k, limits);
  DeletionMask mask;
  mask.n = n;
  mask.k = k;
  mask.keep.resize(total);
  mask.kept_position.assign(total, DeletionMask::npos);
  for (std::size_t i = 0; i < total; ++i) {
    mask.keep[i] = !label_of_index(i, n, k).has_repeat();
    if (mask.keep[i]) {
      mask.kept_position[i] = mask.kept_indices.size();
      mask.kept_indices.push_back(i);
    }
  }
  mask.kept_count = mask.kept_indices.size();
  return mask;
}

// D A D with the deleted rows and columns dropped.
inline WeightedGraph apply_deletion(const WeightedGraph& power, const DeletionMask& mask) {
  if (power.size() != mask.keep.size()) throw InvalidSizeError("deletion mask does not match graph size");
  const auto kept = static_cast<Eigen::Index>(mask.kept_count);
  Matrix out(kept, kept);
  for (Eigen::Index i = 0; i < kept; ++i) {
    for (Eigen::Index j = 0; j < kept; ++j) {
      out(i, j) = power.weight(mask.kept_indices[static_cast<std::size_t>(i)],
                               mask.kept_indices[static_cast<std::size_t>(j)]);
    }
  }
  return WeightedGraph::from_matrix(std::move(out));
}

// rank[i] = number of sites below sites[i]; all sites distinct.
inline std::vector<std::size_t> order_pattern(const OccupationLabel& label) {
  std::vector<std::size_t> rank(label.k(), 0);
  for (std::size_t i = 0; i < label.k(); ++i) {
    for (std::size_t j = 0; j < label.k(); ++j) {
      if (label.sites[j] < label.sites[i]) ++rank[i];
    }
  }
  return rank;
}

// +1 for even, -1 for odd permutations.
inline int permutation_parity(const std::vector<std::size_t>& perm) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

inline OccupationLabel sorted_label(OccupationLabel label) {
  std::sort(label.sites.begin(), label.sites.end());
  return label;
}

struct ComponentDecomposition {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> component_of;        // kept position -> component id
  std::vector<std::vector<Vertex>> components;  // kept positions, ascending
  std::size_t canonical = 0;                    // always 0: the ascending-label component
  std::vector<std::vector<std::size_t>> patterns;  // order pattern shared by each component
};

// Components of the deleted graph of a path power. There must be k! of them,
// each of size C(n,k), each with a single order pattern: particles on a path
// cannot pass one another.
inline ComponentDecomposition decompose_components(const WeightedGraph& deleted, std::size_t n,
                                                   std::size_t k, const SizeLimits& limits = {}) {
  const auto mask = deletion_mask(n, k, limits);
  if (deleted.size() != mask.kept_count) throw InvalidSizeError("graph is not a deleted " + std::to_string(n) + "^" + std::to_string(k) + " power");

  const auto raw = deleted.component_ids(1e-14);
  const std::size_t count = raw.empty() ? 0 : *std::max_element(raw.begin(), raw.end()) + 1;
  if (count != factorial(k)) {
    throw InvariantViolation("deleted power has " + std::to_string(count) + " components, expected " +
                             std::to_string(factorial(k)) + " (input is not a path)");
  }

  std::vector<std::vector<Vertex>> found(count);
  for (Vertex v = 0; v < raw.size(); ++v) found[raw[v]].push_back(v);

  std::vector<std::vector<std::size_t>> found_patterns(count);
  std::size_t canonical_raw = count;
  for (std::size_t c = 0; c < count; ++c) {
    if (found[c].size() != binomial(n, k)) {
      throw InvariantViolation("component of size " + std::to_string(found[c].size()) + ", expected " +
                               std::to_string(binomial(n, k)));
    }
    found_patterns[c] = order_pattern(mask.kept_label(found[c].front()));
    for (Vertex v : found[c]) {
      if (order_pattern(mask.kept_label(v)) != found_patterns[c]) {
        throw InvariantViolation("component mixes particle orderings (input is not a path)");
      }
    }
    if (std::is_sorted(found_patterns[c].begin(), found_patterns[c].end())) canonical_raw = c;
  }
  if (canonical_raw == count) throw InvariantViolation("no ascending-label component");

  ComponentDecomposition out;
  out.n = n;
  out.k = k;
  out.component_of.assign(raw.size(), 0);
  std::vector<std::size_t> order{canonical_raw};
  for (std::size_t c = 0; c < count; ++c) {
    if (c != canonical_raw) order.push_back(c);
  }
  for (std::size_t id = 0; id < order.size(); ++id) {
    for (Vertex v : found[order[id]]) out.component_of[v] = id;
    out.components.push_back(found[order[id]]);
    out.patterns.push_back(found_patterns[order[id]]);
  }
  return out;
}

// Max entrywise deviation between each component and the canonical one under
// the label-sorting map.
inline double component_isomorphism_check(const ComponentDecomposition& decomp, const WeightedGraph& deleted,
                                          const SizeLimits& limits = {}) {
  const auto mask = deletion_mask(decomp.n, decomp.k, limits);
  auto to_canonical = [&](Vertex v) {
    return mask.kept_position[index_of_label(sorted_label(mask.kept_label(v)))];
  };
  double worst = 0.0;
  for (const auto& members : decomp.components) {
    std::vector<Vertex> image(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      image[i] = to_canonical(members[i]);
      if (decomp.component_of[image[i]] != decomp.canonical) {
        throw InvariantViolation("sorting a label left the canonical component");
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        worst = std::max(worst, std::abs(deleted.weight(members[i], members[j]) -
                                         deleted.weight(image[i], image[j])));
      }
    }
  }
  return worst;
}

struct SignedDiagonal {
  std::vector<int> signs;  // over the kept basis
};

// Sign on each component is the parity of the permutation that sorts its labels.
inline SignedDiagonal unit_antisymmetry(const ComponentDecomposition& decomp) {
  SignedDiagonal out;
  out.signs.resize(decomp.component_of.size());
  for (std::size_t c = 0; c < decomp.components.size(); ++c) {
    const int sign = permutation_parity(decomp.patterns[c]);
    for (Vertex v : decomp.components[c]) out.signs[v] = sign;
  }
  return out;
}

// || A S - S A ||_max for the diagonal sign matrix S.
inline double commutator_check_antisymmetry(const WeightedGraph& deleted, const SignedDiagonal& signs) {
  if (signs.signs.size() != deleted.size()) throw InvalidSizeError("sign vector does not match graph");
  double worst = 0.0;
  for (Vertex u = 0; u < deleted.size(); ++u) {
    for (Vertex v = 0; v < deleted.size(); ++v) {
      worst = std::max(worst, std::abs(deleted.weight(u, v) * (signs.signs[v] - signs.signs[u])));
    }
  }
  return worst;
}

namespace detail {

template <typename LabelAt>
Partition group_by_sorted_label(std::size_t size, LabelAt&& label_at) {
  std::map<std::vector<std::size_t>, std::size_t> cell_index;
  std::vector<std::vector<Vertex>> cells;
  for (Vertex v = 0; v < size; ++v) {
    const auto key = sorted_label(label_at(v)).sites;
    auto [it, inserted] = cell_index.try_emplace(key, cells.size());
    if (inserted) cells.emplace_back();
    cells[it->second].push_back(v);
  }
  return Partition::from_cells(size, std::move(cells));
}

}  // namespace detail

// Cells are the position-permutation orbits of the kept labels, ordered by
// smallest member (the ascending label comes first in every orbit).
inline Partition indistinguishability_partition(const DeletionMask& mask) {
  return detail::group_by_sorted_label(mask.kept_count,
                                       [&](Vertex v) { return mask.kept_label(v); });
}

// Same grouping over the undeleted power; cells touching the diagonal are smaller.
inline Partition indistinguishability_partition_full(std::size_t n, std::size_t k,
                                                     const SizeLimits& limits = {}) {
  const std::size_t total = power_size(n, k, limits);
  return detail::group_by_sorted_label(total, [&](Vertex v) { return label_of_index(v, n, k); });
}

// Strictly ascending labels in lexicographic order.
inline std::vector<OccupationLabel> ascending_labels(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw InvalidSizeError("need 1 <= k <= n");
  std::vector<OccupationLabel> out;
  OccupationLabel label{std::vector<std::size_t>(k), n};
  std::iota(label.sites.begin(), label.sites.end(), std::size_t{1});
  while (true) {
    out.push_back(label);
    std::size_t i = k;
    while (i > 0 && label.sites[i - 1] == n - k + i) --i;
    if (i == 0) break;
    ++label.sites[i - 1];
    for (std::size_t j = i; j < k; ++j) label.sites[j] = label.sites[j - 1] + 1;
  }
  return out;
}

// Weighted path in its own vertex order (self-loops allowed).
inline bool is_path_family(const WeightedGraph& g) {
  const std::size_t n = g.size();
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const bool neighbours = v == u + 1;
      if (neighbours != (g.weight(u, v) != 0.0)) return false;
    }
  }
  return true;
}

struct SymmetricPowerOptions {
  // Accept inputs that are not paths; component-count checks no longer apply.
  bool exploratory = false;
};

// k-th symmetric power built directly on ascending labels: two labels are
// adjacent when they differ in one site, with the single-particle weight of
// that hop; the diagonal collects the self-loops of the occupied sites.
inline WeightedGraph symmetric_power(const WeightedGraph& g, std::size_t k,
                                     const SymmetricPowerOptions& options = {},
                                     const SizeLimits& limits = {}) {
  const std::size_t n = g.size();
  if (k < 1 || k > n) throw InvalidSizeError("symmetric power needs 1 <= k <= n");
  if (!options.exploratory && !is_path_family(g)) {
    throw PreconditionError("symmetric power of a non-path graph requires the exploratory flag");
  }
  limits.require_vertices(binomial(n, k), "symmetric power");
  const auto labels = ascending_labels(n, k);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i].sites, i);

  GraphBuilder builder(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& sites = labels[i].sites;
    double loop = 0.0;
    for (std::size_t x : sites) loop += g.weight(x - 1, x - 1);
    if (loop != 0.0) builder.set_edge(i, i, loop);
    for (std::size_t pos = 0; pos < k; ++pos) {
      for (std::size_t y = 1; y <= n; ++y) {
        if (std::find(sites.begin(), sites.end(), y) != sites.end()) continue;
        const double w = g.weight(sites[pos] - 1, y - 1);
        if (w == 0.0) continue;
        auto moved = sites;
        moved[pos] = y;
        std::sort(moved.begin(), moved.end());
        builder.set_edge(i, index.at(moved), w);
      }
    }
  }
  return std::move(builder).build();
}

// Q_I^T D A D Q_I through the partition module.
inline WeightedGraph symmetric_power_by_deletion(const WeightedGraph& g, std::size_t k,
                                                 const SizeLimits& limits = {}) {
  const auto mask = deletion_mask(g.size(), k, limits);
  const auto deleted = apply_deletion(cartesian_power(g, k, limits), mask);
  return quotient(deleted, indistinguishability_partition(mask));
}

// Quotient of the undeleted power by the permutation orbits, then removal of
// the multiply-occupied quotient vertices.
inline WeightedGraph symmetric_power_by_partition_first(const WeightedGraph& g, std::size_t k,
                                                        const SizeLimits& limits = {}) {
  const std::size_t n = g.size();
  const auto partition = indistinguishability_partition_full(n, k, limits);
  const auto collapsed = quotient(cartesian_power(g, k, limits), partition);
  std::vector<Eigen::Index> keep;
  for (std::size_t c = 0; c < partition.cell_count(); ++c) {
    if (!label_of_index(partition.cell(c).front(), n, k).has_repeat()) keep.push_back(static_cast<Eigen::Index>(c));
  }
  Matrix out(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = 0; j < keep.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = collapsed.adjacency()(keep[i], keep[j]);
    }
  }
  return WeightedGraph::from_matrix(std::move(out));
}

// (x_1..x_k) -> (n+1-x_k, ..., n+1-x_1): mirror every site, reverse the tuple.
inline OccupationLabel c_operator(const OccupationLabel& label) {
  OccupationLabel out{std::vector<std::size_t>(label.k()), label.n};
  for (std::size_t i = 0; i < label.k(); ++i) out.sites[i] = label.n + 1 - label.sites[label.k() - 1 - i];
  return out;
}

// The operator as a permutation of the identical (ascending) basis.
inline Permutation c_permutation_identical(std::size_t n, std::size_t k) {
  const auto labels = ascending_labels(n, k);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i].sites, i);
  Permutation perm(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) perm[i] = index.at(c_operator(labels[i]).sites);
  return perm;
}

// The operator on the kept basis, applied inside each component: sort the
// label, mirror it in the canonical component, restore the component's order
// pattern. Equals the plain operator whenever that one preserves components.
inline Permutation c_permutation_kept(const DeletionMask& mask) {
  Permutation perm(mask.kept_count);
  for (std::size_t v = 0; v < mask.kept_count; ++v) {
    const auto label = mask.kept_label(v);
    const auto pattern = order_pattern(label);
    const auto mirrored = c_operator(sorted_label(label));
    OccupationLabel image{std::vector<std::size_t>(mask.k), mask.n};
    for (std::size_t i = 0; i < mask.k; ++i) image.sites[i] = mirrored.sites[pattern[i]];
    perm[v] = mask.kept_position[index_of_label(image)];
  }
  return perm;
}

enum class LabelBasis { identical, kept };

inline Partition mirror_partition(const WeightedGraph& g, std::size_t n, std::size_t k, LabelBasis basis,
                                  const SizeLimits& limits = {}) {
  const Permutation perm =
      basis == LabelBasis::identical ? c_permutation_identical(n, k) : c_permutation_kept(deletion_mask(n, k, limits));
  if (perm.size() != g.size()) throw InvalidSizeError("graph does not match the label basis");
  return orbit_partition(g, perm);
}

}  // namespace pstlab
