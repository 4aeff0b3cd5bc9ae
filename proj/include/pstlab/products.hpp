#pragma once

// Cartesian products and powers. A vertex of G^k is an occupation label
// (x_1, ..., x_k) over the single-particle graph, laid out in mixed-radix
// row-major order: index = sum (x_i - 1) n^(k - i).

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "pstlab/graph.hpp"
#include "pstlab/spectral.hpp"

namespace pstlab {

struct OccupationLabel {
  std::vector<std::size_t> sites;  // 1-based sites
  std::size_t n = 0;

  std::size_t k() const noexcept { return sites.size(); }

  bool has_repeat() const {
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (std::size_t j = i + 1; j < sites.size(); ++j) {
        if (sites[i] == sites[j]) return true;
      }
    }
    return false;
  }

  bool is_ascending() const { return std::is_sorted(sites.begin(), sites.end()) && !has_repeat(); }

  friend bool operator==(const OccupationLabel&, const OccupationLabel&) = default;
};

inline std::string to_string(const OccupationLabel& label) {
  std::string out = "(";
  for (std::size_t i = 0; i < label.sites.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(label.sites[i]);
  }
  return out + ")";
}

inline std::ostream& operator<<(std::ostream& os, const OccupationLabel& label) {
  return os << to_string(label);
}

// n^k, or throws if that exceeds the cap.
inline std::size_t power_size(std::size_t n, std::size_t k, const SizeLimits& limits = {}) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (size > limits.max_vertices / std::max<std::size_t>(n, 1)) {
      throw ResourceError("Cartesian power " + std::to_string(n) + "^" + std::to_string(k) +
                          " exceeds the cap of " + std::to_string(limits.max_vertices));
    }
    size *= n;
  }
  limits.require_vertices(size, "Cartesian power");
  return size;
}

inline OccupationLabel label_of_index(std::size_t index, std::size_t n, std::size_t k) {
  if (n == 0 || k == 0) throw InvalidSizeError("labels need n >= 1 and k >= 1");
  OccupationLabel label{std::vector<std::size_t>(k), n};
  for (std::size_t i = k; i-- > 0;) {
    label.sites[i] = index % n + 1;
    index /= n;
  }
  if (index != 0) throw OutOfRangeError("index out of range for n^k labels");
  return label;
}

inline std::size_t index_of_label(const OccupationLabel& label) {
  std::size_t index = 0;
  for (std::size_t x : label.sites) {
    if (x < 1 || x > label.n) throw OutOfRangeError("site " + std::to_string(x) + " out of range");
    index = index * label.n + (x - 1);
  }
  return index;
}

inline WeightedGraph cartesian_product(const WeightedGraph& g, const WeightedGraph& h,
                                       const SizeLimits& limits = {}) {
  limits.require_vertices(g.size() * h.size(), "Cartesian product");
  return WeightedGraph::from_matrix(detail::kronecker_sum(g.adjacency(), h.adjacency()));
}

inline WeightedGraph cartesian_power(const WeightedGraph& g, std::size_t k,
                                     const SizeLimits& limits = {}) {
  if (k < 1) throw InvalidSizeError("Cartesian power needs k >= 1");
  power_size(g.size(), k, limits);
  WeightedGraph out = g;
  for (std::size_t i = 1; i < k; ++i) out = cartesian_product(g, out, limits);
  return out;
}

inline CMatrix kronecker_power(const CMatrix& u, std::size_t k) {
  CMatrix out = u;
  for (std::size_t i = 1; i < k; ++i) {
    CMatrix next(out.rows() * u.rows(), out.cols() * u.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block(r * u.rows(), c * u.cols(), u.rows(), u.cols()) = out(r, c) * u;
      }
    }
    out = std::move(next);
  }
  return out;
}

// max |U_{G^k}(t) - U_G(t)^{(x)k}|.
inline double propagator_factorization_check(const WeightedGraph& g, std::size_t k, double t,
                                             const SizeLimits& limits = {}) {
  const WeightedGraph power = cartesian_power(g, k, limits);
  const CMatrix joint = evolve(eigh(power), t).matrix;
  const CMatrix factored = kronecker_power(evolve(eigh(g), t).matrix, k);
  return (joint - factored).cwiseAbs().maxCoeff();
}

// Multiset of all k-fold sums of the given values, ascending.
inline std::vector<double> kfold_sums(const std::vector<double>& values, std::size_t k) {
  std::vector<double> sums{0.0};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> next;
    next.reserve(sums.size() * values.size());
    for (double s : sums) {
      for (double v : values) next.push_back(s + v);
    }
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

}  // namespace pstlab
