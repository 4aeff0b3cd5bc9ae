#pragma once

// Tonks-Girardeau construction: hard-core boson eigenstates on a path are
// sign-corrected free-fermion Slater determinants built from single-particle
// eigenvectors, and the spectrum is the set of sums of k distinct
// single-particle eigenvalues.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "pstlab/graph.hpp"
#include "pstlab/hardcore.hpp"
#include "pstlab/partition.hpp"
#include "pstlab/products.hpp"
#include "pstlab/spectral.hpp"

namespace pstlab {

inline constexpr double kEigenClassTol = 1e-6;

// Strictly ascending 0-based indices into the ascending single-particle spectrum.
struct ModeTuple {
  std::vector<std::size_t> modes;

  std::size_t sum() const { return std::accumulate(modes.begin(), modes.end(), std::size_t{0}); }
  std::size_t odd_count() const {
    return static_cast<std::size_t>(std::count_if(modes.begin(), modes.end(), [](std::size_t m) { return m % 2 == 1; }));
  }
};

inline std::vector<ModeTuple> mode_tuples(std::size_t n, std::size_t k) {
  std::vector<ModeTuple> out;
  for (const auto& label : ascending_labels(n, k)) {
    ModeTuple t;
    for (std::size_t x : label.sites) t.modes.push_back(x - 1);
    out.push_back(std::move(t));
  }
  return out;
}

enum class Basis { power, kept, identical };

struct StateVector {
  CVector amplitudes;
  Basis basis = Basis::power;
};

// Antisymmetrised product of single-particle eigenvectors over the n^k power
// basis, scaled by 1/sqrt(k!) so it has unit norm.
inline StateVector fermion_state(const SpectralDecomposition& path, const ModeTuple& tuple,
                                 const SizeLimits& limits = {}) {
  const std::size_t n = path.size();
  const std::size_t k = tuple.modes.size();
  if (k == 0) throw InvalidSizeError("mode tuple is empty");
  for (std::size_t i = 0; i < k; ++i) {
    if (tuple.modes[i] >= n || (i > 0 && tuple.modes[i] <= tuple.modes[i - 1])) {
      throw PreconditionError("mode tuple must be strictly ascending within [0, n)");
    }
  }
  const std::size_t total = power_size(n, k, limits);
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::pair<std::vector<std::size_t>, int>> signed_perms;
  do {
    signed_perms.emplace_back(perm, permutation_parity(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  const double norm = 1.0 / std::sqrt(static_cast<double>(factorial(k)));
  StateVector out{CVector::Zero(static_cast<Eigen::Index>(total)), Basis::power};
  for (std::size_t index = 0; index < total; ++index) {
    const auto label = label_of_index(index, n, k);
    double amplitude = 0.0;
    for (const auto& [p, sign] : signed_perms) {
      double term = sign;
      for (std::size_t j = 0; j < k; ++j) {
        term *= path.eigenvectors(static_cast<Eigen::Index>(label.sites[j] - 1),
                                  static_cast<Eigen::Index>(tuple.modes[p[j]]));
      }
      amplitude += term;
    }
    out.amplitudes(static_cast<Eigen::Index>(index)) = norm * amplitude;
  }
  return out;
}

inline StateVector restrict_to_kept(const StateVector& state, const DeletionMask& mask) {
  if (state.basis != Basis::power || static_cast<std::size_t>(state.amplitudes.size()) != mask.keep.size()) {
    throw InvalidSizeError("restriction needs a state over the full power basis");
  }
  StateVector out{CVector(static_cast<Eigen::Index>(mask.kept_count)), Basis::kept};
  for (std::size_t i = 0; i < mask.kept_count; ++i) {
    out.amplitudes(static_cast<Eigen::Index>(i)) = state.amplitudes(static_cast<Eigen::Index>(mask.kept_indices[i]));
  }
  return out;
}

// Multiplies each kept amplitude by its component sign. Accepts a power-basis
// state (restricted first) or a kept-basis state.
inline StateVector tg_boson_state(const StateVector& fermion, const SignedDiagonal& signs, const DeletionMask& mask) {
  StateVector out = fermion.basis == Basis::power ? restrict_to_kept(fermion, mask) : fermion;
  if (out.basis != Basis::kept || static_cast<std::size_t>(out.amplitudes.size()) != signs.signs.size()) {
    throw InvalidSizeError("sign operator does not match the state's basis");
  }
  for (Eigen::Index i = 0; i < out.amplitudes.size(); ++i) out.amplitudes(i) *= signs.signs[static_cast<std::size_t>(i)];
  return out;
}

inline StateVector project_identical(const StateVector& kept, const PartitionMatrix& indistinguishable) {
  if (kept.basis != Basis::kept || kept.amplitudes.size() != indistinguishable.q.rows()) {
    throw InvalidSizeError("projection needs a kept-basis state matching the partition");
  }
  return {indistinguishable.q.transpose().cast<Complex>() * kept.amplitudes, Basis::identical};
}

struct SpectrumClass {
  double eigenvalue = 0.0;
  std::size_t degeneracy = 0;
};

// Eigenvalues k(k-n) + 2(i-1), i = 1..k(n-k)+1, of k hard-core bosons on the
// hypercubically weighted path, with multiplicity = number of k-subsets of
// {0..n-1} with the matching sum.
inline std::vector<SpectrumClass> hc_spectrum(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw InvalidSizeError("need 1 <= k <= n");
  const std::size_t max_sum = k * (n - 1);
  // ways[j][s]: j distinct values from those seen so far, summing to s.
  std::vector<std::vector<std::size_t>> ways(k + 1, std::vector<std::size_t>(max_sum + 1, 0));
  ways[0][0] = 1;
  for (std::size_t value = 0; value < n; ++value) {
    for (std::size_t j = k; j >= 1; --j) {
      for (std::size_t s = max_sum; s >= value; --s) {
        ways[j][s] += ways[j - 1][s - value];
        if (s == 0) break;
      }
    }
  }
  const double base = -static_cast<double>(k) * static_cast<double>(n - 1);
  std::vector<SpectrumClass> out;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    if (ways[k][s] > 0) out.push_back({base + 2.0 * static_cast<double>(s), ways[k][s]});
  }
  return out;
}

inline std::vector<double> expand(const std::vector<SpectrumClass>& classes) {
  std::vector<double> out;
  for (const auto& c : classes) out.insert(out.end(), c.degeneracy, c.eigenvalue);
  return out;
}

// (-1)^(odd modes + floor(k/2)).
inline int parity_sign_rule(const ModeTuple& tuple) {
  const std::size_t exponent = tuple.odd_count() + tuple.modes.size() / 2;
  return exponent % 2 == 0 ? 1 : -1;
}

struct HardcoreSystem {
  std::size_t n = 0;
  std::size_t k = 0;
  WeightedGraph path;
  SpectralDecomposition path_spectrum;
  DeletionMask mask;
  WeightedGraph deleted;
  ComponentDecomposition components;
  SignedDiagonal signs;
  PartitionMatrix indistinguishable;
  WeightedGraph identical;
};

// Everything the Tonks-Girardeau checks need for k bosons on the weighted path.
inline HardcoreSystem build_hardcore_system(std::size_t n, std::size_t k, const SizeLimits& limits = {}) {
  HardcoreSystem sys;
  sys.n = n;
  sys.k = k;
  sys.path = weighted_path(n, limits);
  sys.path_spectrum = eigh(sys.path);
  sys.mask = deletion_mask(n, k, limits);
  sys.deleted = apply_deletion(cartesian_power(sys.path, k, limits), sys.mask);
  sys.components = decompose_components(sys.deleted, n, k, limits);
  sys.signs = unit_antisymmetry(sys.components);
  sys.indistinguishable = normalized_partition_matrix(sys.deleted, indistinguishability_partition(sys.mask));
  sys.identical = symmetric_power(sys.path, k, {}, limits);
  return sys;
}

struct Corollary1Result {
  std::size_t states = 0;
  double max_residual = 0.0;       // max ||A x - lambda x||
  double orthonormality_error = 0.0;
  std::vector<double> predicted;   // sum of single-particle eigenvalues per tuple, ascending
};

inline Corollary1Result verify_corollary1(const HardcoreSystem& sys, const SizeLimits& limits = {}) {
  const auto tuples = mode_tuples(sys.n, sys.k);
  const auto d = static_cast<Eigen::Index>(tuples.size());
  CMatrix projected(sys.identical.adjacency().rows(), d);
  Corollary1Result out;
  out.states = tuples.size();
  const CMatrix a = sys.identical.adjacency().cast<Complex>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& tuple = tuples[static_cast<std::size_t>(i)];
    const auto boson = tg_boson_state(fermion_state(sys.path_spectrum, tuple, limits), sys.signs, sys.mask);
    const CVector x = project_identical(boson, sys.indistinguishable).amplitudes;
    double lambda = 0.0;
    for (std::size_t m : tuple.modes) lambda += sys.path_spectrum.eigenvalues(static_cast<Eigen::Index>(m));
    out.max_residual = std::max(out.max_residual, (a * x - lambda * x).norm());
    out.predicted.push_back(lambda);
    projected.col(i) = x;
  }
  out.orthonormality_error = (projected.adjoint() * projected - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  std::sort(out.predicted.begin(), out.predicted.end());
  return out;
}

inline Corollary1Result verify_corollary1(std::size_t n, std::size_t k, const SizeLimits& limits = {}) {
  return verify_corollary1(build_hardcore_system(n, k, limits), limits);
}

struct EigenClass {
  double eigenvalue = 0.0;
  Matrix basis;  // orthonormal columns spanning the eigenspace
};

// Groups an ascending spectrum into eigenspaces; values closer than tol merge.
inline std::vector<EigenClass> eigen_classes(const SpectralDecomposition& spec, double tol = kEigenClassTol) {
  std::vector<EigenClass> out;
  const auto n = spec.eigenvalues.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && spec.eigenvalues(end) - spec.eigenvalues(end - 1) <= tol) ++end;
    EigenClass c;
    c.eigenvalue = spec.eigenvalues.segment(start, end - start).mean();
    c.basis = spec.eigenvectors.middleCols(start, end - start);
    out.push_back(std::move(c));
    start = end;
  }
  return out;
}

// max over vertices v and eigenvalue classes c of
//   | P_c |C v> - s_c P_c |v> |_max,   s_c = lowest_class_sign * (-1)^c,
// on the identical hard-core graph of the weighted path. P_c is the class
// projector, so degenerate eigenspaces are compared as subspaces.
inline double expansion_sign_residual(std::size_t n, std::size_t k, int lowest_class_sign,
                                      const SizeLimits& limits = {}) {
  const auto graph = symmetric_power(weighted_path(n, limits), k, {}, limits);
  const auto classes = eigen_classes(eigh(graph));
  const auto mirror = c_permutation_identical(n, k);
  double worst = 0.0;
  int sign = lowest_class_sign;
  for (const auto& c : classes) {
    const Matrix projector = c.basis * c.basis.transpose();
    for (Vertex v = 0; v < mirror.size(); ++v) {
      const auto vi = static_cast<Eigen::Index>(v);
      const auto ui = static_cast<Eigen::Index>(mirror[v]);
      worst = std::max(worst, (projector.col(ui) - sign * projector.col(vi)).cwiseAbs().maxCoeff());
    }
    sign = -sign;
  }
  return worst;
}

}  // namespace pstlab
