#pragma once

// Symmetric eigendecomposition and the continuous-time quantum walk
// U(t) = exp(-i t A) built from it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pstlab/graph.hpp"

namespace pstlab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEigTol = 1e-9;
inline constexpr double kPstTol = 1e-9;

struct SpectralDecomposition {
  Vector eigenvalues;  // ascending
  Matrix eigenvectors; // column j pairs with eigenvalues[j]
  int sweeps = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

struct JacobiOptions {
  double relative_threshold = 1e-13;
  int max_sweeps = 100;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index q = 0; q < a.cols(); ++q) {
    for (Eigen::Index p = 0; p < q; ++p) sum += 2.0 * a(p, q) * a(p, q);
  }
  return std::sqrt(sum);
}

// Largest-magnitude entry positive; near-ties resolved toward the lowest index.
inline void fix_sign(Eigen::Ref<Vector> column) {
  const double largest = column.cwiseAbs().maxCoeff();
  if (largest == 0.0) return;
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    if (std::abs(column(i)) >= largest * (1.0 - 1e-10)) {
      if (column(i) < 0.0) column = -column;
      return;
    }
  }
}

}  // namespace detail

// Cyclic Jacobi. Converged when the off-diagonal Frobenius norm drops to
// relative_threshold * ||A||_F.
inline SpectralDecomposition jacobi_eigh(const Matrix& input, const JacobiOptions& options = {}) {
  if (input.rows() != input.cols()) throw InvalidSizeError("eigh needs a square matrix");
  const Eigen::Index n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::Identity(n, n);
  const double threshold = options.relative_threshold * a.norm();

  int sweep = 0;
  for (;; ++sweep) {
    if (detail::off_diagonal_norm(a) <= threshold) break;
    if (sweep >= options.max_sweeps) {
      throw NumericalError("Jacobi eigensolver did not converge in " +
                           std::to_string(options.max_sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // A <- J^T A J with J the (p,q) rotation [c s; -s c].
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.eigenvalues(j) = a(src, src);
    out.eigenvectors.col(j) = v.col(src);
    detail::fix_sign(out.eigenvectors.col(j));
  }
  return out;
}

inline SpectralDecomposition eigh(const WeightedGraph& g, const JacobiOptions& options = {}) {
  return jacobi_eigh(g.adjacency(), options);
}

// max |A Z - Z Lambda| and max |Z^T Z - I|.
inline double eigen_residual(const Matrix& a, const SpectralDecomposition& spec) {
  return (a * spec.eigenvectors - spec.eigenvectors * spec.eigenvalues.asDiagonal())
      .cwiseAbs()
      .maxCoeff();
}

inline double orthonormality_error(const Matrix& z) {
  const auto n = z.cols();
  return (z.transpose() * z - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

struct Propagator {
  CMatrix matrix;
  double time = 0.0;
};

inline Propagator evolve(const SpectralDecomposition& spec, double t) {
  if (!std::isfinite(t)) throw PreconditionError("evolution time must be finite");
  const Eigen::Index n = spec.eigenvalues.size();
  CVector phases(n);
  for (Eigen::Index j = 0; j < n; ++j) phases(j) = std::exp(Complex(0.0, -t * spec.eigenvalues(j)));
  const CMatrix z = spec.eigenvectors.cast<Complex>();
  return {z * phases.asDiagonal() * z.transpose(), t};
}

inline double unitarity_error(const CMatrix& u) {
  const auto n = u.rows();
  return (u * u.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

// <v| U(t) |u>, summed straight from the eigenpairs.
inline Complex transfer_amplitude(const SpectralDecomposition& spec, Vertex u, Vertex v, double t) {
  const auto n = spec.size();
  if (u >= n || v >= n) throw OutOfRangeError("vertex out of range for transfer amplitude");
  Complex sum{0.0, 0.0};
  const auto ui = static_cast<Eigen::Index>(u);
  const auto vi = static_cast<Eigen::Index>(v);
  for (Eigen::Index j = 0; j < spec.eigenvalues.size(); ++j) {
    sum += std::exp(Complex(0.0, -t * spec.eigenvalues(j))) * spec.eigenvectors(vi, j) *
           spec.eigenvectors(ui, j);
  }
  return sum;
}

struct PstPair {
  Vertex u = 0;
  Vertex v = 0;
  Complex phase;  // U(t)|u> = phase |v>
};

// All pairs u < v with |<v|U(t)|u>| >= 1 - tol.
inline std::vector<PstPair> find_pst_pairs(const SpectralDecomposition& spec, double t,
                                           double tol = kPstTol) {
  if (!(tol > 0.0 && tol < 0.1)) throw PreconditionError("PST tolerance must lie in (0, 0.1)");
  const CMatrix u = evolve(spec, t).matrix;
  std::vector<PstPair> pairs;
  for (Eigen::Index a = 0; a < u.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < u.rows(); ++b) {
      if (std::abs(u(b, a)) >= 1.0 - tol) {
        pairs.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), u(b, a)});
      }
    }
  }
  return pairs;
}

// The phase g with U(t) = g I entrywise within tol, if there is one.
inline std::optional<Complex> is_periodic(const SpectralDecomposition& spec, double t,
                                          double tol = kPstTol) {
  if (!(tol > 0.0 && tol < 0.1)) throw PreconditionError("periodicity tolerance must lie in (0, 0.1)");
  const CMatrix u = evolve(spec, t).matrix;
  const Complex phase = u(0, 0);
  const auto n = u.rows();
  if ((u - phase * CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return phase;
}

struct RatioCondition {
  bool holds = false;
  // Some snap error landed in [tol/10, tol): the verdict is close to the line.
  bool heuristic = false;
  double max_snap_error = 0.0;
  std::int64_t common_denominator = 1;
  std::int64_t max_denominator = 0;
};

namespace detail {

struct Snap {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double error = 0.0;
  bool ok = false;
};

// First continued-fraction convergent of x within tol with den <= max_den.
inline Snap snap_rational(double x, double tol, std::int64_t max_den) {
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  Snap best{h, k, std::abs(x - static_cast<double>(h)), false};
  for (int iter = 0; iter < 64; ++iter) {
    best = {h, k, std::abs(x - static_cast<double>(h) / static_cast<double>(k)), false};
    if (best.error < tol) {
      best.ok = true;
      return best;
    }
    if (frac < 1e-300) break;
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    frac = inv - std::floor(inv);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_den || k_next <= 0) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return best;
}

}  // namespace detail

// Rationality of every ratio of eigenvalue differences. Each distinct
// eigenvalue is mapped to (l_i - l_0)/(l_1 - l_0) and snapped to a rational.
// The denominator bound shrinks with tol so that an irrational ratio is not
// accepted by a chance convergent: min(1e6, sqrt(1/(100 tol))).
inline RatioCondition ratio_condition(std::span<const double> eigenvalues, double tol = kEigTol) {
  if (!(tol > 0.0)) throw PreconditionError("ratio condition tolerance must be positive");
  std::vector<double> values(eigenvalues.begin(), eigenvalues.end());
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  for (double x : values) {
    if (distinct.empty() || x - distinct.back() > tol) distinct.push_back(x);
  }
  if (distinct.size() < 2) throw PreconditionError("ratio condition needs two distinct eigenvalues");

  RatioCondition result;
  result.max_denominator = std::min<std::int64_t>(
      1000000, static_cast<std::int64_t>(std::floor(std::sqrt(1.0 / (100.0 * tol)))));
  result.max_denominator = std::max<std::int64_t>(result.max_denominator, 1);
  result.holds = true;
  const double gap = distinct[1] - distinct[0];
  for (std::size_t i = 2; i < distinct.size(); ++i) {
    const double ratio = (distinct[i] - distinct[0]) / gap;
    const auto snap = detail::snap_rational(ratio, tol, result.max_denominator);
    result.max_snap_error = std::max(result.max_snap_error, snap.error);
    if (!snap.ok) {
      result.holds = false;
      continue;
    }
    if (snap.error >= tol / 10.0) result.heuristic = true;
    result.common_denominator = std::lcm(result.common_denominator, snap.den);
  }
  return result;
}

}  // namespace pstlab
