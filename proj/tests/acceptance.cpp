#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace pstlab;

namespace {

using Grid = std::vector<std::pair<std::size_t, std::size_t>>;

const Grid kComponentGrid{{4, 2}, {5, 2}, {6, 2}, {7, 2}, {5, 3}, {6, 3}, {7, 3}, {6, 4}};
const Grid kTransferGrid{{4, 2}, {5, 2}, {6, 2}, {7, 2}, {8, 2}, {5, 3}, {6, 3}, {7, 3}};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string nk(std::size_t n, std::size_t k) { return "(" + std::to_string(n) + "," + std::to_string(k) + ")"; }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Outcome builders() {
  Outcome o;
  const double r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
  const auto p4 = weighted_path(4);
  const auto p5 = weighted_path(5);
  const double e4 = std::max({std::abs(p4.weight(0, 1) - r3), std::abs(p4.weight(1, 2) - 2.0),
                              std::abs(p4.weight(2, 3) - r3)});
  const double e5 = std::max({std::abs(p5.weight(0, 1) - 2.0), std::abs(p5.weight(1, 2) - r6),
                              std::abs(p5.weight(2, 3) - r6), std::abs(p5.weight(3, 4) - 2.0)});
  o.require(e4 <= 1e-15 && p4.edge_count() == 3, "P4 weights off by " + sci(e4));
  o.require(e5 <= 1e-15 && p5.edge_count() == 4, "P5 weights off by " + sci(e5));
  return o;
}

Outcome spectra() {
  Outcome o;
  for (std::size_t n = 2; n <= 12; ++n) {
    std::vector<double> expected;
    for (std::size_t j = 0; j < n; ++j) expected.push_back(-static_cast<double>(n - 1) + 2.0 * static_cast<double>(j));
    const double gap = oracle::max_gap(to_std(eigh(weighted_path(n)).eigenvalues), expected);
    o.require(gap <= 1e-9, "P" + std::to_string(n) + " gap " + sci(gap));
  }
  for (int d = 1; d <= 8; ++d) {
    std::vector<double> expected;
    for (int j = 0; j <= d; ++j) {
      for (std::size_t c = 0; c < binomial(static_cast<std::size_t>(d), static_cast<std::size_t>(j)); ++c) {
        expected.push_back(-d + 2.0 * j);
      }
    }
    const double gap = oracle::max_gap(to_std(eigh(hypercube(d)).eigenvalues), expected);
    o.require(gap <= 1e-9, "Q" + std::to_string(d) + " gap " + sci(gap));
  }
  return o;
}

Outcome single_particle_pst() {
  Outcome o;
  for (std::size_t n = 2; n <= 12; ++n) {
    const double m = std::abs(transfer_amplitude(eigh(weighted_path(n)), 0, n - 1, kPi / 2));
    o.require(m >= 1.0 - 1e-9, "P" + std::to_string(n) + " modulus " + sci(m));
  }
  const auto spec = eigh(simple_path(3));
  double best = 0.0;
  for (Vertex u = 0; u < 3; ++u) {
    for (Vertex v = 0; v < 3; ++v) {
      if (u != v) best = std::max(best, std::abs(transfer_amplitude(spec, u, v, kPi / 2)));
    }
  }
  o.require(best < 1.0 - 1e-9, "unweighted P3 transfers at pi/2");
  o.require(find_pst_pairs(spec, kPi / 2, 1e-9).empty(), "unweighted P3 reports PST pairs");
  return o;
}

Outcome quotient_machinery() {
  Outcome o;
  const double err = max_abs(quotient(hypercube(3), oracle::hamming_cells()).adjacency() - weighted_path(4).adjacency());
  o.require(err <= 1e-12, "Q3 Hamming quotient off by " + sci(err));

  const auto fixtures = oracle::partition_fixtures();
  std::size_t non_equitable = 0;
  for (const auto& f : fixtures) {
    if (!f.equitable) ++non_equitable;
    const auto eq = verify_theorem_equivalences(f.graph, f.partition);
    o.require(eq.agree() && eq.equitable == f.equitable, f.name + " characterisations disagree");
    const auto pm = normalized_partition_matrix(f.graph, f.partition);
    o.require(qqt_eigenvalue_check(pm, 1e-9), f.name + " QQ^T spectrum");
    if (!f.equitable) continue;
    o.require(quotient_spectrum_subset(f.graph, pm), f.name + " quotient spectrum not a sub-multiset");
    o.require(spectrum_contains(oracle::eigenvalues(f.graph.adjacency()),
                                oracle::eigenvalues(quotient(f.graph, pm).adjacency())),
              f.name + " sub-multiset against oracle");
    if (!f.graph.has_negative_weight() && f.graph.is_connected()) {
      o.require(max_eigenvalue_preservation(f.graph, pm), f.name + " largest eigenvalue");
    }
  }
  o.require(fixtures.size() >= 20, "only " + std::to_string(fixtures.size()) + " fixtures");
  o.require(non_equitable >= 5, "only " + std::to_string(non_equitable) + " non-equitable fixtures");
  if (o.pass) o.detail = std::to_string(fixtures.size()) + " fixtures, " + std::to_string(non_equitable) + " non-equitable";
  return o;
}

Outcome singleton_transport() {
  Outcome o;
  const auto g = hypercube(3);
  const auto pm = normalized_partition_matrix(g, oracle::hamming_cells());
  for (double t : {0.3, kPi / 2, 1.7}) {
    const double d = singleton_evolution_check(g, pm, 0, 7, t);
    o.require(d <= 1e-9, "t=" + std::to_string(t) + " deviation " + sci(d));
  }
  return o;
}

WeightedGraph deleted_power(std::size_t n, std::size_t k) {
  return apply_deletion(cartesian_power(weighted_path(n), k), deletion_mask(n, k));
}

Outcome components() {
  Outcome o;
  for (auto [n, k] : kComponentGrid) {
    const auto d = deleted_power(n, k);
    const auto decomp = decompose_components(d, n, k);
    o.require(decomp.components.size() == factorial(k), nk(n, k) + " component count");
    for (const auto& c : decomp.components) o.require(c.size() == binomial(n, k), nk(n, k) + " component size");
    o.require(component_isomorphism_check(decomp, d) == 0.0, nk(n, k) + " isomorphism");
  }
  return o;
}

Outcome commutator() {
  Outcome o;
  for (auto [n, k] : kComponentGrid) {
    const auto d = deleted_power(n, k);
    const double c = commutator_check_antisymmetry(d, unit_antisymmetry(decompose_components(d, n, k)));
    o.require(c <= 1e-12, nk(n, k) + " commutator " + sci(c));
  }
  return o;
}

Outcome tonks_girardeau() {
  Outcome o;
  for (auto [n, k] : kComponentGrid) {
    const auto r = verify_corollary1(n, k);
    o.require(r.max_residual <= 1e-8, nk(n, k) + " residual " + sci(r.max_residual));
    o.require(r.orthonormality_error <= 1e-8, nk(n, k) + " orthonormality " + sci(r.orthonormality_error));
    const auto formula = expand(hc_spectrum(n, k));
    const auto direct = oracle::eigenvalues(symmetric_power(weighted_path(n), k).adjacency());
    o.require(oracle::max_gap(r.predicted, formula) <= 1e-8, nk(n, k) + " states vs formula");
    o.require(oracle::max_gap(r.predicted, direct) <= 1e-8, nk(n, k) + " states vs eigensolve");
    o.require(oracle::max_gap(formula, direct) <= 1e-8, nk(n, k) + " formula vs eigensolve");
  }
  return o;
}

Outcome mirror_transfer() {
  Outcome o;
  for (auto [n, k] : kTransferGrid) {
    const auto r = verify_theorem1(n, k);
    const Check* modulus = r.find("transfer.modulus");
    const Check* phase = r.find("transfer.phase");
    o.require(modulus != nullptr && modulus->value <= 1e-9, nk(n, k) + " modulus");
    o.require(phase != nullptr && phase->value <= 1e-8, nk(n, k) + " phase off by " + sci(phase ? phase->value : INFINITY));
  }
  return o;
}

Outcome mirror_transfer_from_top() {
  Outcome o;
  for (auto [n, k] : kTransferGrid) {
    const Check* phase = verify_theorem1(n, k).find("transfer.phase_from_top");
    o.require(phase != nullptr && phase->value <= 1e-8, nk(n, k) + " phase");
  }
  return o;
}

Outcome periodicity() {
  Outcome o;
  for (auto [n, k] : kTransferGrid) {
    const auto c = verify_periodicity(n, k);
    o.require(c.value <= 1e-9, nk(n, k) + " deviation " + sci(c.value));
  }
  return o;
}

// Every second eigenvalue class counted down from the top, from an independent solve.
std::vector<double> oracle_thinning(const WeightedGraph& g) {
  const auto full = oracle::eigenvalues(g.adjacency());
  const double top = full.back();
  std::vector<double> kept;
  for (double x : full) {
    if (std::lround(top - x) % 4 == 0) kept.push_back(x);
  }
  return kept;
}

double quotient_period_deviation(const WeightedGraph& q, Complex phase) {
  const CMatrix u = evolve(eigh(q), kPi / 2).matrix;
  return (u - phase * CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Outcome mirror_quotient(bool from_top) {
  Outcome o;
  for (auto [n, k] : kTransferGrid) {
    const auto c = HcPathCase::build(n, k);
    const auto q = quotient(c.graph, orbit_partition(c.graph, c.mirror));
    const double gap = oracle::max_gap(oracle::eigenvalues(q.adjacency()), oracle_thinning(c.graph));
    o.require(gap <= 1e-8, nk(n, k) + " thinned spectrum gap " + sci(gap));
    const Complex phase = from_top ? transfer_phase_from_top(n, k) : predicted_transfer_phase(n, k);
    const double dev = quotient_period_deviation(q, phase);
    o.require(dev <= 1e-9, nk(n, k) + " quotient period deviation " + sci(dev));
  }
  const auto g = symmetric_power(weighted_path(4), 2);
  const auto claw = quotient(g, mirror_partition(g, 4, 2, LabelBasis::identical));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = 2.0;
  expected(1, 2) = expected(2, 1) = std::sqrt(6.0);
  expected(1, 3) = expected(3, 1) = std::sqrt(6.0);
  o.require(max_abs(claw.adjacency() - expected) <= 1e-12, "(4,2) quotient is not the (2,sqrt6,sqrt6) claw");
  o.require(oracle::max_gap(oracle::eigenvalues(claw.adjacency()), {-4, 0, 0, 4}) <= 1e-12, "(4,2) claw spectrum");
  return o;
}

Outcome path_collapse() {
  Outcome o;
  const auto g = symmetric_power(weighted_path(4), 2);
  const auto p = oracle::cells(6, {{0}, {1}, {2, 3}, {4}, {5}});
  o.require(check_equitable(g, p).equitable, "partition not equitable");
  if (!o.pass) return o;
  const double err = max_abs(quotient(g, p).adjacency() - weighted_path(5).adjacency());
  o.require(err <= 1e-12, "quotient off weighted P5 by " + sci(err));
  return o;
}

Outcome symmetric_power_routes() {
  Outcome o;
  for (auto [n, k] : kComponentGrid) {
    const auto direct = symmetric_power(weighted_path(n), k).adjacency();
    const auto deletion = symmetric_power_by_deletion(weighted_path(n), k).adjacency();
    const auto first = symmetric_power_by_partition_first(weighted_path(n), k).adjacency();
    o.require(max_abs(deletion - first) <= 1e-12, nk(n, k) + " deletion vs partition first");
    o.require(max_abs(direct - deletion) <= 1e-12, nk(n, k) + " direct vs deletion");
  }
  return o;
}

Outcome propagator_properties() {
  Outcome o;
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> size(2, 9);
  std::uniform_real_distribution<double> time(-6.0, 6.0);
  const int cases = 120;
  double worst_unitary = 0.0, worst_group = 0.0, worst_identity = 0.0;
  for (int i = 0; i < cases; ++i) {
    const auto spec = eigh(oracle::random_graph(rng, size(rng)));
    const double t = time(rng), s = time(rng);
    const CMatrix ut = evolve(spec, t).matrix;
    const CMatrix us = evolve(spec, s).matrix;
    const CMatrix u0 = evolve(spec, 0.0).matrix;
    worst_unitary = std::max(worst_unitary, unitarity_error(ut));
    worst_group = std::max(worst_group, (ut * us - evolve(spec, t + s).matrix).cwiseAbs().maxCoeff());
    worst_identity = std::max(worst_identity, (u0 - CMatrix::Identity(u0.rows(), u0.cols())).cwiseAbs().maxCoeff());
  }
  o.require(worst_unitary <= 1e-8, "unitarity " + sci(worst_unitary));
  o.require(worst_group <= 1e-8, "group law " + sci(worst_group));
  o.require(worst_identity <= 1e-8, "U(0) " + sci(worst_identity));
  if (o.pass) o.detail = std::to_string(cases) + " cases";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string id;
    std::string title;
    std::function<Outcome()> run;
    bool counted = true;
  };
  const std::vector<Criterion> criteria{
      {"1", "builder fidelity", builders},
      {"2", "path and hypercube spectra", spectra},
      {"3", "single-particle transfer on weighted paths", single_particle_pst},
      {"4", "quotient machinery on fixtures", quotient_machinery},
      {"5", "singleton transport on the cube", singleton_transport},
      {"6", "hard-core components", components},
      {"7", "antisymmetry commutes with hopping", commutator},
      {"8", "Tonks-Girardeau states and spectrum", tonks_girardeau},
      {"9", "mirror transfer with phase exp(-i pi k(k-n)/2)", mirror_transfer},
      {"10", "identity at pi", periodicity},
      {"11", "mirror quotient thinning and periodicity", [] { return mirror_quotient(false); }},
      {"12", "(4,2) path collapse to weighted P5", path_collapse},
      {"13", "symmetric power routes agree", symmetric_power_routes},
      {"14", "propagator properties", propagator_properties},
      {"9*", "mirror transfer with phase exp(-i pi lambda_max/2)", mirror_transfer_from_top, false},
      {"11*", "mirror quotient periodicity with phase exp(-i pi lambda_max/2)",
       [] { return mirror_quotient(true); }, false},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const char* tag = o.pass ? "PASS" : (c.counted ? "FAIL" : "INFO-FAIL");
    if (!c.counted && o.pass) tag = "INFO-PASS";
    std::printf("%-9s [%s] %s%s%s\n", tag, c.id.c_str(), c.title.c_str(), o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    if (c.counted && !o.pass) ++failed;
  }
  std::printf("%d of 14 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
