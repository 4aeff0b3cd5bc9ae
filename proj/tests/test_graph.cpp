#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace pstlab;

TEST(WeightedPath, FourVertices) {
  const auto g = weighted_path(4);
  EXPECT_EQ(g.weight(0, 1), std::sqrt(3.0));
  EXPECT_EQ(g.weight(1, 2), 2.0);
  EXPECT_EQ(g.weight(2, 3), std::sqrt(3.0));
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(WeightedPath, TwoAndFive) {
  EXPECT_EQ(weighted_path(2).weight(0, 1), 1.0);
  const auto g = weighted_path(5);
  EXPECT_EQ(g.weight(0, 1), 2.0);
  EXPECT_EQ(g.weight(1, 2), std::sqrt(6.0));
  EXPECT_EQ(g.weight(2, 3), std::sqrt(6.0));
  EXPECT_EQ(g.weight(3, 4), 2.0);
}

TEST(WeightedPath, RejectsTiny) {
  EXPECT_THROW(weighted_path(1), InvalidSizeError);
  EXPECT_THROW(weighted_path(0), InvalidSizeError);
  EXPECT_THROW(simple_path(1), InvalidSizeError);
}

TEST(SimplePath, UnitWeights) {
  const auto g = simple_path(3);
  EXPECT_EQ(g.weight(0, 1), 1.0);
  EXPECT_EQ(g.weight(1, 2), 1.0);
  EXPECT_EQ(g.weight(0, 2), 0.0);
}

TEST(Cycle, FourVertices) {
  const auto g = cycle(4);
  EXPECT_EQ(g.edge_count(), 4u);
  for (Vertex v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 2u);
}

TEST(Hypercube, BaseCaseIsP2) { EXPECT_EQ(hypercube(1), simple_path(2)); }

TEST(Hypercube, Cube) {
  const auto g = hypercube(3);
  EXPECT_EQ(g.size(), 8u);
  EXPECT_EQ(g.edge_count(), 12u);
  for (Vertex v = 0; v < 8; ++v) EXPECT_EQ(g.degree(v), 3u);
  // Neighbours differ in one bit.
  for (Vertex u = 0; u < 8; ++u) {
    for (Vertex v = 0; v < 8; ++v) {
      EXPECT_EQ(g.weight(u, v) != 0.0, __builtin_popcount(static_cast<unsigned>(u ^ v)) == 1);
    }
  }
}

TEST(Hypercube, CapAndDimension) {
  EXPECT_THROW(hypercube(0), InvalidSizeError);
  EXPECT_THROW(hypercube(15), ResourceError);
  SizeLimits small;
  small.max_vertices = 100;
  EXPECT_THROW(hypercube(7, small), ResourceError);
  EXPECT_NO_THROW(hypercube(6, small));
}

TEST(WeightedGraph, FromMatrixValidates) {
  Matrix a(2, 2);
  a << 0, 1, 2, 0;
  EXPECT_THROW(WeightedGraph::from_matrix(a), AsymmetryError);
  a << 0, NAN, NAN, 0;
  EXPECT_THROW(WeightedGraph::from_matrix(a), NonFiniteError);
  EXPECT_THROW(WeightedGraph::from_matrix(Matrix(2, 3)), InvalidSizeError);
  EXPECT_THROW(WeightedGraph::from_matrix(Matrix(0, 0)), InvalidSizeError);
}

TEST(GraphBuilder, RangeAndFiniteness) {
  GraphBuilder b(3);
  EXPECT_THROW(b.set_edge(0, 3, 1.0), OutOfRangeError);
  EXPECT_THROW(b.set_edge(0, 1, INFINITY), NonFiniteError);
  EXPECT_THROW(GraphBuilder(0), InvalidSizeError);
}

TEST(WeightedGraph, Components) {
  GraphBuilder b(5);
  b.set_edge(0, 1, 1.0).set_edge(3, 4, 1.0).set_edge(2, 2, 4.0);
  const auto g = std::move(b).build();
  EXPECT_EQ(g.component_ids(), (std::vector<std::size_t>{0, 0, 1, 2, 2}));
  EXPECT_FALSE(g.is_connected());
  EXPECT_TRUE(weighted_path(6).is_connected());
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(Reflection, Examples) {
  EXPECT_EQ(reflection_permutation(4), (Permutation{3, 2, 1, 0}));
  EXPECT_EQ(reflection_permutation(5)[2], 2u);
  EXPECT_EQ(conjugate(weighted_path(4).adjacency(), reflection_permutation(4)), weighted_path(4).adjacency());
  EXPECT_EQ(automorphism_defect(weighted_path(9), reflection_permutation(9)), 0.0);
  EXPECT_GT(automorphism_defect(weighted_path(4), Permutation{1, 0, 2, 3}), 0.5);
}

TEST(Reflection, PermutationCheck) {
  EXPECT_TRUE(is_permutation_of({2, 0, 1}, 3));
  EXPECT_FALSE(is_permutation_of({0, 0, 1}, 3));
  EXPECT_FALSE(is_permutation_of({0, 1}, 3));
  EXPECT_FALSE(is_permutation_of({0, 1, 3}, 3));
}

TEST(Builders, SymmetricNonNegativeProperty) {
  for (std::size_t n = 2; n <= 12; ++n) {
    const Matrix a = weighted_path(n).adjacency();
    EXPECT_TRUE(a == a.transpose());
    EXPECT_GE(a.minCoeff(), 0.0);
  }
  for (int d = 1; d <= 6; ++d) {
    const Matrix a = hypercube(d).adjacency();
    EXPECT_TRUE(a == a.transpose());
  }
}

TEST(SizeLimits, FromEnvironment) {
  ::setenv("PSTLAB_CAP", "77", 1);
  EXPECT_EQ(SizeLimits::from_env().max_vertices, 77u);
  ::unsetenv("PSTLAB_CAP");
  EXPECT_EQ(SizeLimits::from_env().max_vertices, 5000u);
}

TEST(GraphIo, RoundTripBitExact) {
  for (std::size_t n : {2u, 4u, 7u, 12u}) {
    const auto g = weighted_path(n);
    EXPECT_EQ(load_graph(save_graph(g)), g);
  }
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto g = oracle::random_graph(rng, 6);
    EXPECT_EQ(load_graph(save_graph(g)), g);
  }
}

TEST(GraphIo, AsymmetricDuplicate) {
  EXPECT_THROW(load_graph(R"({"n": 2, "edges": [[1, 2, 1.0], [2, 1, 2.0]]})"), AsymmetryError);
}

TEST(GraphIo, ConsistentDuplicateIsRejected) {
  EXPECT_THROW(load_graph(R"({"n": 2, "edges": [[1, 2, 1.0], [2, 1, 1.0]]})"), ParseError);
}

TEST(GraphIo, SelfLoop) {
  const auto g = load_graph(R"({"n": 3, "edges": [[1, 2, 1.0], [3, 3, 5.0]]})");
  EXPECT_EQ(g.weight(2, 2), 5.0);
  EXPECT_EQ(load_graph(save_graph(g)), g);
}

TEST(GraphIo, ParseErrorsCarryLines) {
  try {
    load_graph("{\"n\": 2,\n \"edges\": [\n [1, 2, 1.0],,\n]}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(GraphIo, SemanticErrors) {
  EXPECT_THROW(load_graph(R"({"edges": []})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n": 0, "edges": []})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n": 2, "edges": [[1, 3, 1.0]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n": 2, "edges": [[1, 2]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n": 2, "edges": [[1, 2, "x"]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n": 2, "edges": [[0, 1, 1.0]]})"), ParseError);
}

TEST(PartitionIo, RoundTrip) {
  const auto p = oracle::hamming_cells();
  const auto back = load_partition(save_partition(p));
  EXPECT_EQ(back.cells(), p.cells());
  EXPECT_THROW(load_partition(R"({"n": 3, "cells": [[1, 2], [2, 3]]})"), ParseError);
  EXPECT_THROW(load_partition(R"({"n": 3, "cells": [[1, 2]]})"), ParseError);
  EXPECT_THROW(load_partition(R"({"n": 3, "cells": [[1, 4], [2, 3]]})"), ParseError);
}
