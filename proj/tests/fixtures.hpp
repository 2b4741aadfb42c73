#pragma once

#include <numbers>

#include "qgraph/graph.hpp"

namespace fixtures {

using qgraph::GraphBuilder;
using qgraph::MetricGraph;
using qgraph::VertexCondition;

inline constexpr double pi = std::numbers::pi;

inline MetricGraph interval(double length = pi, bool dirichlet = false) {
  const auto c = dirichlet ? VertexCondition::dirichlet() : VertexCondition::delta(0.0);
  return GraphBuilder().vertex("a", c).vertex("b", c).edge("e", "a", "b", length).build();
}

inline MetricGraph circle(double length = 2.0 * pi) {
  return GraphBuilder().vertex("v").edge("loop", "v", "v", length).build();
}

// Loop of length 3 with a pendant edge of length 1 ending in a Neumann tip.
inline MetricGraph lasso(double loop = 3.0, double tail = 1.0) {
  return GraphBuilder().vertex("v").vertex("tip").edge("loop", "v", "v", loop).edge("tail", "v", "tip", tail).build();
}

inline MetricGraph figure_eight(double a = 1.0, double b = 1.41421356) {
  return GraphBuilder().vertex("v").edge("a", "v", "v", a).edge("b", "v", "v", b).build();
}

inline MetricGraph dumbbell() {
  return GraphBuilder()
      .vertex("u")
      .vertex("w")
      .edge("l1", "u", "u", 1.1)
      .edge("bridge", "u", "w", 0.6)
      .edge("l2", "w", "w", 1.7)
      .build();
}

inline MetricGraph star(double chi = 0.0) {
  return GraphBuilder()
      .vertex("c", VertexCondition::delta(chi))
      .vertex("x")
      .vertex("y")
      .vertex("z")
      .edge("e1", "c", "x", 1.0)
      .edge("e2", "c", "y", 1.2)
      .edge("e3", "c", "z", 1.43)
      .build();
}

// Triangle with a potential step on one side and a pendant edge: exercises
// segments, junctions and several cycles of different length.
inline MetricGraph potential_triangle() {
  return GraphBuilder()
      .vertex("a")
      .vertex("b", VertexCondition::delta(0.7))
      .vertex("c")
      .vertex("d")
      .edge("ab", "a", "b", 1.3, {{0.5, 2.0}, {0.8, -1.0}})
      .edge("bc", "b", "c", 0.9)
      .edge("ca", "c", "a", 1.7)
      .edge("cd", "c", "d", 0.55)
      .build();
}

}  // namespace fixtures
