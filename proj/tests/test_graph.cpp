#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/spectrum.hpp"

using namespace qgraph;
using fixtures::pi;

namespace {

bool has(const std::vector<Diagnostic>& d, DiagnosticKind k) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.kind == k; });
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidGraph;
}

}  // namespace

TEST_CASE("validate accepts the standard graphs") {
  for (const auto& g : {fixtures::interval(), fixtures::circle(), fixtures::lasso(), fixtures::figure_eight(),
                        fixtures::dumbbell(), fixtures::star(), fixtures::potential_triangle()}) {
    CHECK(validate(g).empty());
  }
}

TEST_CASE("validate reports each violated invariant") {
  SUBCASE("nonpositive length") {
    const auto g = GraphBuilder().vertex("a").vertex("b").edge("e", "a", "b", -1.0).build();
    CHECK(has(validate(g), DiagnosticKind::NonpositiveLength));
  }
  SUBCASE("disconnected") {
    const auto g = GraphBuilder()
                       .vertex("a")
                       .vertex("b")
                       .vertex("c")
                       .vertex("d")
                       .edge("e", "a", "b", 1.0)
                       .edge("f", "c", "d", 1.0)
                       .build();
    const auto d = validate(g);
    CHECK(d.size() == 1);
    CHECK(has(d, DiagnosticKind::Disconnected));
  }
  SUBCASE("dirichlet on an interior vertex") {
    const auto g = GraphBuilder()
                       .vertex("a")
                       .vertex("m", VertexCondition::dirichlet())
                       .vertex("b")
                       .edge("e", "a", "m", 1.0)
                       .edge("f", "m", "b", 1.0)
                       .build();
    CHECK(has(validate(g), DiagnosticKind::DirichletNotLeaf));
  }
  SUBCASE("potential lengths must add up") {
    const auto g = GraphBuilder().vertex("a").vertex("b").edge("e", "a", "b", 1.0, {{0.3, 1.0}, {0.3, 0.0}}).build();
    CHECK(has(validate(g), DiagnosticKind::PotentialLengthMismatch));
  }
  SUBCASE("unreferenced vertex") {
    const auto g = GraphBuilder().vertex("a").vertex("b").vertex("lonely").edge("e", "a", "b", 1.0).build();
    CHECK(has(validate(g), DiagnosticKind::UnreferencedVertex));
  }
  SUBCASE("empty graph") { CHECK(has(validate(MetricGraph{}), DiagnosticKind::EmptyGraph)); }
  SUBCASE("require_valid throws InvalidGraph") {
    const auto g = GraphBuilder().vertex("a").vertex("b").edge("e", "a", "b", 0.0).build();
    CHECK(code_of([&] { require_valid(g); }) == ErrorCode::InvalidGraph);
  }
}

TEST_CASE("betti numbers") {
  CHECK(betti(fixtures::interval()) == 0);
  CHECK(betti(fixtures::circle()) == 1);
  CHECK(betti(fixtures::figure_eight()) == 2);
  CHECK(betti(fixtures::lasso()) == 1);
  CHECK(betti(fixtures::potential_triangle()) == 1);
}

TEST_CASE("spanning tree cuts: one per independent cycle, leaving a tree") {
  CHECK(spanning_tree_cuts(fixtures::interval()).size() == 0);
  const auto c = spanning_tree_cuts(fixtures::circle());
  REQUIRE(c.size() == 1);
  CHECK(c.cuts()[0].t == doctest::Approx(pi));
  CHECK(spanning_tree_cuts(fixtures::figure_eight()).size() == 2);

  for (const auto& g : {fixtures::lasso(), fixtures::figure_eight(), fixtures::dumbbell(),
                        fixtures::potential_triangle()}) {
    const auto cuts = spanning_tree_cuts(g);
    CHECK(cuts.size() == betti(g));
    std::vector<EdgePoint> pts;
    for (const auto& p : cuts.cuts()) pts.push_back({p.edge, p.t});
    const auto opened = open_at(g, pts, VertexCondition::delta(0.0)).graph;
    CHECK(connected_components(opened).count == 1);
    CHECK(betti(opened) == 0);
  }
}

TEST_CASE("spanning tree cuts with an explicit tree and positions") {
  const auto g = fixtures::potential_triangle();
  // Tree {bc, ca, cd} leaves ab as the cut edge.
  const auto cuts = spanning_tree_cuts(g, TreeSelection{{1, 2, 3}}, PositionRule{{0.2}});
  REQUIRE(cuts.size() == 1);
  CHECK(cuts.cuts()[0].edge == 0);
  CHECK(cuts.cuts()[0].t == doctest::Approx(0.2));
}

TEST_CASE("cut_for_nodal_set") {
  SUBCASE("tree: every zero disconnects") {
    const auto c = cut_for_nodal_set(fixtures::star(), {{0, 0.5}, {1, 0.3}, {2, 1.0}});
    CHECK(c.size() == 0);
  }
  SUBCASE("circle with two zeros: first gets a cut, second would disconnect") {
    const auto c = cut_for_nodal_set(fixtures::circle(), {{0, 1.0}, {0, 4.0}});
    REQUIRE(c.size() == 1);
    CHECK(c.cuts()[0].t == doctest::Approx(1.0 + 1e-3 * 2.0 * pi));
  }
  SUBCASE("figure-eight with zeros on one loop only") {
    const auto g = fixtures::figure_eight();
    const std::vector<EdgePoint> zeros{{1, 0.4}, {1, 1.1}};
    const auto c = cut_for_nodal_set(g, zeros);
    CHECK(c.size() == 1);
    // Brute-force check of eta = beta(G) - beta(G \ N) by component labeling.
    const auto opened = open_at(g, zeros, VertexCondition::delta(0.0)).graph;
    const auto comps = connected_components(opened);
    std::vector<long> v(comps.count, 0), e(comps.count, 0);
    for (std::size_t k = 0; k < opened.vertex_count(); ++k) ++v[comps.label[k]];
    for (const auto& edge : opened.edges()) ++e[comps.label[edge.from]];
    long beta_rest = 0;
    for (std::size_t k = 0; k < comps.count; ++k) beta_rest += e[k] - v[k] + 1;
    CHECK(static_cast<long>(c.size()) == 2 - beta_rest);
    const auto topo = nodal_topology(g, zeros);
    CHECK(topo.eta == 1);
    CHECK(topo.eta == 1 + topo.phi - topo.nu);
  }
  SUBCASE("eta does not depend on the processing order") {
    const auto g = fixtures::dumbbell();
    std::vector<EdgePoint> zeros{{0, 0.3}, {0, 0.8}, {1, 0.2}, {2, 0.5}};
    const auto expected = nodal_topology(g, zeros).eta;
    std::sort(zeros.begin(), zeros.end(), [](auto a, auto b) { return a.edge < b.edge || (a.edge == b.edge && a.t < b.t); });
    do {
      CHECK(cut_for_nodal_set(g, zeros).size() == expected);
    } while (std::next_permutation(zeros.begin(), zeros.end(), [](auto a, auto b) {
      return a.edge < b.edge || (a.edge == b.edge && a.t < b.t);
    }));
  }
  SUBCASE("offset that leaves the edge or hits another point") {
    const auto g = fixtures::circle(1.0);
    CHECK(code_of([&] { cut_for_nodal_set(g, {{0, 0.5}, {0, 0.6}}, 0.6); }) == ErrorCode::EpsilonTooLarge);
  }
}

TEST_CASE("subdivide_at keeps the spectrum and the Betti number") {
  SUBCASE("interval split at pi/2") {
    const auto g = fixtures::interval();
    const auto s = subdivide_at(g, {{0, pi / 2}});
    CHECK(s.edge_count() == 2);
    CHECK(s.vertex_count() == 3);
    const auto a = find_eigenvalues(SpectralProblem(g), 6).values();
    const auto b = find_eigenvalues(SpectralProblem(s), 6).values();
    for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9);
  }
  SUBCASE("circle subdivided once becomes a 2-cycle") {
    const auto s = subdivide_at(fixtures::circle(), {{0, 1.0}});
    CHECK(s.edge_count() == 2);
    CHECK(std::none_of(s.edges().begin(), s.edges().end(), [](const Edge& e) { return e.is_loop(); }));
    CHECK(betti(s) == 1);
  }
  SUBCASE("lasso at three points") {
    const auto g = fixtures::lasso();
    const auto s = subdivide_at(g, {{0, 0.7}, {0, 2.1}, {1, 0.5}});
    CHECK(s.edge_count() == g.edge_count() + 3);
    CHECK(s.vertex_count() == g.vertex_count() + 3);
    CHECK(betti(s) == betti(g));
    const auto a = find_eigenvalues(SpectralProblem(g), 8).values();
    const auto b = find_eigenvalues(SpectralProblem(s), 8).values();
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9);
  }
  SUBCASE("potential is carried to the pieces") {
    const auto g = fixtures::potential_triangle();
    const auto s = subdivide_at(g, {{0, 0.2}, {0, 1.0}});
    CHECK(betti(s) == betti(g));
    const auto a = find_eigenvalues(SpectralProblem(g), 6).values();
    const auto b = find_eigenvalues(SpectralProblem(s), 6).values();
    for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9);
  }
  SUBCASE("repeated point") {
    CHECK(code_of([] { subdivide_at(fixtures::interval(), {{0, 1.0}, {0, 1.0}}); }) == ErrorCode::DuplicatePoint);
  }
}

TEST_CASE("cut sets check their positions") {
  const auto g = fixtures::potential_triangle();
  CHECK(code_of([&] { require_valid_cuts(g, CutSet({{0, 0.5, 0}}, CutFamily::Glued)); }) == ErrorCode::InvalidCut);
  CHECK(code_of([&] { require_valid_cuts(g, CutSet({{1, 0.0, 0}}, CutFamily::Glued)); }) == ErrorCode::InvalidCut);
  CHECK(code_of([&] { CutSet({{1, 0.3, 0}}, CutFamily::Flux, {1.0, 2.0}); }) == ErrorCode::InvalidCut);
  CHECK_NOTHROW(require_valid_cuts(g, CutSet({{0, 0.6, 0}}, CutFamily::Robin, {1.0})));
}

TEST_CASE("graph files") {
  const std::string text = R"(
# lasso with a potential step on the tail
[vertices]
id = v   condition = delta : 0.5
id = tip condition = dirichlet

[edges]
id=loop from=v to=v length=3.0
id=tail from=v to=tip length=1.0 potential = 0.4:0 , 0.6:2.5

[cuts]
edge=loop t=1.5 family=robin params=0.25
)";
  const auto f = parse_graph(text);
  const auto& g = f.graph;
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.vertex(0).condition.chi == doctest::Approx(0.5));
  CHECK(g.vertex(1).condition.is_dirichlet());
  CHECK(g.edge(1).potential.size() == 2);
  CHECK(g.edge(1).potential[1].q == doctest::Approx(2.5));
  REQUIRE(f.cuts.has_value());
  CHECK(f.cuts->family() == CutFamily::Robin);
  CHECK(f.cuts->params()[0] == doctest::Approx(0.25));

  const auto again = parse_graph(format_graph(g, f.cuts));
  CHECK(format_graph(again.graph, again.cuts) == format_graph(g, f.cuts));

  CHECK(code_of([] { parse_graph("[edges]\nid=e from=a to=b length=1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_graph("[vertices]\nid=a condition=weird\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_graph("[nonsense]\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_graph("[vertices]\nid=a\nid=b\n[edges]\nid=e from=a to=b length=x\n"); }) ==
        ErrorCode::ParseError);
}
