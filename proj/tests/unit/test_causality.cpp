#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "petrimbn/causality.hpp"
#include "petrimbn/error.hpp"

using namespace pmbn;

TEST_SUITE("causality") {
  TEST_CASE("single node graphs") {
    const CausalityGraph src = node_graph({"g", 0, 1});
    CHECK(src.input_count() == 0);
    CHECK(src.output_count() == 1);
    CHECK(src.internal_wires().empty());

    const CausalityGraph d = node_graph({"D", 2, 1});
    CHECK(d.wire_count() == 3);
    CHECK(d.node(0).sources == std::vector<Wire>{Wire::input(0), Wire::input(1)});
    CHECK(d.outputs() == std::vector<Wire>{Wire::port(0, 0)});
    CHECK(d.internal_wires().empty());
  }

  TEST_CASE("wire numbering puts inputs first") {
    const CausalityGraph g = node_graph({"g", 2, 3});
    CHECK(g.wire_id(Wire::input(1)) == 1);
    CHECK(g.wire_id(Wire::port(0, 2)) == 4);
    CHECK(g.wire_at(3) == Wire::port(0, 1));
    CHECK(wire_name(Wire::input(0)) == "i1");
    CHECK(wire_name(Wire::port(0, 1)) == "1:2");
  }

  TEST_CASE("sequencing with identity wiring changes nothing") {
    const CausalityGraph g = fixtures::or_and_network(true).graph();
    CHECK(seq(g, identity_graph(g.output_count())) == g);
    CHECK(seq(identity_graph(0), g) == g);
  }

  TEST_CASE("the or-and network is a composite of its layers") {
    const CausalityGraph priors =
        tensor(tensor(node_graph({"A", 0, 1}), node_graph({"B", 0, 1})), node_graph({"C", 0, 1}));
    CHECK(priors.output_count() == 3);
    CHECK(priors.nodes().size() == 3);
    const CausalityGraph middle = tensor(node_graph({"D", 2, 1}), identity_graph(1));
    const CausalityGraph g = seq(seq(priors, middle), node_graph({"E", 2, 1}));
    // E reads (D, C) in the layered form, so only the source order differs from the fixture
    CHECK(g.nodes().size() == 5);
    CHECK(g.node(4).sources == std::vector<Wire>{Wire::port(3, 0), Wire::port(2, 0)});
    CHECK(g.internal_wires().size() == 4);

    const CausalityGraph swapped =
        seq(seq(seq(priors, middle), wiring_graph(2, {1, 0})), node_graph({"E", 2, 1}));
    CHECK(swapped == fixtures::or_and_network().graph());
  }

  TEST_CASE("sequencing two single nodes gives a chain") {
    const CausalityGraph g = seq(node_graph({"g1", 0, 1}), node_graph({"g2", 1, 1}));
    CHECK(g.nodes().size() == 2);
    CHECK(g.node(1).sources == std::vector<Wire>{Wire::port(0, 0)});
    CHECK(g.internal_wires() == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(seq(node_graph({"g1", 0, 2}), node_graph({"g2", 1, 1})), TypeMismatch);
  }

  TEST_CASE("tensor keeps internal wires apart") {
    const CausalityGraph a = seq(node_graph({"g1", 0, 1}), node_graph({"g2", 1, 1}));
    const CausalityGraph b = seq(node_graph({"h1", 1, 2}), node_graph({"h2", 2, 1}));
    CHECK(tensor(CausalityGraph(), a) == a);
    const CausalityGraph t = tensor(a, b);
    CHECK(t.input_count() == 1);
    CHECK(t.output_count() == 2);
    CHECK(t.internal_wires().size() == a.internal_wires().size() + b.internal_wires().size());
  }

  TEST_CASE("validation reports cycles and arity errors") {
    const auto cyclic = CausalityGraph::unchecked(0, {{{"g", 1, 1}, {Wire::port(0, 0)}}}, {});
    CHECK_FALSE(cyclic.validate().empty());
    CHECK_THROWS_AS(CausalityGraph(0, {{{"g", 1, 1}, {Wire::port(0, 0)}}}, {}), InvalidGraph);

    const auto arity = CausalityGraph::unchecked(1, {{{"g", 2, 1}, {Wire::input(0)}}}, {});
    REQUIRE(arity.validate().size() == 1);
    CHECK(arity.validate()[0].find("arity") != std::string::npos);

    const auto dangling = CausalityGraph::unchecked(0, {}, {Wire::input(0)});
    CHECK_FALSE(dangling.validate().empty());
    CHECK(fixtures::or_and_network().graph().validate().empty());
  }

  TEST_CASE("topological order respects sources") {
    const CausalityGraph g(0, {{{"b", 1, 1}, {Wire::port(1, 0)}}, {{"a", 0, 1}, {}}}, {Wire::port(0, 0)});
    CHECK(g.topological_order() == std::vector<std::size_t>{1, 0});
  }

  TEST_CASE("graph dump") {
    std::ostringstream os;
    write_graph(os, fixtures::or_and_network().graph());
    CHECK(os.str() ==
          "1 A inputs=[]\n2 B inputs=[]\n3 C inputs=[]\n4 D inputs=[1:1,2:1]\n5 E inputs=[3:1,4:1]\nout=[5:1]\n");
  }
}
