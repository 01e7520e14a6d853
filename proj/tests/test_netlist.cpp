#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dssa/netlist.hpp"
#include "test_util.hpp"

using namespace dssa;

TEST_CASE("one-pole netlist parses to three parameters") {
  CircuitModel m = parse_netlist(dssa_test::kOnePole);
  REQUIRE(m.parameter_count() == 3);
  CHECK(m.parameters[0].name == "gm1");
  CHECK(m.parameters[0].nominal == doctest::Approx(1e-3));
  CHECK(m.parameters[1].name == "g_r1");
  CHECK(m.parameters[1].nominal == 1.0 / 1e5);  // reciprocal, full precision
  CHECK(m.parameters[2].name == "c1");
  CHECK(m.parameters[2].nominal == doctest::Approx(1e-12));
  CHECK(m.node_count == 2);  // node 1 plus the named input node
  CHECK(m.output_node == 1);
  CHECK(m.input_node == 2);
}

TEST_CASE("default variation bounds are +/-50 percent") {
  CircuitModel m = parse_netlist(dssa_test::kOnePole);
  for (const auto& p : m.parameters) {
    CHECK(p.lower == doctest::Approx(p.nominal * 0.5));
    CHECK(p.upper == doctest::Approx(p.nominal * 1.5));
    CHECK(p.lower > 0.0);
    CHECK(p.lower <= p.nominal);
    CHECK(p.nominal <= p.upper);
  }
}

TEST_CASE("vary directive overrides bounds") {
  std::string text = std::string(dssa_test::kOnePole) + ".vary gm1 20\n";
  CircuitModel m = parse_netlist(text);
  CHECK(m.parameters[0].lower == doctest::Approx(1e-3 * 0.8));
  CHECK(m.parameters[0].upper == doctest::Approx(1e-3 * 1.2));
  CHECK(m.parameters[1].lower == doctest::Approx(1e-5 * 0.5));

  std::string all = std::string(dssa_test::kOnePole) + ".vary * 10\n";
  CircuitModel ma = parse_netlist(all);
  for (const auto& p : ma.parameters)
    CHECK(p.upper == doctest::Approx(p.nominal * 1.1));
}

TEST_CASE("NMAM netlist has 4 nodes and 11 parameters") {
  CircuitModel m = dssa_test::load_circuit("nmam.cir");
  CHECK(m.node_count == 4);
  CHECK(m.parameter_count() == 11);
  CHECK(m.parameter_index("gm1") >= 0);
  CHECK(m.parameter_index("g1") >= 0);  // resistor named g1 keeps its name
  CHECK(m.parameter_index("cm2") >= 0);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_netlist(""), ParseError);
  CHECK_THROWS_AS(parse_netlist(".input 1\n.output 1\n"), ParseError);  // no elements
  CHECK_THROWS_AS(parse_netlist("R r1 1 0 1e3\n.output 1\n"), ParseError);  // no .input
  CHECK_THROWS_AS(parse_netlist("R r1 1 0 1e3\n.input 1\n"), ParseError);   // no .output
  // duplicate element name
  CHECK_THROWS_AS(parse_netlist("R r1 1 0 1e3\nR r1 1 0 1e3\n.input 1\n.output 1\n"),
                  ParseError);
  // nonpositive value
  CHECK_THROWS_AS(parse_netlist("R r1 1 0 -5\n.input 1\n.output 1\n"), ParseError);
  CHECK_THROWS_AS(parse_netlist("C c1 1 0 0\n.input 1\n.output 1\n"), ParseError);
  // unknown node in .output
  CHECK_THROWS_AS(parse_netlist("R r1 1 0 1e3\n.input 1\n.output 7\n"), ParseError);
  // ground as input
  CHECK_THROWS_AS(parse_netlist("R r1 1 0 1e3\n.input 0\n.output 1\n"), ParseError);
  // degenerate self-loop
  CHECK_THROWS_AS(parse_netlist("R r1 1 1 1e3\n.input 1\n.output 1\n"), ParseError);
  CHECK_THROWS_AS(parse_netlist("G g1 1 1 2 0 1e-3\nR r2 1 2 1\n.input 2\n.output 1\n"),
                  ParseError);
  // syntax error carries the line number
  try {
    parse_netlist("R r1 1 0 1e3\nbogus line here\n.input 1\n.output 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("round-trip stability of canonical rendering") {
  for (const char* name : {"onepole.cir", "rcladder.cir", "nmam.cir"}) {
    CircuitModel a = dssa_test::load_circuit(name);
    CircuitModel b = parse_netlist(render_netlist(a));
    CHECK(b.node_count == a.node_count);
    CHECK(b.input_node == a.input_node);
    CHECK(b.output_node == a.output_node);
    REQUIRE(b.parameter_count() == a.parameter_count());
    for (int k = 0; k < a.parameter_count(); ++k) {
      CHECK(b.parameters[k].name == a.parameters[k].name);
      CHECK(b.parameters[k].nominal == a.parameters[k].nominal);
      CHECK(b.parameters[k].lower == doctest::Approx(a.parameters[k].lower));
      CHECK(b.parameters[k].upper == doctest::Approx(a.parameters[k].upper));
    }
    REQUIRE(b.elements.size() == a.elements.size());
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
      CHECK(b.elements[i].kind == a.elements[i].kind);
      CHECK(b.elements[i].terminals == a.elements[i].terminals);
    }
  }
}

TEST_CASE("one parameter per element") {
  for (const char* name : {"onepole.cir", "rcladder.cir", "nmam.cir"}) {
    CircuitModel m = dssa_test::load_circuit(name);
    CHECK(m.elements.size() == m.parameters.size());
    for (std::size_t i = 0; i < m.elements.size(); ++i)
      CHECK(m.elements[i].parameter_index == static_cast<int>(i));
  }
}
