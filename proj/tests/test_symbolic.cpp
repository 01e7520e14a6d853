#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dssa/symbolic.hpp"
#include "test_util.hpp"

using namespace dssa;

namespace {

// One-pole shaped problem: M=0, N=1, K=3 (gm1, g_r1, c1), T=2.
ChromosomeDims dims_onepole() { return ChromosomeDims{0, 1, 3, 2}; }

Chromosome blank(ChromosomeDims d) {
  Chromosome c;
  c.dims = d;
  c.genes.assign(static_cast<std::size_t>(d.rows()) * d.cols(), 0);
  return c;
}

// Activates slot t of row p with the given sign and parameter set.
void set_slot(Chromosome& c, int p, int t, int sign, std::initializer_list<int> ks) {
  const int base = t * (c.dims.param_count + 1);
  for (int k : ks) c.at(p, base + k) = 1;
  c.at(p, base + c.dims.param_count) = static_cast<std::int8_t>(sign);
}

Chromosome exact_onepole() {
  Chromosome c = blank(dims_onepole());
  set_slot(c, 0, 0, -1, {0});  // num s^0: -gm1
  set_slot(c, 1, 0, +1, {1});  // den s^0: +g_r1
  set_slot(c, 2, 0, +1, {2});  // den s^1: +c1
  return c;
}

}  // namespace

TEST_CASE("chromosome layout") {
  ChromosomeDims d = dims_onepole();
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 8);
  Chromosome c = blank(d);
  CHECK(c.gene_count() == 24);
  CHECK(c.active_terms() == 0);
  CHECK(c.is_selector_column(3));
  CHECK(c.is_selector_column(7));
  CHECK_FALSE(c.is_selector_column(0));
  CHECK_FALSE(c.is_selector_column(4));

  Chromosome e = exact_onepole();
  CHECK(e.active_terms() == 3);
  CHECK(e.selector(0, 0) == -1);
  CHECK(e.selector(0, 1) == 0);
  CHECK(e.s_gene(0, 0, 0) == 1);
  CHECK(e.s_gene(0, 0, 1) == 0);
}

TEST_CASE("decode emits one term per active slot") {
  SymbolicRational sr = decode(exact_onepole());
  REQUIRE(sr.num_polys.size() == 1);
  REQUIRE(sr.den_polys.size() == 2);
  REQUIRE(sr.num_polys[0].terms.size() == 1);
  CHECK(sr.num_polys[0].terms[0].sign == -1);
  CHECK(sr.num_polys[0].terms[0].present == std::vector<bool>{true, false, false});
  CHECK(sr.den_polys[0].terms.size() == 1);
  CHECK(sr.den_polys[0].terms[0].present == std::vector<bool>{false, true, false});
  CHECK(sr.den_polys[1].terms.size() == 1);
  CHECK(sr.den_polys[1].terms[0].present == std::vector<bool>{false, false, true});
}

TEST_CASE("evaluate_poly including the empty-product constant") {
  std::vector<double> vals{2.0, 3.0, 5.0};
  SymbolicPolynomial p;
  p.terms.push_back({+1, {true, true, false}});   // +2*3
  p.terms.push_back({-1, {false, false, true}});  // -5
  CHECK(evaluate_poly(p, vals) == doctest::Approx(1.0));
  SymbolicPolynomial constant;
  constant.terms.push_back({-1, {false, false, false}});
  CHECK(evaluate_poly(constant, vals) == doctest::Approx(-1.0));
  CHECK(evaluate_poly(SymbolicPolynomial{}, vals) == doctest::Approx(0.0));
}

TEST_CASE("evaluate_rational matches the closed form") {
  SymbolicRational sr = decode(exact_onepole());
  const double gm = 1e-3, g = 1e-5, c = 1e-12;
  std::vector<double> vals{gm, g, c};
  for (double w : {0.0, 1e6, 1e7, 1e9}) {
    Complex s(0.0, w);
    bool singular = true;
    Complex h = evaluate_rational(sr, vals, s, &singular);
    CHECK_FALSE(singular);
    Complex expected = -gm / (g + s * c);
    CHECK(std::abs(h - expected) <= 1e-15 * std::abs(expected));
  }
}

TEST_CASE("vanishing denominator is flagged singular") {
  SymbolicRational sr = decode(exact_onepole());
  bool singular = false;
  evaluate_rational(sr, {1.0, 0.0, 0.0}, Complex(0.0, 0.0), &singular);
  CHECK(singular);
}

TEST_CASE("canonicalize merges duplicates and drops cancelled pairs") {
  CircuitModel m = parse_netlist(dssa_test::kOnePole);
  SymbolicPolynomial p;
  p.terms.push_back({+1, {true, false, false}});
  p.terms.push_back({+1, {true, false, false}});   // duplicate -> net +2
  p.terms.push_back({+1, {false, true, false}});
  p.terms.push_back({-1, {false, true, false}});   // cancels to zero
  SymbolicPolynomial c = canonicalize(p, m);
  REQUIRE(c.terms.size() == 2);  // +gm1 twice, g_r1 gone
  CHECK(c.terms[0] == c.terms[1]);
  CHECK(c.terms[0].sign == +1);
  CHECK(c.terms[0].present == std::vector<bool>{true, false, false});

  std::vector<double> vals{2.0, 3.0, 5.0};
  CHECK(evaluate_poly(c, vals) == doctest::Approx(evaluate_poly(p, vals)));
}

TEST_CASE("canonicalize orders by descending arity then name") {
  CircuitModel m = parse_netlist(dssa_test::kOnePole);
  SymbolicPolynomial p;
  p.terms.push_back({+1, {false, true, false}});        // g_r1
  p.terms.push_back({+1, {true, true, true}});          // gm1*g_r1*c1
  p.terms.push_back({-1, {true, false, false}});        // -gm1
  SymbolicPolynomial c = canonicalize(p, m);
  REQUIRE(c.terms.size() == 3);
  CHECK(c.terms[0].present == std::vector<bool>{true, true, true});
  // arity-1 terms then by name: c1 < g_r1 < gm1 lexicographically
  CHECK(c.terms[1].present == std::vector<bool>{false, true, false});
  CHECK(c.terms[2].present == std::vector<bool>{true, false, false});
}

TEST_CASE("whole-rational canonical form fixes the global sign") {
  CircuitModel m = parse_netlist(dssa_test::kOnePole);
  Chromosome flipped = blank(dims_onepole());
  set_slot(flipped, 0, 0, +1, {0});  // num: +gm1
  set_slot(flipped, 1, 0, -1, {1});  // den: -g_r1
  set_slot(flipped, 2, 0, -1, {2});  // den: -s*c1
  SymbolicRational canon = canonicalize(decode(flipped), m);
  SymbolicRational expected = canonicalize(decode(exact_onepole()), m);
  CHECK(canon == expected);
}

TEST_CASE("render") {
  CircuitModel m = parse_netlist(dssa_test::kOnePole);
  SymbolicRational sr = canonicalize(decode(exact_onepole()), m);
  std::string text = render(sr, m);
  CHECK(text.find("gm1") != std::string::npos);
  CHECK(text.find("g_r1") != std::string::npos);
  CHECK(text.find("c1") != std::string::npos);
  CHECK(text.find('/') != std::string::npos);
}
