#ifndef DSSA_NETLIST_HPP_
#define DSSA_NETLIST_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dssa {

enum class ElementKind { kConductance, kCapacitance, kVccs };

// One stamped branch. Conductance/capacitance use terminals[0..1];
// a VCCS uses all four (out+, out-, ctrl+, ctrl-).
struct Element {
  ElementKind kind;
  std::string name;
  std::array<int, 4> terminals{0, 0, 0, 0};
  int terminal_count = 2;
  int parameter_index = -1;
};

// Symbolic circuit parameter with nominal value and variation bounds.
struct Parameter {
  std::string name;
  double nominal = 0.0;
  double lower = 0.0;   // L_k
  double upper = 0.0;   // H_k
};

struct CircuitModel {
  std::string title;
  int node_count = 0;   // non-ground nodes, ids 1..node_count
  int input_node = 0;
  int output_node = 0;
  std::vector<Element> elements;
  std::vector<Parameter> parameters;  // one per element, same order

  int parameter_count() const { return static_cast<int>(parameters.size()); }
  int parameter_index(std::string_view name) const;  // -1 if absent
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Parses the line-oriented small-signal netlist format:
//   .title <text>                      optional
//   .input <node>   .output <node>    required
//   G <name> <out+> <out-> <ctrl+> <ctrl-> <value_S>
//   R <name> <n+> <n-> <value_ohms>
//   C <name> <n+> <n-> <value_F>
//   .vary <param|*> <percent>          bounds nominal*(1 -/+ p/100)
// '#' starts a comment. Nodes are nonnegative integers (0 = ground);
// symbolic node labels are accepted and numbered after the numeric ones.
// Resistors are converted to conductance parameters (nominal = 1/ohms) so
// every exact transfer-function term is a pure product of parameters. The
// conductance parameter is named after the resistor, prefixed "g_" unless
// the resistor name already starts with 'g'.
CircuitModel parse_netlist(std::string_view text);

// Canonical rendering; parse(render(parse(t))) == parse(t).
std::string render_netlist(const CircuitModel& model);

}  // namespace dssa

#endif  // DSSA_NETLIST_HPP_
