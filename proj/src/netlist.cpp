#include "dssa/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace dssa {
namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_integer(const std::string& tok) {
  if (tok.empty()) return false;
  return std::all_of(tok.begin(), tok.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

double parse_value(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw ParseError(line, "bad numeric value '" + tok + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError(line, "bad numeric value '" + tok + "'");
  }
}

struct VaryDirective {
  std::string target;  // parameter name or "*"
  double percent;
  int line;
};

}  // namespace

int CircuitModel::parameter_index(std::string_view name) const {
  for (std::size_t i = 0; i < parameters.size(); ++i)
    if (parameters[i].name == name) return static_cast<int>(i);
  return -1;
}

CircuitModel parse_netlist(std::string_view text) {
  CircuitModel model;
  std::map<std::string, int> named_nodes;
  int max_numeric_node = 0;
  std::set<std::string> element_names;
  std::vector<VaryDirective> varies;
  std::string input_token, output_token;
  int input_line = 0, output_line = 0;

  // Pass 1: collect numeric node ids so symbolic labels number after them.
  {
    std::istringstream scan{std::string(text)};
    std::string line;
    while (std::getline(scan, line)) {
      auto toks = tokenize(line);
      if (toks.empty() || toks[0][0] == '.') continue;
      std::size_t first = 2, count = 0;
      if (toks[0] == "G") count = 4;
      else if (toks[0] == "R" || toks[0] == "C") count = 2;
      for (std::size_t i = first; i < first + count && i < toks.size(); ++i)
        if (is_integer(toks[i]))
          max_numeric_node = std::max(max_numeric_node, std::stoi(toks[i]));
    }
  }
  int next_named_node = max_numeric_node + 1;

  auto node_id = [&](const std::string& tok, int line) {
    if (is_integer(tok)) {
      int id = std::stoi(tok);
      if (id > max_numeric_node) throw ParseError(line, "node out of range: " + tok);
      return id;
    }
    auto it = named_nodes.find(tok);
    if (it != named_nodes.end()) return it->second;
    int id = next_named_node++;
    named_nodes.emplace(tok, id);
    return id;
  };

  auto add_element = [&](Element elem, Parameter param, int line) {
    if (!element_names.insert(elem.name).second)
      throw ParseError(line, "duplicate element name '" + elem.name + "'");
    if (model.parameter_index(param.name) >= 0)
      throw ParseError(line, "duplicate parameter name '" + param.name + "'");
    if (param.nominal <= 0.0)
      throw ParseError(line, "nonpositive value for '" + elem.name + "'");
    param.lower = param.nominal * 0.5;
    param.upper = param.nominal * 1.5;
    elem.parameter_index = model.parameter_count();
    model.elements.push_back(std::move(elem));
    model.parameters.push_back(std::move(param));
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];

    if (head == ".title") {
      std::string title;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (i > 1) title += ' ';
        title += toks[i];
      }
      model.title = title;
    } else if (head == ".input" || head == ".output") {
      if (toks.size() != 2) throw ParseError(lineno, head + " expects one node");
      (head == ".input" ? input_token : output_token) = toks[1];
      (head == ".input" ? input_line : output_line) = lineno;
    } else if (head == ".vary") {
      if (toks.size() != 3) throw ParseError(lineno, ".vary expects <param|*> <percent>");
      double pct = parse_value(toks[2], lineno);
      if (pct <= 0.0 || pct >= 100.0)
        throw ParseError(lineno, ".vary percent must be in (0, 100)");
      varies.push_back({toks[1], pct, lineno});
    } else if (head == "G") {
      if (toks.size() != 7) throw ParseError(lineno, "G expects: name out+ out- ctrl+ ctrl- value");
      Element e{ElementKind::kVccs, toks[1]};
      e.terminal_count = 4;
      for (int i = 0; i < 4; ++i) e.terminals[i] = node_id(toks[2 + i], lineno);
      if (e.terminals[0] == e.terminals[1])
        throw ParseError(lineno, "VCCS '" + e.name + "' output terminals coincide");
      add_element(std::move(e), {toks[1], parse_value(toks[6], lineno)}, lineno);
    } else if (head == "R" || head == "C") {
      if (toks.size() != 5) throw ParseError(lineno, head + " expects: name n+ n- value");
      Element e{head == "R" ? ElementKind::kConductance : ElementKind::kCapacitance, toks[1]};
      e.terminals[0] = node_id(toks[2], lineno);
      e.terminals[1] = node_id(toks[3], lineno);
      if (e.terminals[0] == e.terminals[1])
        throw ParseError(lineno, "element '" + e.name + "' terminals coincide");
      double value = parse_value(toks[4], lineno);
      if (head == "R") {
        if (value <= 0.0) throw ParseError(lineno, "nonpositive value for '" + e.name + "'");
        std::string pname = e.name.starts_with("g") ? e.name : "g_" + e.name;
        add_element(std::move(e), {pname, 1.0 / value}, lineno);
      } else {
        add_element(std::move(e), {toks[1], value}, lineno);
      }
    } else {
      throw ParseError(lineno, "unrecognized directive '" + head + "'");
    }
  }

  if (model.elements.empty()) throw ParseError(lineno, "no elements");
  if (input_token.empty()) throw ParseError(lineno, "missing .input");
  if (output_token.empty()) throw ParseError(lineno, "missing .output");

  model.node_count = next_named_node - 1;

  auto resolve_port = [&](const std::string& tok, int line) {
    int id;
    if (is_integer(tok)) {
      id = std::stoi(tok);
    } else {
      auto it = named_nodes.find(tok);
      if (it == named_nodes.end()) throw ParseError(line, "unknown node '" + tok + "'");
      id = it->second;
    }
    if (id <= 0 || id > model.node_count)
      throw ParseError(line, "unknown node '" + tok + "'");
    return id;
  };
  model.input_node = resolve_port(input_token, input_line);
  model.output_node = resolve_port(output_token, output_line);

  // Every node id up to node_count must actually appear in some element.
  std::vector<bool> seen(model.node_count + 1, false);
  seen[0] = true;
  for (const auto& e : model.elements)
    for (int i = 0; i < e.terminal_count; ++i) seen[e.terminals[i]] = true;
  for (int n = 1; n <= model.node_count; ++n)
    if (!seen[n]) throw ParseError(0, "node " + std::to_string(n) + " is never referenced");

  for (const auto& v : varies) {
    auto apply = [&](Parameter& p) {
      p.lower = p.nominal * (1.0 - v.percent / 100.0);
      p.upper = p.nominal * (1.0 + v.percent / 100.0);
    };
    if (v.target == "*") {
      for (auto& p : model.parameters) apply(p);
    } else {
      int idx = model.parameter_index(v.target);
      if (idx < 0) throw ParseError(v.line, "unknown parameter '" + v.target + "'");
      apply(model.parameters[idx]);
    }
  }
  return model;
}

std::string render_netlist(const CircuitModel& model) {
  std::ostringstream out;
  out.precision(17);
  if (!model.title.empty()) out << ".title " << model.title << "\n";
  for (const auto& e : model.elements) {
    const Parameter& p = model.parameters[e.parameter_index];
    switch (e.kind) {
      case ElementKind::kVccs:
        out << "G " << e.name << ' ' << e.terminals[0] << ' ' << e.terminals[1]
            << ' ' << e.terminals[2] << ' ' << e.terminals[3] << ' ' << p.nominal << "\n";
        break;
      case ElementKind::kConductance:
        out << "R " << e.name << ' ' << e.terminals[0] << ' ' << e.terminals[1]
            << ' ' << 1.0 / p.nominal << "\n";
        break;
      case ElementKind::kCapacitance:
        out << "C " << e.name << ' ' << e.terminals[0] << ' ' << e.terminals[1]
            << ' ' << p.nominal << "\n";
        break;
    }
  }
  out << ".input " << model.input_node << "\n";
  out << ".output " << model.output_node << "\n";
  for (const auto& p : model.parameters) {
    double pct_lo = (1.0 - p.lower / p.nominal) * 100.0;
    double pct_hi = (p.upper / p.nominal - 1.0) * 100.0;
    if (std::abs(pct_lo - 50.0) > 1e-9 || std::abs(pct_hi - 50.0) > 1e-9)
      out << ".vary " << p.name << ' ' << pct_hi << "\n";
  }
  return out.str();
}

}  // namespace dssa
