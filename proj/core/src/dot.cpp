#include <sstream>

#include "factum/printer.hpp"

namespace factum {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string render_dot(const Pattern& pattern) {
  std::ostringstream out;
  out << "digraph " << quoted(pattern.name.text) << " {\n";
  if (!pattern.component_types.empty()) {
    out << "  rankdir=LR;\n";
  }
  for (const auto& ct : pattern.component_types) {
    out << "  subgraph " << quoted("cluster_" + ct.name.text) << " {\n";
    out << "    label=" << quoted(ct.name.text + " (" + ct.short_name.text + ")") << ";\n";
    for (const auto& port : ct.input_ports) {
      out << "    " << quoted(ct.name.text + "." + port.name.text) << " [label=" << quoted(port.name.text)
          << ", shape=circle];\n";
    }
    for (const auto& port : ct.output_ports) {
      out << "    " << quoted(ct.name.text + "." + port.name.text) << " [label=" << quoted(port.name.text)
          << ", shape=circle, style=filled];\n";
    }
    out << "  }\n";
  }
  for (const auto& ct : pattern.component_types) {
    for (const auto& port : ct.output_ports) {
      for (const auto& target : port.connects) {
        out << "  " << quoted(ct.name.text + "." + port.name.text) << " -> "
            << quoted(target.component_type.text + "." + target.port.text) << ";\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace factum
