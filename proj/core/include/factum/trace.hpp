#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "factum/ast.hpp"

namespace factum {

using Value = std::string;
using ValueSet = std::set<Value>;
using Tuple = std::vector<Value>;

// Finite interpretation of the data types. Sorts and operations are keyed
// by qualified name ("Energy.energy", "Subscription.sub").
struct DataModel {
  std::map<std::string, std::vector<Value>> carriers;
  std::map<std::string, std::map<Tuple, Value>> operations;
  std::map<std::string, std::set<Tuple>> predicates;

  const std::vector<Value>& carrier(const std::string& sort) const;
  bool operator==(const DataModel&) const = default;
};

struct ComponentInstance {
  std::string id;
  std::string type;
  std::optional<Value> id_value;

  bool operator==(const ComponentInstance&) const = default;
};

// Instances are referred to by their index in the trace's instance list.
struct PortKey {
  std::size_t instance = 0;
  std::string port;

  auto operator<=>(const PortKey&) const = default;
};

struct Connection {
  PortKey from;  // output port
  PortKey to;    // input port

  auto operator<=>(const Connection&) const = default;
};

// Absent valuation entries mean the empty set; empty sets are never stored.
struct Configuration {
  std::set<std::size_t> active;
  std::map<PortKey, ValueSet> valuations;
  std::set<Connection> connections;

  const ValueSet& valuation(const PortKey& key) const;
  bool operator==(const Configuration&) const = default;
};

struct ConfigurationTrace {
  std::vector<ComponentInstance> instances;
  std::vector<Configuration> steps;
  DataModel model;

  std::optional<std::size_t> instance_index(std::string_view id) const;
  bool operator==(const ConfigurationTrace&) const = default;
};

// Malformed trace or model document. `what()` names the offending element,
// e.g. `steps[1].valuations["c1.ci"]: ...`.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ground-term model used when a trace or entailment run supplies none.
// Each sort gets `atoms_per_sort` atoms `<sort>0`, `<sort>1`, ...; each
// operation contributes its applications to atoms as literals
// `op(a b)`. Applications to anything but atoms evaluate to the overflow
// literal `<sort>+` of the result sort. Predicates are empty.
DataModel default_model(const Pattern& pattern, std::size_t atoms_per_sort = 1);

// Parses a model object (`carriers`, `operations`, `predicates`) and checks
// it against the pattern's signatures: every sort has a carrier, tables are
// total and closed, predicate tuples lie in the carriers.
DataModel load_model(std::string_view json_text, const Pattern& pattern);

// Parses a trace document and checks every configuration invariant,
// including connection transfer. Without a `model` key the default model
// is used.
ConfigurationTrace load_trace(std::string_view json_text, const Pattern& pattern);

// Throws TraceError if `trace` violates an invariant.
void check_trace(const ConfigurationTrace& trace, const Pattern& pattern);

// The trace document format read by `load_trace`, with the model included.
std::string to_json(const ConfigurationTrace& trace, const Pattern& pattern);
std::string to_json(const DataModel& model);

}  // namespace factum
