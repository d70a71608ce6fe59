#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factum/ast.hpp"
#include "factum/trace.hpp"

namespace factum {

struct Bounds {
  std::map<std::string, std::size_t> max_instances;  // per component type
  std::size_t default_max_instances = 1;
  std::size_t max_length = 1;
  // Largest valuation set chosen for a port whose value is not fixed by
  // connection transfer.
  std::size_t max_values_per_port = 1;
  // Atoms per sort when the default model is used.
  std::size_t carrier_size = 1;
  // Largest number of configurations generated, and of traces visited,
  // before a search gives up with BoundExceeded.
  std::uint64_t ceiling = 100'000'000;

  std::size_t instances_of(const std::string& type) const;
};

// Every well-formed configuration over `instances`, in canonical order:
// activation subsets, then connection subsets, then valuations. A
// connection from an output port is permitted towards the inputs it
// declares in `connects`, or, if it declares none, towards every input of
// the same sort. Input ports with incoming connections carry the union of
// their sources.
std::vector<Configuration> enumerate_configurations(const Pattern& pattern,
                                                    const std::vector<ComponentInstance>& instances,
                                                    const DataModel& model, const Bounds& bounds);

// Number of traces `enumerate_traces` visits (saturating).
std::uint64_t count_traces(const Pattern& pattern, const Bounds& bounds, const DataModel& model);

// Visits every trace up to the bounds in canonical order: instance counts
// per component type (declaration order, lexicographic), id values, trace
// length, then steps. Instance ids are `<short name><k>` counting from 1.
// The visitor returns false to stop. Throws BoundExceeded above the ceiling.
void enumerate_traces(const Pattern& pattern, const Bounds& bounds, const DataModel& model,
                      const std::function<bool(const ConfigurationTrace&)>& visit);

struct EntailmentResult {
  bool holds = true;
  std::optional<ConfigurationTrace> counterexample;
  std::string violated;  // guarantee label
  // Traces evaluated. When every formula is G of a state formula only
  // single-step traces are evaluated, see check_entailment.
  std::uint64_t traces_checked = 0;
  std::uint64_t traces_admitted = 0;  // satisfying every constraint
};

// Holds iff every enumerated trace satisfying all ArchSpec formulas also
// satisfies every ArchGuarantee formula. Otherwise returns the first
// counterexample in canonical order. Without `model` the default model
// with `bounds.carrier_size` atoms per sort is used.
//
// Constraints of the form G(f), f without G or W, are checked per
// configuration before traces are formed. If the guarantees have that form
// too, a trace violates one iff one of its steps does, so only one-step
// traces are examined; the counterexample is the same one the full search
// would report first.
EntailmentResult check_entailment(const Pattern& pattern, const Bounds& bounds,
                                  const std::optional<DataModel>& model = std::nullopt);

}  // namespace factum
