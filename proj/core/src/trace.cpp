#include "factum/trace.hpp"

#include <algorithm>
#include <functional>

#include <nlohmann/json.hpp>

#include "factum/symbol_table.hpp"

namespace factum {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<Value>& DataModel::carrier(const std::string& sort) const {
  static const std::vector<Value> empty;
  auto it = carriers.find(sort);
  return it == carriers.end() ? empty : it->second;
}

const ValueSet& Configuration::valuation(const PortKey& key) const {
  static const ValueSet empty;
  auto it = valuations.find(key);
  return it == valuations.end() ? empty : it->second;
}

std::optional<std::size_t> ConfigurationTrace::instance_index(std::string_view id) const {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].id == id) {
      return i;
    }
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw TraceError(where.empty() ? what : where + ": " + what);
}

std::string squote(const std::string& s) { return "'" + s + "'"; }

// Resolved argument and result sorts of an operation, or nullopt if any of
// them does not resolve.
struct ResolvedOp {
  std::string name;  // qualified
  std::string plain;
  std::vector<std::string> args;
  std::string result;
};

struct ResolvedPred {
  std::string name;
  std::vector<std::string> args;
};

struct Signature {
  std::vector<std::string> sorts;  // qualified, declaration order
  std::vector<ResolvedOp> operations;
  std::vector<ResolvedPred> predicates;
};

Signature signature(const Pattern& pattern) {
  const auto table = build_symbol_table(pattern);
  Signature sig;
  auto resolve = [&](const SortRef& ref, const std::string& context) -> std::optional<std::string> {
    auto r = resolve_sort(ref, context, table);
    return r.sort ? std::optional(r.sort->qualified()) : std::nullopt;
  };
  for (const auto& dt : pattern.data_types) {
    for (const auto& s : dt.sorts) {
      const auto q = dt.name.text + "." + s.text;
      if (std::find(sig.sorts.begin(), sig.sorts.end(), q) == sig.sorts.end()) {
        sig.sorts.push_back(q);
      }
    }
  }
  for (const auto& dt : pattern.data_types) {
    for (const auto& op : dt.operations) {
      ResolvedOp r{dt.name.text + "." + op.name.text, op.name.text, {}, {}};
      bool ok = true;
      for (const auto& a : op.arg_sorts) {
        auto s = resolve(a, dt.name.text);
        ok = ok && s;
        r.args.push_back(s.value_or(""));
      }
      auto res = resolve(op.result_sort, dt.name.text);
      if (ok && res) {
        r.result = *res;
        sig.operations.push_back(std::move(r));
      }
    }
    for (const auto& pred : dt.predicates) {
      ResolvedPred r{dt.name.text + "." + pred.name.text, {}};
      bool ok = true;
      for (const auto& a : pred.arg_sorts) {
        auto s = resolve(a, dt.name.text);
        ok = ok && s;
        r.args.push_back(s.value_or(""));
      }
      if (ok) {
        sig.predicates.push_back(std::move(r));
      }
    }
  }
  return sig;
}

// Calls `visit` with every tuple in the product of the given carriers.
void for_each_tuple(const std::vector<const std::vector<Value>*>& carriers,
                    const std::function<void(const Tuple&)>& visit) {
  for (const auto* c : carriers) {
    if (c->empty()) {
      return;
    }
  }
  std::vector<std::size_t> index(carriers.size(), 0);
  Tuple tuple(carriers.size());
  while (true) {
    for (std::size_t i = 0; i < carriers.size(); ++i) {
      tuple[i] = (*carriers[i])[index[i]];
    }
    visit(tuple);
    std::size_t k = carriers.size();
    while (k > 0) {
      --k;
      if (++index[k] < carriers[k]->size()) {
        break;
      }
      index[k] = 0;
      if (k == 0) {
        return;
      }
    }
    if (carriers.empty()) {
      return;
    }
  }
}

std::string plain_sort(const std::string& qualified) { return qualified.substr(qualified.rfind('.') + 1); }

std::string join(const Tuple& t, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += (i ? sep : "") + t[i];
  }
  return out;
}

Tuple split_key(const std::string& key, std::size_t arity) {
  Tuple out;
  if (arity == 0) {
    if (!key.empty()) {
      out.push_back(key);
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    auto comma = key.find(',', start);
    out.push_back(key.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) {
      return out;
    }
    start = comma + 1;
  }
}

const std::string& expect_string(const json& j, const std::string& where) {
  if (!j.is_string()) {
    fail(where, "expected a string");
  }
  return j.get_ref<const std::string&>();
}

const json& expect_array(const json& j, const std::string& where) {
  if (!j.is_array()) {
    fail(where, "expected an array");
  }
  return j;
}

const json& expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) {
    fail(where, "expected an object");
  }
  return j;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw TraceError(std::string("invalid JSON: ") + e.what());
  }
}

std::string qualify(const std::string& key, const Signature& sig, const std::string& where) {
  if (std::find(sig.sorts.begin(), sig.sorts.end(), key) != sig.sorts.end()) {
    return key;
  }
  std::vector<std::string> matches;
  for (const auto& s : sig.sorts) {
    if (plain_sort(s) == key) {
      matches.push_back(s);
    }
  }
  if (matches.size() != 1) {
    fail(where, "unknown sort " + squote(key));
  }
  return matches.front();
}

bool in_carrier(const DataModel& model, const std::string& sort, const Value& v) {
  const auto& c = model.carrier(sort);
  return std::find(c.begin(), c.end(), v) != c.end();
}

DataModel parse_model(const json& j, const Pattern& pattern) {
  const auto sig = signature(pattern);
  DataModel model;
  expect_object(j, "model");
  for (const auto& [key, _] : j.items()) {
    if (key != "carriers" && key != "operations" && key != "predicates") {
      fail("model", "unknown key " + squote(key));
    }
  }

  if (j.contains("carriers")) {
    for (const auto& [key, values] : expect_object(j["carriers"], "model.carriers").items()) {
      const std::string where = "model.carriers[\"" + key + "\"]";
      const auto sort = qualify(key, sig, where);
      if (model.carriers.count(sort)) {
        fail(where, "duplicate carrier for sort " + squote(sort));
      }
      auto& carrier = model.carriers[sort];
      for (const auto& v : expect_array(values, where)) {
        const auto& s = expect_string(v, where);
        if (s.find(',') != std::string::npos) {
          fail(where, "value " + squote(s) + " contains ','");
        }
        if (std::find(carrier.begin(), carrier.end(), s) != carrier.end()) {
          fail(where, "duplicate value " + squote(s));
        }
        carrier.push_back(s);
      }
    }
  }
  for (const auto& s : sig.sorts) {
    if (!model.carriers.count(s)) {
      fail("model.carriers", "no carrier for sort " + squote(s));
    }
  }

  const json no_entries = json::object();
  const json& ops = j.contains("operations") ? expect_object(j["operations"], "model.operations") : no_entries;
  for (const auto& [key, _] : ops.items()) {
    if (std::none_of(sig.operations.begin(), sig.operations.end(),
                     [&](const ResolvedOp& op) { return op.name == key; })) {
      fail("model.operations", "unknown operation " + squote(key));
    }
  }
  for (const auto& op : sig.operations) {
    const std::string where = "model.operations[\"" + op.name + "\"]";
    if (!ops.contains(op.name)) {
      fail("model.operations", "no table for operation " + squote(op.name));
    }
    auto& table = model.operations[op.name];
    for (const auto& [key, result] : expect_object(ops[op.name], where).items()) {
      auto args = split_key(key, op.args.size());
      if (args.size() != op.args.size()) {
        fail(where, "entry " + squote(key) + " has " + std::to_string(args.size()) + " arguments, expected " +
                        std::to_string(op.args.size()));
      }
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (!in_carrier(model, op.args[i], args[i])) {
          fail(where, squote(args[i]) + " is not in the carrier of " + squote(op.args[i]));
        }
      }
      const auto& r = expect_string(result, where + "[\"" + key + "\"]");
      if (!in_carrier(model, op.result, r)) {
        fail(where, "result " + squote(r) + " is not in the carrier of " + squote(op.result));
      }
      table.emplace(std::move(args), r);
    }
    std::size_t expected = 1;
    for (const auto& a : op.args) {
      expected *= model.carrier(a).size();
    }
    if (table.size() != expected) {
      fail(where, "table is not total: " + std::to_string(table.size()) + " of " + std::to_string(expected) +
                      " argument tuples defined");
    }
  }

  const json& preds = j.contains("predicates") ? expect_object(j["predicates"], "model.predicates") : no_entries;
  for (const auto& [key, tuples] : preds.items()) {
    auto it = std::find_if(sig.predicates.begin(), sig.predicates.end(),
                           [&](const ResolvedPred& p) { return p.name == key; });
    const std::string where = "model.predicates[\"" + key + "\"]";
    if (it == sig.predicates.end()) {
      fail("model.predicates", "unknown predicate " + squote(key));
    }
    auto& extension = model.predicates[key];
    for (const auto& t : expect_array(tuples, where)) {
      expect_array(t, where);
      if (t.size() != it->args.size()) {
        fail(where, "tuple of " + std::to_string(t.size()) + " values, expected " + std::to_string(it->args.size()));
      }
      Tuple tuple;
      for (std::size_t i = 0; i < t.size(); ++i) {
        tuple.push_back(expect_string(t[i], where));
        if (!in_carrier(model, it->args[i], tuple.back())) {
          fail(where, squote(tuple.back()) + " is not in the carrier of " + squote(it->args[i]));
        }
      }
      extension.insert(std::move(tuple));
    }
  }
  for (const auto& p : sig.predicates) {
    model.predicates[p.name];
  }
  return model;
}

std::string port_sort(const SymbolTable& table, const Port& port) {
  auto r = resolve_sort(port.sort, std::nullopt, table);
  return r.sort ? r.sort->qualified() : std::string();
}

}  // namespace

DataModel default_model(const Pattern& pattern, std::size_t atoms_per_sort) {
  const auto sig = signature(pattern);
  DataModel model;
  std::map<std::string, std::vector<Value>> atoms;
  for (const auto& s : sig.sorts) {
    for (std::size_t i = 0; i < atoms_per_sort; ++i) {
      atoms[s].push_back(plain_sort(s) + std::to_string(i));
    }
    model.carriers[s] = atoms[s];
  }
  auto is_atom = [&](const std::string& sort, const Value& v) {
    const auto& a = atoms[sort];
    return std::find(a.begin(), a.end(), v) != a.end();
  };
  auto add = [&](const std::string& sort, const Value& v) {
    auto& c = model.carriers[sort];
    if (std::find(c.begin(), c.end(), v) == c.end()) {
      c.push_back(v);
      return true;
    }
    return false;
  };
  auto literal = [](const ResolvedOp& op, const Tuple& args) { return op.plain + "(" + join(args, " ") + ")"; };

  for (const auto& op : sig.operations) {
    std::vector<const std::vector<Value>*> arg_atoms;
    for (const auto& a : op.args) {
      arg_atoms.push_back(&atoms[a]);
    }
    for_each_tuple(arg_atoms, [&](const Tuple& t) { add(op.result, literal(op, t)); });
  }
  // Overflow literals: any application to a non-atom lands in `<sort>+`.
  // Adding one can make further applications non-atomic, hence the loop.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& op : sig.operations) {
      bool overflow = false;
      for (const auto& a : op.args) {
        for (const auto& v : model.carriers[a]) {
          overflow = overflow || !is_atom(a, v);
        }
      }
      bool nonempty = std::all_of(op.args.begin(), op.args.end(),
                                  [&](const std::string& a) { return !model.carriers[a].empty(); });
      if (overflow && nonempty) {
        changed = add(op.result, plain_sort(op.result) + "+") || changed;
      }
    }
  }
  for (const auto& op : sig.operations) {
    std::vector<const std::vector<Value>*> arg_carriers;
    for (const auto& a : op.args) {
      arg_carriers.push_back(&model.carriers[a]);
    }
    auto& table = model.operations[op.name];
    for_each_tuple(arg_carriers, [&](const Tuple& t) {
      bool atomic = true;
      for (std::size_t i = 0; i < t.size(); ++i) {
        atomic = atomic && is_atom(op.args[i], t[i]);
      }
      table.emplace(t, atomic ? literal(op, t) : plain_sort(op.result) + "+");
    });
  }
  for (const auto& p : sig.predicates) {
    model.predicates[p.name];
  }
  return model;
}

DataModel load_model(std::string_view json_text, const Pattern& pattern) {
  return parse_model(parse_json(json_text), pattern);
}

void check_trace(const ConfigurationTrace& trace, const Pattern& pattern) {
  const auto table = build_symbol_table(pattern);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < trace.instances.size(); ++i) {
    const auto& inst = trace.instances[i];
    const std::string where = "instances[" + std::to_string(i) + "]";
    if (!ids.insert(inst.id).second) {
      fail(where, "duplicate instance id " + squote(inst.id));
    }
    const auto* ct = table.component_type(inst.type);
    if (!ct) {
      fail(where, "unknown component type " + squote(inst.type));
    }
    if (ct->id_sort) {
      if (!inst.id_value) {
        fail(where, "type " + squote(inst.type) + " declares an Id; idValue is required");
      }
      auto sort = resolve_sort(*ct->id_sort, std::nullopt, table).sort;
      if (sort && !in_carrier(trace.model, sort->qualified(), *inst.id_value)) {
        fail(where, "idValue " + squote(*inst.id_value) + " is not in the carrier of " + squote(sort->qualified()));
      }
    } else if (inst.id_value) {
      fail(where, "type " + squote(inst.type) + " declares no Id; idValue is not allowed");
    }
  }
  if (trace.steps.empty()) {
    fail("steps", "a trace needs at least one step");
  }

  auto port_of = [&](const PortKey& key) -> const Port* {
    if (key.instance >= trace.instances.size()) {
      return nullptr;
    }
    return table.port(trace.instances[key.instance].type, key.port);
  };
  auto spell = [&](const PortKey& key) { return trace.instances.at(key.instance).id + "." + key.port; };

  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const auto& step = trace.steps[s];
    const std::string where = "steps[" + std::to_string(s) + "]";
    for (auto a : step.active) {
      if (a >= trace.instances.size()) {
        fail(where + ".active", "unknown instance");
      }
    }
    for (const auto& c : step.connections) {
      const std::string at = where + ".connections";
      const auto* from = port_of(c.from);
      const auto* to = port_of(c.to);
      if (!from || !to) {
        fail(at, "unknown port in connection");
      }
      if (from->direction != PortDirection::Output || to->direction != PortDirection::Input) {
        fail(at, "connection " + spell(c.from) + " -> " + spell(c.to) + " must go from an output to an input port");
      }
      if (!step.active.count(c.from.instance) || !step.active.count(c.to.instance)) {
        fail(at, "connection " + spell(c.from) + " -> " + spell(c.to) + " involves an inactive instance");
      }
      if (port_sort(table, *from) != port_sort(table, *to)) {
        fail(at, "connection " + spell(c.from) + " -> " + spell(c.to) + " joins ports of different sorts");
      }
    }
    for (const auto& [key, values] : step.valuations) {
      const auto* port = port_of(key);
      if (!port) {
        fail(where + ".valuations", "unknown port");
      }
      const std::string at = where + ".valuations[\"" + spell(key) + "\"]";
      if (!step.active.count(key.instance)) {
        fail(at, "instance " + squote(trace.instances[key.instance].id) + " is not active");
      }
      if (values.empty()) {
        fail(at, "empty sets are not stored");
      }
      const auto sort = port_sort(table, *port);
      for (const auto& v : values) {
        if (!in_carrier(trace.model, sort, v)) {
          fail(at, squote(v) + " is not in the carrier of " + squote(sort));
        }
      }
    }
    // Connection transfer: an input with incoming connections carries
    // exactly the union of the connected outputs.
    std::map<PortKey, ValueSet> incoming;
    for (const auto& c : step.connections) {
      const auto& v = step.valuation(c.from);
      incoming[c.to].insert(v.begin(), v.end());
    }
    for (const auto& [key, expected] : incoming) {
      if (step.valuation(key) != expected) {
        fail(where + ".valuations[\"" + spell(key) + "\"]",
             "input port valuation differs from the union of its connected outputs");
      }
    }
  }
}

ConfigurationTrace load_trace(std::string_view json_text, const Pattern& pattern) {
  const json doc = parse_json(json_text);
  expect_object(doc, "");
  for (const auto& [key, _] : doc.items()) {
    if (key != "instances" && key != "steps" && key != "model") {
      fail("", "unknown key " + squote(key));
    }
  }
  ConfigurationTrace trace;
  trace.model = doc.contains("model") ? parse_model(doc["model"], pattern) : default_model(pattern);

  if (doc.contains("instances")) {
    const auto& list = expect_array(doc["instances"], "instances");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "instances[" + std::to_string(i) + "]";
      const auto& obj = expect_object(list[i], where);
      if (!obj.contains("id") || !obj.contains("type")) {
        fail(where, "instances need an id and a type");
      }
      ComponentInstance inst;
      inst.id = expect_string(obj["id"], where + ".id");
      inst.type = expect_string(obj["type"], where + ".type");
      if (obj.contains("idValue")) {
        inst.id_value = expect_string(obj["idValue"], where + ".idValue");
      }
      if (trace.instance_index(inst.id)) {
        fail(where, "duplicate instance id " + squote(inst.id));
      }
      trace.instances.push_back(std::move(inst));
    }
  }

  auto lookup = [&](const std::string& id, const std::string& where) {
    auto index = trace.instance_index(id);
    if (!index) {
      fail(where, "unknown instance " + squote(id));
    }
    return *index;
  };
  auto port_key = [&](const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) {
      fail(where, "expected [\"instance\", \"port\"]");
    }
    return PortKey{lookup(expect_string(j[0], where), where), expect_string(j[1], where)};
  };

  if (!doc.contains("steps")) {
    fail("steps", "a trace needs at least one step");
  }
  const auto& steps = expect_array(doc["steps"], "steps");
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const std::string where = "steps[" + std::to_string(s) + "]";
    const auto& obj = expect_object(steps[s], where);
    Configuration step;
    if (obj.contains("active")) {
      for (const auto& id : expect_array(obj["active"], where + ".active")) {
        step.active.insert(lookup(expect_string(id, where + ".active"), where + ".active"));
      }
    }
    if (obj.contains("connections")) {
      for (const auto& c : expect_array(obj["connections"], where + ".connections")) {
        if (!c.is_array() || c.size() != 2) {
          fail(where + ".connections", "expected [[\"id\", \"port\"], [\"id\", \"port\"]]");
        }
        step.connections.insert({port_key(c[0], where + ".connections"), port_key(c[1], where + ".connections")});
      }
    }
    if (obj.contains("valuations")) {
      for (const auto& [key, values] : expect_object(obj["valuations"], where + ".valuations").items()) {
        const std::string at = where + ".valuations[\"" + key + "\"]";
        const auto dot = key.rfind('.');
        if (dot == std::string::npos) {
          fail(at, "expected a key of the form \"instance.port\"");
        }
        PortKey pk{lookup(key.substr(0, dot), at), key.substr(dot + 1)};
        ValueSet set;
        for (const auto& v : expect_array(values, at)) {
          set.insert(expect_string(v, at));
        }
        if (!set.empty()) {
          step.valuations[pk] = std::move(set);
        }
      }
    }
    trace.steps.push_back(std::move(step));
  }
  check_trace(trace, pattern);
  return trace;
}

namespace {

ordered_json model_json(const DataModel& model) {
  ordered_json m = ordered_json::object();
  m["carriers"] = ordered_json::object();
  for (const auto& [sort, values] : model.carriers) {
    m["carriers"][sort] = values;
  }
  m["operations"] = ordered_json::object();
  for (const auto& [op, table] : model.operations) {
    auto& t = m["operations"][op] = ordered_json::object();
    for (const auto& [args, result] : table) {
      t[join(args, ",")] = result;
    }
  }
  m["predicates"] = ordered_json::object();
  for (const auto& [pred, tuples] : model.predicates) {
    auto& list = m["predicates"][pred] = ordered_json::array();
    for (const auto& t : tuples) {
      list.push_back(t);
    }
  }
  return m;
}

}  // namespace

std::string to_json(const DataModel& model) { return model_json(model).dump(2) + "\n"; }

std::string to_json(const ConfigurationTrace& trace, const Pattern&) {
  ordered_json doc = ordered_json::object();
  doc["instances"] = ordered_json::array();
  for (const auto& inst : trace.instances) {
    ordered_json i = ordered_json::object();
    i["id"] = inst.id;
    i["type"] = inst.type;
    if (inst.id_value) {
      i["idValue"] = *inst.id_value;
    }
    doc["instances"].push_back(std::move(i));
  }
  doc["steps"] = ordered_json::array();
  for (const auto& step : trace.steps) {
    ordered_json s = ordered_json::object();
    s["active"] = ordered_json::array();
    for (auto a : step.active) {
      s["active"].push_back(trace.instances.at(a).id);
    }
    s["connections"] = ordered_json::array();
    for (const auto& c : step.connections) {
      s["connections"].push_back(ordered_json::array({ordered_json::array({trace.instances.at(c.from.instance).id, c.from.port}),
                                                      ordered_json::array({trace.instances.at(c.to.instance).id, c.to.port})}));
    }
    s["valuations"] = ordered_json::object();
    for (const auto& [key, values] : step.valuations) {
      s["valuations"][trace.instances.at(key.instance).id + "." + key.port] = values;
    }
    doc["steps"].push_back(std::move(s));
  }
  doc["model"] = model_json(trace.model);
  return doc.dump(2) + "\n";
}

}  // namespace factum
