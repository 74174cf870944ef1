#include "tempodag/spec_format.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <json.hpp>

namespace tempodag {

using json = nlohmann::json;

namespace {

std::string child(const std::string& pointer, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return pointer + "/" + escaped;
}

std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

[[noreturn]] void schema_error(const std::string& pointer, const std::string& message) {
  throw SpecError(ErrorCode::SchemaError, message, pointer);
}

[[noreturn]] void anchored(const Error& e, const std::string& pointer) { throw SpecError(e.code(), e.what(), pointer); }

std::string where(const std::string& pointer) { return pointer.empty() ? "document root" : "'" + pointer + "'"; }

void expect_object(const json& j, const std::string& pointer, const std::set<std::string>& required,
                   const std::set<std::string>& optional) {
  if (!j.is_object()) schema_error(pointer, where(pointer) + " must be an object");
  for (const auto& key : required)
    if (!j.contains(key)) schema_error(pointer, where(pointer) + " is missing required field '" + key + "'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!required.contains(it.key()) && !optional.contains(it.key()))
      schema_error(child(pointer, it.key()), "unknown field '" + it.key() + "' in " + where(pointer));
}

const json& expect_array(const json& j, const std::string& pointer) {
  if (!j.is_array()) schema_error(pointer, where(pointer) + " must be an array");
  return j;
}

std::string as_string(const json& j, const std::string& pointer) {
  if (!j.is_string()) schema_error(pointer, where(pointer) + " must be a string");
  return j.get<std::string>();
}

std::int64_t as_tick(const json& j, const std::string& pointer) {
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) schema_error(pointer, "tick at " + where(pointer) + " is too large");
    return static_cast<std::int64_t>(v);
  }
  if (!j.is_number_integer()) schema_error(pointer, where(pointer) + " must be an integer tick");
  return j.get<std::int64_t>();
}

double as_number(const json& j, const std::string& pointer) {
  if (!j.is_number()) schema_error(pointer, where(pointer) + " must be a number");
  return j.get<double>();
}

std::vector<std::int64_t> as_ticks(const json& j, const std::string& pointer) {
  expect_array(j, pointer);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_tick(j[i], child(pointer, i)));
  return out;
}

AggregationText read_aggregation(const json& j, const std::string& pointer) {
  expect_object(j, pointer, {"kind"}, {"weights"});
  AggregationText out;
  out.kind = as_string(j["kind"], child(pointer, "kind"));
  if (out.kind != "identity" && out.kind != "mean" && out.kind != "weighted_sum")
    schema_error(child(pointer, "kind"), "aggregation kind must be identity, mean or weighted_sum, got '" + out.kind + "'");
  if (j.contains("weights")) {
    const std::string wp = child(pointer, "weights");
    expect_array(j["weights"], wp);
    std::vector<double> w;
    for (std::size_t i = 0; i < j["weights"].size(); ++i) w.push_back(as_number(j["weights"][i], child(wp, i)));
    out.weights = std::move(w);
  }
  if (out.kind == "weighted_sum" && !out.weights) schema_error(pointer, "weighted_sum aggregation needs 'weights'");
  if (out.kind != "weighted_sum" && out.weights) schema_error(child(pointer, "weights"), "only weighted_sum takes weights");
  return out;
}

VariableSpec read_variable(const json& j, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, where(pointer) + " must be an object");
  if (!j.contains("kind")) schema_error(pointer, where(pointer) + " is missing required field 'kind'");
  VariableSpec v;
  v.kind = as_string(j["kind"], child(pointer, "kind"));
  if (v.kind == "selection")
    expect_object(j, pointer, {"name", "process", "kind", "chosen"}, {"possible"});
  else if (v.kind == "mixture")
    expect_object(j, pointer, {"name", "process", "kind", "support"}, {"possible", "aggregation"});
  else if (v.kind == "aggregate")
    expect_object(j, pointer, {"name", "process", "kind", "times", "aggregation"}, {"possible"});
  else
    schema_error(child(pointer, "kind"), "variable kind must be selection, mixture or aggregate, got '" + v.kind + "'");

  v.name = as_string(j["name"], child(pointer, "name"));
  v.process = as_string(j["process"], child(pointer, "process"));
  if (j.contains("possible")) v.possible = as_ticks(j["possible"], child(pointer, "possible"));
  if (j.contains("chosen")) v.chosen = as_tick(j["chosen"], child(pointer, "chosen"));
  if (j.contains("times")) v.times = as_ticks(j["times"], child(pointer, "times"));
  if (j.contains("aggregation")) v.aggregation = read_aggregation(j["aggregation"], child(pointer, "aggregation"));
  if (j.contains("support")) {
    const std::string sp = child(pointer, "support");
    expect_array(j["support"], sp);
    std::vector<SupportSpec> support;
    for (std::size_t i = 0; i < j["support"].size(); ++i) {
      const std::string ep = child(sp, i);
      const json& e = j["support"][i];
      expect_object(e, ep, {"times", "probability"}, {});
      SupportSpec s{as_ticks(e["times"], child(ep, "times")), as_string(e["probability"], child(ep, "probability"))};
      parse_probability(s.probability, child(ep, "probability"));
      support.push_back(std::move(s));
    }
    v.support = std::move(support);
  }
  return v;
}

std::pair<std::string, std::string> read_edge(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.size() != 2) schema_error(pointer, "edge " + where(pointer) + " must be a [from, to] pair");
  return {as_string(j[0], child(pointer, 0)), as_string(j[1], child(pointer, 1))};
}

ScmSpec read_scm(const json& j, const std::string& pointer) {
  expect_object(j, pointer, {"coefficients"}, {"noise_variances"});
  ScmSpec out;
  const std::string cp = child(pointer, "coefficients");
  expect_array(j["coefficients"], cp);
  for (std::size_t i = 0; i < j["coefficients"].size(); ++i) {
    const std::string ep = child(cp, i);
    const json& e = j["coefficients"][i];
    expect_object(e, ep, {"from", "to", "value"}, {});
    out.coefficients.push_back(
        {as_string(e["from"], child(ep, "from")), as_string(e["to"], child(ep, "to")), as_number(e["value"], child(ep, "value"))});
  }
  if (j.contains("noise_variances")) {
    const std::string np = child(pointer, "noise_variances");
    expect_array(j["noise_variances"], np);
    std::vector<NoiseSpec> noise;
    for (std::size_t i = 0; i < j["noise_variances"].size(); ++i) {
      const std::string ep = child(np, i);
      const json& e = j["noise_variances"][i];
      expect_object(e, ep, {"node", "value"}, {});
      noise.push_back({as_string(e["node"], child(ep, "node")), as_number(e["value"], child(ep, "value"))});
    }
    out.noise_variances = std::move(noise);
  }
  return out;
}

json ticks_json(const std::vector<std::int64_t>& ticks) {
  json a = json::array();
  for (auto t : ticks) a.push_back(t);
  return a;
}

json aggregation_json(const AggregationText& a) {
  json o = json::object();
  o["kind"] = a.kind;
  if (a.weights) o["weights"] = *a.weights;
  return o;
}

std::vector<std::int64_t> ticks_of(const TimeSet& s) {
  std::vector<std::int64_t> out;
  for (auto t : s) out.push_back(t.tick());
  return out;
}

TimeSet time_set(const std::vector<std::int64_t>& ticks, const std::string& pointer) {
  TimeSet out;
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    try {
      if (!out.insert(TimePoint(ticks[i])).second)
        schema_error(child(pointer, i), "tick " + std::to_string(ticks[i]) + " listed twice");
    } catch (const SpecError&) {
      throw;
    } catch (const Error& e) {
      anchored(e, child(pointer, i));
    }
  }
  return out;
}

AggregationSpec make_aggregation(const AggregationText& a) {
  if (a.kind == "mean") return AggregationSpec::mean();
  if (a.kind == "weighted_sum") return AggregationSpec::weighted_sum(*a.weights);
  return AggregationSpec::identity();
}

std::string variable_field_for(ErrorCode code, const VariableSpec& v) {
  switch (code) {
    case ErrorCode::BadDistribution:
    case ErrorCode::DuplicateSubset:
      return "support";
    case ErrorCode::BadAggregation:
      return "aggregation";
    case ErrorCode::ArityMismatch:
      return v.kind == "mixture" ? "support" : "aggregation";
    case ErrorCode::TimePointNotPossible:
      return v.possible ? "possible" : "";
    case ErrorCode::InvalidProcessName:
      return "process";
    default:
      return "";
  }
}

CompositeVariable build_variable(const VariableSpec& v, const std::string& pointer) {
  try {
    ProcessId process(v.process);
    if (v.kind == "selection") {
      const TimePoint chosen(*v.chosen);
      TimeSet possible = v.possible ? time_set(*v.possible, child(pointer, "possible")) : TimeSet{chosen};
      return make_selection(v.name, process, std::move(possible), chosen);
    }
    if (v.kind == "mixture") {
      std::vector<SupportEntry> support;
      TimeSet all;
      for (std::size_t i = 0; i < v.support->size(); ++i) {
        const std::string ep = child(child(pointer, "support"), i);
        const auto& entry = (*v.support)[i];
        TimeSet subset = time_set(entry.times, child(ep, "times"));
        all.insert(subset.begin(), subset.end());
        support.push_back({std::move(subset), parse_probability(entry.probability, child(ep, "probability"))});
      }
      TimeSet possible = v.possible ? time_set(*v.possible, child(pointer, "possible")) : all;
      return make_mixture(v.name, process, std::move(possible), std::move(support),
                          v.aggregation ? make_aggregation(*v.aggregation) : AggregationSpec::identity());
    }
    TimeSet times = time_set(*v.times, child(pointer, "times"));
    if (v.possible) {
      const TimeSet possible = time_set(*v.possible, child(pointer, "possible"));
      for (auto t : times)
        if (!possible.contains(t))
          fail(ErrorCode::TimePointNotPossible,
               "time " + std::to_string(t.tick()) + " of '" + v.name + "' is not among its possible times");
      return CompositeVariable(v.name, process, possible, times.size(), {{times, 1.0}}, make_aggregation(*v.aggregation));
    }
    return make_aggregate(v.name, process, std::move(times), make_aggregation(*v.aggregation));
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    const std::string field = variable_field_for(e.code(), v);
    anchored(e, field.empty() ? pointer : child(pointer, field));
  }
}

AtomicNode node_at(const std::string& text, const std::string& pointer) {
  try {
    return parse_node(text);
  } catch (const Error& e) {
    anchored(e, pointer);
  }
}

}  // namespace

double parse_probability(const std::string& text, const std::string& pointer) {
  std::size_t digits = 0, dots = 0;
  for (char c : text) {
    if (c >= '0' && c <= '9') ++digits;
    else if (c == '.') ++dots;
    else digits = 0, dots = 99;
  }
  if (digits == 0 || dots > 1 || text.back() == '.')
    schema_error(pointer, "probability must be a decimal string such as \"0.25\", got \"" + text + "\"");
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    schema_error(pointer, "probability \"" + text + "\" is not a decimal number");
  return value;
}

SystemSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string message = e.what();
    if (auto pos = message.find("syntax error"); pos != std::string::npos) message = message.substr(pos);
    throw SpecError(ErrorCode::ParseError, message, "", e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object()) schema_error("", "a spec must be a JSON object");
  if (!doc.contains("version")) schema_error("", "document root is missing required field 'version'");
  SystemSpec spec;
  spec.version = as_string(doc["version"], "/version");
  if (spec.version != kSpecVersion)
    throw SpecError(ErrorCode::UnsupportedVersion,
                    "unsupported spec version '" + spec.version + "', expected '" + kSpecVersion + "'", "/version");
  expect_object(doc, "", {"version", "processes", "nodes", "edges", "variables"}, {"scm", "joint"});

  expect_array(doc["processes"], "/processes");
  for (std::size_t i = 0; i < doc["processes"].size(); ++i) {
    const std::string p = child("/processes", i);
    const json& e = doc["processes"][i];
    expect_object(e, p, {"name", "unit"}, {});
    spec.processes.push_back({as_string(e["name"], child(p, "name")), as_string(e["unit"], child(p, "unit"))});
  }
  expect_array(doc["nodes"], "/nodes");
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) spec.nodes.push_back(as_string(doc["nodes"][i], child("/nodes", i)));
  expect_array(doc["edges"], "/edges");
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) spec.edges.push_back(read_edge(doc["edges"][i], child("/edges", i)));
  if (doc.contains("scm")) spec.scm = read_scm(doc["scm"], "/scm");
  expect_array(doc["variables"], "/variables");
  for (std::size_t i = 0; i < doc["variables"].size(); ++i)
    spec.variables.push_back(read_variable(doc["variables"][i], child("/variables", i)));
  if (doc.contains("joint")) {
    expect_array(doc["joint"], "/joint");
    std::vector<JointRowSpec> rows;
    for (std::size_t i = 0; i < doc["joint"].size(); ++i) {
      const std::string p = child("/joint", i);
      const json& e = doc["joint"][i];
      expect_object(e, p, {"assignment", "probability"}, {});
      JointRowSpec row;
      const std::string ap = child(p, "assignment");
      if (!e["assignment"].is_object()) schema_error(ap, where(ap) + " must be an object");
      for (auto it = e["assignment"].begin(); it != e["assignment"].end(); ++it)
        row.assignment[it.key()] = as_ticks(it.value(), child(ap, it.key()));
      row.probability = as_string(e["probability"], child(p, "probability"));
      parse_probability(row.probability, child(p, "probability"));
      rows.push_back(std::move(row));
    }
    spec.joint = std::move(rows);
  }
  return spec;
}

std::string serialize_spec(const SystemSpec& spec) {
  json doc = json::object();
  doc["version"] = spec.version;
  doc["processes"] = json::array();
  for (const auto& p : spec.processes) doc["processes"].push_back({{"name", p.name}, {"unit", p.unit}});
  doc["nodes"] = spec.nodes;
  doc["edges"] = json::array();
  for (const auto& [from, to] : spec.edges) doc["edges"].push_back(json::array({from, to}));
  if (spec.scm) {
    json scm = json::object();
    scm["coefficients"] = json::array();
    for (const auto& c : spec.scm->coefficients)
      scm["coefficients"].push_back({{"from", c.from}, {"to", c.to}, {"value", c.value}});
    if (spec.scm->noise_variances) {
      scm["noise_variances"] = json::array();
      for (const auto& n : *spec.scm->noise_variances) scm["noise_variances"].push_back({{"node", n.node}, {"value", n.value}});
    }
    doc["scm"] = std::move(scm);
  }
  doc["variables"] = json::array();
  for (const auto& v : spec.variables) {
    json o = json::object();
    o["name"] = v.name;
    o["process"] = v.process;
    o["kind"] = v.kind;
    if (v.possible) o["possible"] = ticks_json(*v.possible);
    if (v.chosen) o["chosen"] = *v.chosen;
    if (v.times) o["times"] = ticks_json(*v.times);
    if (v.aggregation) o["aggregation"] = aggregation_json(*v.aggregation);
    if (v.support) {
      o["support"] = json::array();
      for (const auto& s : *v.support) o["support"].push_back({{"times", ticks_json(s.times)}, {"probability", s.probability}});
    }
    doc["variables"].push_back(std::move(o));
  }
  if (spec.joint) {
    doc["joint"] = json::array();
    for (const auto& row : *spec.joint) {
      json assignment = json::object();
      for (const auto& [name, ticks] : row.assignment) assignment[name] = ticks_json(ticks);
      doc["joint"].push_back({{"assignment", std::move(assignment)}, {"probability", row.probability}});
    }
  }
  return doc.dump(2) + "\n";
}

LoadedSystem build(const SystemSpec& spec) {
  std::set<std::string> processes;
  for (std::size_t i = 0; i < spec.processes.size(); ++i) {
    const std::string p = child("/processes", i);
    try {
      ProcessId check(spec.processes[i].name);
    } catch (const Error& e) {
      anchored(e, child(p, "name"));
    }
    if (!processes.insert(spec.processes[i].name).second)
      throw SpecError(ErrorCode::DuplicateProcess, "process '" + spec.processes[i].name + "' declared twice",
                      child(p, "name"));
  }

  AtomicDag dag;
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    const std::string p = child("/nodes", i);
    const AtomicNode n = node_at(spec.nodes[i], p);
    if (!processes.contains(n.process.name()))
      throw SpecError(ErrorCode::UnknownProcess, "node " + spec.nodes[i] + " uses undeclared process '" +
                                                     n.process.name() + "'", p);
    try {
      dag.add_node(n);
    } catch (const Error& e) {
      anchored(e, p);
    }
  }
  for (std::size_t i = 0; i < spec.edges.size(); ++i) {
    const std::string p = child("/edges", i);
    const AtomicNode from = node_at(spec.edges[i].first, child(p, 0));
    const AtomicNode to = node_at(spec.edges[i].second, child(p, 1));
    try {
      dag.add_edge(from, to);
    } catch (const Error& e) {
      anchored(e, p);
    }
  }

  std::vector<CompositeVariable> vars;
  std::set<std::string> names;
  std::map<AtomicNode, std::string> claimed;
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    const std::string p = child("/variables", i);
    const auto& v = spec.variables[i];
    if (!processes.contains(v.process))
      throw SpecError(ErrorCode::UnknownProcess, "variable '" + v.name + "' uses undeclared process '" + v.process + "'",
                      child(p, "process"));
    if (!names.insert(v.name).second)
      throw SpecError(ErrorCode::DuplicateVariable, "variable '" + v.name + "' defined twice", child(p, "name"));
    CompositeVariable var = build_variable(v, p);
    for (auto t : var.possible_times()) {
      const AtomicNode n{var.process(), t};
      if (!dag.contains(n))
        throw SpecError(ErrorCode::UnknownAtomicNode,
                        "variable '" + v.name + "' uses time " + std::to_string(t.tick()) + ", but " + to_string(n) +
                            " is not an atomic node",
                        p);
      auto [it, inserted] = claimed.emplace(n, v.name);
      if (!inserted)
        throw SpecError(ErrorCode::ProcessTimeCollision,
                        "variables '" + it->second + "' and '" + v.name + "' both claim " + to_string(n), p);
    }
    vars.push_back(std::move(var));
  }

  std::optional<std::vector<JointAssignment>> joint;
  if (spec.joint) {
    joint.emplace();
    for (std::size_t i = 0; i < spec.joint->size(); ++i) {
      const std::string p = child("/joint", i);
      const auto& row = (*spec.joint)[i];
      JointAssignment a;
      for (const auto& [name, ticks] : row.assignment) a.subsets[name] = time_set(ticks, child(child(p, "assignment"), name));
      a.probability = parse_probability(row.probability, child(p, "probability"));
      joint->push_back(std::move(a));
    }
  }

  std::optional<VariableSystem> system;
  try {
    system.emplace(build_system(dag, std::move(vars), std::move(joint)));
  } catch (const Error& e) {
    anchored(e, spec.joint ? "/joint" : "/variables");
  }

  std::optional<LinearScm> scm;
  if (spec.scm) {
    std::map<EdgeKey, double> coefficients;
    for (std::size_t i = 0; i < spec.scm->coefficients.size(); ++i) {
      const std::string p = child("/scm/coefficients", i);
      const auto& c = spec.scm->coefficients[i];
      const EdgeKey key{node_at(c.from, child(p, "from")), node_at(c.to, child(p, "to"))};
      auto from = dag.find(key.first), to = dag.find(key.second);
      if (!from || !to || !dag.has_edge(*from, *to))
        throw SpecError(ErrorCode::UnexpectedCoefficient,
                        "coefficient for " + c.from + " -> " + c.to + ", which is not an atomic edge", p);
      if (!coefficients.emplace(key, c.value).second)
        schema_error(p, "coefficient for " + c.from + " -> " + c.to + " given twice");
    }
    std::map<AtomicNode, double> noise;
    if (spec.scm->noise_variances) {
      for (std::size_t i = 0; i < spec.scm->noise_variances->size(); ++i) {
        const std::string p = child("/scm/noise_variances", i);
        const auto& n = (*spec.scm->noise_variances)[i];
        const AtomicNode node = node_at(n.node, child(p, "node"));
        if (!dag.contains(node)) throw SpecError(ErrorCode::UnknownNode, "noise variance for unknown node " + n.node, p);
        if (!noise.emplace(node, n.value).second) schema_error(p, "noise variance for " + n.node + " given twice");
      }
    } else {
      for (const auto& n : dag.nodes()) noise.emplace(n, 1.0);
    }
    try {
      scm.emplace(dag, coefficients, noise);
    } catch (const Error& e) {
      anchored(e, e.code() == ErrorCode::BadNoiseVariance ? "/scm/noise_variances" : "/scm/coefficients");
    }
  }
  return {std::move(*system), std::move(scm)};
}

SystemSpec unrolled_spec(const SystemSpec& original, const VariableSystem& unrolled) {
  SystemSpec out = original;
  std::map<std::string, const VariableSpec*> kept;
  for (const auto& v : original.variables) kept.emplace(v.name, &v);

  out.variables.clear();
  std::map<std::string, TimeSet> added;
  for (const auto& var : unrolled.variables()) {
    if (auto it = kept.find(var.name()); it != kept.end()) {
      out.variables.push_back(*it->second);
      continue;
    }
    VariableSpec v;
    v.name = var.name();
    v.process = var.process().name();
    v.kind = "aggregate";
    v.possible = ticks_of(var.possible_times());
    v.times = ticks_of(var.deterministic_subset());
    AggregationText a{std::string(to_string(var.aggregation().kind())), std::nullopt};
    if (var.aggregation().kind() == AggregationKind::WeightedSum) a.weights = var.aggregation().weights();
    v.aggregation = std::move(a);
    added.emplace(v.name, var.deterministic_subset());
    out.variables.push_back(std::move(v));
  }
  if (out.joint) {
    for (auto& row : *out.joint) {
      for (auto it = row.assignment.begin(); it != row.assignment.end();)
        it = unrolled.contains(it->first) ? std::next(it) : row.assignment.erase(it);
      for (const auto& [name, subset] : added) row.assignment[name] = ticks_of(subset);
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace tempodag
