#include "tempodag/reports.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace tempodag::report {

namespace {

json ticks(const TimeSet& s) {
  json a = json::array();
  for (auto t : s) a.push_back(t.tick());
  return a;
}

json name_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  json a = json::array();
  for (const auto& [x, y] : pairs) a.push_back(json::array({x, y}));
  return a;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string set_text(const std::vector<std::string>& names) { return "{" + join(names, ", ") + "}"; }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string path_text(const AtomicDag& dag, const Witness& w) {
  std::vector<std::string> nodes;
  for (NodeIndex n : w.path) nodes.push_back(to_string(dag.node_at(n)));
  return join(nodes, " -> ");
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

std::string verdict(const SystemClassification& c) {
  if (!c.composite_is_dag) return "cyclic";
  if (c.graph_time_acyclic) return "time_acyclic";
  if (c.graph_acyclic) return "effect_acyclic";
  return "acyclic";
}

json graph_json(const CompositeGraph& graph) {
  json g = json::object();
  g["nodes"] = graph.names();
  std::sort(g["nodes"].begin(), g["nodes"].end());
  g["edges"] = name_pairs(graph.edge_names());
  g["is_dag"] = graph.is_dag();
  g["two_cycles"] = name_pairs(graph.two_cycles());
  return g;
}

json classify_json(const VariableSystem& system, const SystemClassification& c) {
  json doc = json::object();
  doc["command"] = "classify";
  const auto& dag = system.atomic();

  json edges = json::array();
  for (const auto& [from, to] : c.graph.edge_names()) {
    const auto& witnesses = c.graph.edges().at({c.graph.index_of(from), c.graph.index_of(to)});
    json ws = json::array();
    for (const auto& w : witnesses) {
      json path = json::array();
      for (NodeIndex n : w.path) path.push_back(to_string(dag.node_at(n)));
      ws.push_back(std::move(path));
    }
    edges.push_back({{"from", from}, {"to", to}, {"witnesses", std::move(ws)}});
  }

  json pairs = json::array();
  for (const auto& p : c.pairs)
    pairs.push_back({{"first", p.first},
                     {"second", p.second},
                     {"precedence", std::string(to_string(p.precedence))},
                     {"time_acyclic", p.time_acyclic},
                     {"acyclic", p.acyclic},
                     {"acyclic_product", p.acyclic_product},
                     {"effect_acyclic", p.effect_acyclic},
                     {"total_effect_acyclic", p.total_effect_acyclic}});

  json variables = json::array();
  for (const auto& v : system.variables()) {
    json support = json::array();
    for (const auto& s : v.support()) support.push_back({{"times", ticks(s.subset)}, {"probability", s.probability}});
    variables.push_back({{"name", v.name()},
                         {"process", v.process().name()},
                         {"possible", ticks(v.possible_times())},
                         {"aggregation", std::string(to_string(v.aggregation().kind()))},
                         {"support", std::move(support)}});
  }

  json graph = graph_json(c.graph);
  graph["edges"] = std::move(edges);
  graph["verdicts"] = {{"time_acyclic", c.graph_time_acyclic},
                       {"acyclic", c.graph_acyclic},
                       {"acyclic_product", c.graph_acyclic_product},
                       {"effect_acyclic", c.graph_effect_acyclic},
                       {"total_effect_acyclic", c.graph_total_effect_acyclic}};
  graph["cycle"] = c.cycle ? json(*c.cycle) : json(nullptr);

  doc["graph"] = std::move(graph);
  doc["pairs"] = std::move(pairs);
  doc["variables"] = std::move(variables);
  doc["verdict"] = verdict(c);
  return doc;
}

void classify_text(std::ostream& out, const VariableSystem& system, const SystemClassification& c, const Style& style) {
  out << style.strong("Composite graph") << '\n';
  const auto edges = c.graph.edge_names();
  if (edges.empty()) out << "  (no edges)\n";
  for (const auto& [from, to] : edges) {
    const auto& ws = c.graph.edges().at({c.graph.index_of(from), c.graph.index_of(to)});
    out << "  " << from << " -> " << to;
    if (!ws.empty()) out << "   via " << path_text(system.atomic(), ws.front());
    if (ws.size() > 1) out << " (+" << ws.size() - 1 << " more)";
    out << '\n';
  }

  if (!c.pairs.empty()) {
    out << '\n' << style.strong("Pairs") << '\n';
    const std::vector<std::string> head{"pair", "precedes", "time-acyclic", "acyclic", "effect-acyclic",
                                        "total-effect-acyclic"};
    std::size_t pair_width = head[0].size();
    for (const auto& p : c.pairs) pair_width = std::max(pair_width, p.first.size() + p.second.size() + 3);
    out << "  " << pad(head[0], pair_width);
    for (std::size_t i = 1; i < head.size(); ++i) out << "  " << head[i];
    out << '\n';
    for (const auto& p : c.pairs) {
      out << "  " << pad(p.first + " , " + p.second, pair_width);
      const bool flags[] = {p.time_acyclic, p.acyclic, p.effect_acyclic, p.total_effect_acyclic};
      out << "  " << pad(std::string(to_string(p.precedence)), head[1].size());
      for (std::size_t i = 0; i < 4; ++i) {
        const std::string text = flags[i] ? "yes" : "no";
        out << "  " << (flags[i] ? style.good(text) : style.bad(text)) << std::string(head[i + 2].size() - text.size(), ' ');
      }
      out << '\n';
      if (p.acyclic != p.acyclic_product)
        out << "    (product of marginal supports: acyclic " << (p.acyclic_product ? "yes" : "no") << ")\n";
    }
  }

  out << '\n' << style.strong("Graph") << '\n';
  out << "  time-acyclic          " << style.flag(c.graph_time_acyclic) << '\n';
  out << "  acyclic               " << style.flag(c.graph_acyclic) << '\n';
  out << "  effect-acyclic        " << style.flag(c.graph_effect_acyclic) << '\n';
  out << "  total-effect-acyclic  " << style.flag(c.graph_total_effect_acyclic) << '\n';
  out << "  DAG                   " << style.flag(c.composite_is_dag) << '\n';
  if (c.cycle) out << "  cycle                 " << join(*c.cycle, " -> ") << " -> " << c.cycle->front() << '\n';
  const std::string v = verdict(c);
  out << "\nVerdict: " << (v == "cyclic" ? style.bad(v) : style.good(v)) << '\n';
}

json unroll_json(const UnrollOutcome& u) {
  json steps = json::array();
  for (const auto& s : u.steps) {
    json partition = json::array();
    for (const auto& block : s.partition) partition.push_back(ticks(block));
    steps.push_back({{"variable", s.variable}, {"partition", std::move(partition)}});
  }
  return {{"command", "unroll"},
          {"steps", std::move(steps)},
          {"before", graph_json(u.before)},
          {"after", graph_json(u.after)},
          {"output", u.output_path}};
}

void unroll_text(std::ostream& out, const UnrollOutcome& u, const Style& style) {
  auto graph = [&](const char* title, const CompositeGraph& g) {
    out << style.strong(title) << "  (" << (g.is_dag() ? style.good("DAG") : style.bad("cyclic")) << ")\n";
    std::vector<std::string> nodes = g.names();
    std::sort(nodes.begin(), nodes.end());
    out << "  nodes: " << join(nodes, ", ") << '\n';
    for (const auto& [from, to] : g.edge_names()) out << "  " << from << " -> " << to << '\n';
  };
  graph("Before", u.before);
  out << '\n' << style.strong("Splits") << '\n';
  for (const auto& s : u.steps) {
    std::vector<std::string> blocks;
    for (std::size_t i = 0; i < s.partition.size(); ++i)
      blocks.push_back(unrolled_name(s.variable, i) + "=" + to_string(s.partition[i]));
    out << "  " << s.variable << " -> " << join(blocks, ", ") << '\n';
  }
  out << '\n';
  graph("After", u.after);
  out << "\nWrote " << u.output_path << '\n';
}

json faithfulness_json(const std::vector<FaithfulnessViolation>& violations) {
  json list = json::array();
  for (const auto& v : violations)
    list.push_back({{"first", v.first},
                    {"second", v.second},
                    {"conditioning", v.conditioning},
                    {"partial_correlation", v.partial_correlation}});
  return {{"command", "faithfulness"}, {"faithful", violations.empty()}, {"violations", std::move(list)}};
}

void faithfulness_text(std::ostream& out, const std::vector<FaithfulnessViolation>& violations, const Style& style) {
  if (violations.empty()) {
    out << style.good("faithful") << ": every d-connected pair is dependent\n";
    return;
  }
  out << style.bad(std::to_string(violations.size()) + " faithfulness violation" + (violations.size() == 1 ? "" : "s"))
      << '\n';
  for (const auto& v : violations)
    out << "  " << v.first << " _||_ " << v.second << " | " << set_text(v.conditioning)
        << "  (d-connected; partial correlation " << number(v.partial_correlation) << ")\n";
}

json discover_json(const DiscoveryOutcome& d) {
  json separating = json::array();
  for (const auto& [pair, set] : d.skeleton.separating_sets)
    separating.push_back({{"pair", json::array({pair.first, pair.second})}, {"set", set}});
  json skeleton = {{"nodes", d.skeleton.graph.names()},
                   {"edges", name_pairs(d.skeleton.graph.undirected_edges())},
                   {"separating_sets", std::move(separating)}};
  json vs = json::array();
  for (const auto& v : d.v_structures) vs.push_back({{"left", v.left}, {"collider", v.collider}, {"right", v.right}});
  json pdag = {{"nodes", d.pdag.names()},
               {"directed", name_pairs(d.pdag.directed_edges())},
               {"undirected", name_pairs(d.pdag.undirected_edges())}};
  json temporal = json::array();
  for (const auto& t : d.temporal) {
    json offending = json::array();
    for (const auto& [a, b] : t.offending) offending.push_back({{"from_times", ticks(a)}, {"to_times", ticks(b)}});
    temporal.push_back({{"from", t.from}, {"to", t.to}, {"offending", std::move(offending)}});
  }
  json doc = {{"command", "discover"},
              {"oracle", d.empirical ? "fisher_z" : "exact"},
              {"skeleton", std::move(skeleton)},
              {"v_structures", std::move(vs)},
              {"pdag", std::move(pdag)},
              {"temporal_violations", std::move(temporal)}};
  if (d.empirical)
    doc["empirical"] = {{"samples", d.empirical->samples}, {"seed", d.empirical->seed}, {"alpha", d.empirical->alpha}};
  return doc;
}

void discover_text(std::ostream& out, const DiscoveryOutcome& d, const Style& style) {
  out << style.strong("Oracle") << ": ";
  if (d.empirical)
    out << "Fisher z, " << d.empirical->samples << " samples, seed " << d.empirical->seed << ", alpha "
        << number(d.empirical->alpha) << '\n';
  else
    out << "exact\n";

  out << '\n' << style.strong("Skeleton") << '\n';
  const auto edges = d.skeleton.graph.undirected_edges();
  if (edges.empty()) out << "  (no edges)\n";
  for (const auto& [a, b] : edges) out << "  " << a << " - " << b << '\n';
  for (const auto& [pair, set] : d.skeleton.separating_sets)
    out << "  sep(" << pair.first << ", " << pair.second << ") = " << set_text(set) << '\n';

  out << '\n' << style.strong("V-structures") << '\n';
  if (d.v_structures.empty()) out << "  (none)\n";
  for (const auto& v : d.v_structures) out << "  " << v.left << " -> " << v.collider << " <- " << v.right << '\n';

  out << '\n' << style.strong("Oriented graph") << '\n';
  if (d.pdag.directed_edges().empty() && d.pdag.undirected_edges().empty()) out << "  (no edges)\n";
  for (const auto& [a, b] : d.pdag.directed_edges()) out << "  " << a << " -> " << b << '\n';
  for (const auto& [a, b] : d.pdag.undirected_edges()) out << "  " << a << " - " << b << '\n';

  out << '\n' << style.strong("Temporal consistency") << '\n';
  if (d.temporal.empty()) out << "  " << style.good("all directed edges respect time order") << '\n';
  for (const auto& t : d.temporal) {
    std::vector<std::string> pairs;
    for (const auto& [a, b] : t.offending) pairs.push_back(to_string(a) + " not before " + to_string(b));
    out << "  " << style.bad(t.from + " -> " + t.to) << " points backward in time: " << join(pairs, "; ") << '\n';
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace tempodag::report
