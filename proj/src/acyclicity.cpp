#include "tempodag/acyclicity.hpp"

#include <algorithm>
#include <exception>
#include <set>

#include "tempodag/error.hpp"

namespace tempodag {

Causation causes(const VariableSystem& system, const std::string& a, const std::string& b) {
  return causes(system, system.index_of(a), system.index_of(b));
}

Causation causes(const VariableSystem& system, std::size_t a, std::size_t b) {
  if (a == b)
    fail(ErrorCode::SameVariable, "causation between '" + system.variables().at(a).name() + "' and itself is not defined");
  const auto& dag = system.atomic();
  const auto& reach = system.reachability();

  std::vector<char> passable(dag.node_count());
  for (NodeIndex n = 0; n < dag.node_count(); ++n) {
    const auto owner = system.owner(n);
    passable[n] = owner == VariableSystem::kUnclaimed || owner == static_cast<std::ptrdiff_t>(a) ||
                  owner == static_cast<std::ptrdiff_t>(b);
  }

  Causation result;
  std::set<std::pair<NodeIndex, NodeIndex>> tried;
  for (const auto& [sa, sb] : pairwise_support(system, a, b)) {
    for (auto ta : sa) {
      const NodeIndex u = system.node_of(a, ta);
      for (auto tb : sb) {
        const NodeIndex v = system.node_of(b, tb);
        if (!reach.reaches(u, v) || !tried.emplace(u, v).second) continue;
        if (auto path = dag.find_path(u, v, passable)) {
          result.holds = true;
          result.witnesses.push_back(Witness{u, v, std::move(*path)});
          if (result.witnesses.size() == kMaxWitnesses) return result;
        }
      }
    }
  }
  return result;
}

CompositeGraph::CompositeGraph(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (!by_name_.emplace(names_[i], i).second) fail(ErrorCode::DuplicateVariable, "duplicate node '" + names_[i] + "'");
}

void CompositeGraph::add_edge(std::size_t from, std::size_t to, std::vector<Witness> witnesses) {
  if (from == to) fail(ErrorCode::SameVariable, "composite self-loop on '" + names_.at(from) + "'");
  edges_[{from, to}] = std::move(witnesses);
}

std::size_t CompositeGraph::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) fail(ErrorCode::UnknownVariable, "no graph node named '" + name + "'");
  return it->second;
}

bool CompositeGraph::has_edge(const std::string& from, const std::string& to) const {
  return has_edge(index_of(from), index_of(to));
}

std::vector<std::pair<std::string, std::string>> CompositeGraph::edge_names() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [e, w] : edges_) out.emplace_back(names_[e.first], names_[e.second]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> CompositeGraph::children(std::size_t v) const {
  std::vector<std::size_t> out;
  for (const auto& [e, w] : edges_)
    if (e.first == v) out.push_back(e.second);
  return out;
}

std::vector<std::size_t> CompositeGraph::parents(std::size_t v) const {
  std::vector<std::size_t> out;
  for (const auto& [e, w] : edges_)
    if (e.second == v) out.push_back(e.first);
  return out;
}

std::optional<std::vector<std::string>> CompositeGraph::find_cycle() const {
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(names_.size(), Mark::White);
  std::vector<std::size_t> stack;
  std::optional<std::vector<std::string>> found;

  auto visit = [&](auto&& self, std::size_t u) -> bool {
    mark[u] = Mark::Grey;
    stack.push_back(u);
    for (std::size_t c : children(u)) {
      if (mark[c] == Mark::Grey) {
        auto start = std::find(stack.begin(), stack.end(), c);
        std::vector<std::string> cycle;
        for (auto it = start; it != stack.end(); ++it) cycle.push_back(names_[*it]);
        found = std::move(cycle);
        return true;
      }
      if (mark[c] == Mark::White && self(self, c)) return true;
    }
    stack.pop_back();
    mark[u] = Mark::Black;
    return false;
  };
  for (std::size_t v = 0; v < names_.size(); ++v)
    if (mark[v] == Mark::White && visit(visit, v)) break;
  return found;
}

std::vector<std::pair<std::string, std::string>> CompositeGraph::two_cycles() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [e, w] : edges_) {
    if (!has_edge(e.second, e.first)) continue;
    auto a = names_[e.first], b = names_[e.second];
    if (a < b) out.emplace_back(a, b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CompositeGraph derive_composite_graph(const VariableSystem& system) {
  std::vector<std::string> names;
  for (const auto& v : system.variables()) names.push_back(v.name());
  CompositeGraph graph(std::move(names));
  for (std::size_t a = 0; a < system.size(); ++a)
    for (std::size_t b = 0; b < system.size(); ++b) {
      if (a == b) continue;
      auto c = causes(system, a, b);
      if (c.holds) graph.add_edge(a, b, std::move(c.witnesses));
    }
  return graph;
}

bool precedes(const VariableSystem& system, const std::string& a, const std::string& b) {
  return precedes(system, system.index_of(a), system.index_of(b));
}

bool precedes(const VariableSystem& system, std::size_t a, std::size_t b) {
  const auto pairs = pairwise_support(system, a, b);
  if (pairs.empty())
    fail(ErrorCode::EmptyJointSupport, "no jointly supported subsets for '" + system.variables().at(a).name() +
                                           "' and '" + system.variables().at(b).name() + "'");
  return std::all_of(pairs.begin(), pairs.end(),
                     [](const SubsetPair& p) { return *p.first.rbegin() < *p.second.begin(); });
}

std::string_view to_string(Precedence p) noexcept {
  switch (p) {
    case Precedence::FirstPrecedesSecond: return "first";
    case Precedence::SecondPrecedesFirst: return "second";
    case Precedence::Neither: return "neither";
  }
  return "neither";
}

namespace {

// Any directed atomic path from some a@ta to some b@tb with ta in `from`, tb in `to`.
bool any_path(const VariableSystem& system, std::size_t a, const TimeSet& from, std::size_t b, const TimeSet& to) {
  const auto& reach = system.reachability();
  for (auto ta : from) {
    const NodeIndex u = system.node_of(a, ta);
    for (auto tb : to)
      if (reach.reaches(u, system.node_of(b, tb))) return true;
  }
  return false;
}

}  // namespace

PairClassification classify_pair(const VariableSystem& system, const std::string& a, const std::string& b) {
  return classify_pair(system, system.index_of(a), system.index_of(b));
}

PairClassification classify_pair(const VariableSystem& system, std::size_t a, std::size_t b) {
  const auto& va = system.variables().at(a);
  const auto& vb = system.variables().at(b);
  if (a == b) fail(ErrorCode::SameVariable, "cannot classify '" + va.name() + "' against itself");

  PairClassification out;
  out.first = va.name();
  out.second = vb.name();

  const bool ab = precedes(system, a, b);
  const bool ba = precedes(system, b, a);
  out.precedence = ab ? Precedence::FirstPrecedesSecond : ba ? Precedence::SecondPrecedesFirst : Precedence::Neither;
  out.time_acyclic = ab || ba;

  bool forward = false, backward = false;
  for (const auto& [sa, sb] : pairwise_support(system, a, b)) {
    forward = forward || any_path(system, a, sa, b, sb);
    backward = backward || any_path(system, b, sb, a, sa);
    if (forward && backward) break;
  }
  out.acyclic = !(forward && backward);

  const TimeSet ua = va.support_union(), ub = vb.support_union();
  out.acyclic_product = !(any_path(system, a, ua, b, ub) && any_path(system, b, ub, a, ua));

  out.effect_acyclic = !out.time_acyclic && out.acyclic;

  out.total_effect_acyclic = !(any_path(system, a, va.possible_times(), b, vb.possible_times()) &&
                               any_path(system, b, vb.possible_times(), a, va.possible_times()));
  return out;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> name_ordered_pairs(const VariableSystem& system) {
  std::vector<std::size_t> order(system.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return system.variables()[x].name() < system.variables()[y].name();
  });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) pairs.emplace_back(order[i], order[j]);
  return pairs;
}

void summarize(const VariableSystem& system, SystemClassification& out) {
  for (const auto& p : out.pairs) {
    out.graph_time_acyclic = out.graph_time_acyclic && p.time_acyclic;
    out.graph_acyclic = out.graph_acyclic && p.acyclic;
    out.graph_acyclic_product = out.graph_acyclic_product && p.acyclic_product;
    out.graph_effect_acyclic = out.graph_effect_acyclic && p.effect_acyclic;
    out.graph_total_effect_acyclic = out.graph_total_effect_acyclic && p.total_effect_acyclic;
  }
  out.graph = derive_composite_graph(system);
  out.cycle = out.graph.find_cycle();
  out.composite_is_dag = !out.cycle.has_value();
}

}  // namespace

SystemClassification classify_system(const VariableSystem& system) {
  const auto pairs = name_ordered_pairs(system);
  SystemClassification out;
  out.pairs.resize(pairs.size());
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto [a, b] = pairs[static_cast<std::size_t>(i)];
      out.pairs[static_cast<std::size_t>(i)] = classify_pair(system, a, b);
    } catch (...) {
#pragma omp critical(tempodag_classify_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  summarize(system, out);
  return out;
}

namespace serial {

SystemClassification classify_system(const VariableSystem& system) {
  SystemClassification out;
  for (const auto& [a, b] : name_ordered_pairs(system)) out.pairs.push_back(classify_pair(system, a, b));
  summarize(system, out);
  return out;
}

}  // namespace serial

}  // namespace tempodag
