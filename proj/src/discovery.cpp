#include "tempodag/discovery.hpp"

#include <algorithm>
#include <deque>

#include "tempodag/error.hpp"

namespace tempodag {

namespace {

// Calls visit(subset) for every size-k subset of `items` in lexicographic
// index order; stops early when visit returns true.
template <typename Visit>
bool for_each_subset(const std::vector<std::size_t>& items, std::size_t k, Visit&& visit) {
  if (k > items.size()) return false;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  std::vector<std::size_t> subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = items[pick[i]];
    if (visit(subset)) return true;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == items.size() - k + (i - 1)) --i;
    if (i == 0) return false;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

bool d_separated(std::span<const std::vector<std::size_t>> children, std::size_t a, std::size_t b,
                 std::span<const std::size_t> conditioning) {
  const std::size_t n = children.size();
  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t c : children[u]) parents[c].push_back(u);

  std::vector<char> observed(n, 0), has_observed_descendant(n, 0);
  std::vector<std::size_t> stack(conditioning.begin(), conditioning.end());
  for (std::size_t z : conditioning) observed[z] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (has_observed_descendant[v]) continue;
    has_observed_descendant[v] = 1;
    for (std::size_t p : parents[v]) stack.push_back(p);
  }

  // State (v, up): arrived at v from a child (up) or from a parent (down).
  std::vector<char> visited(2 * n, 0);
  std::deque<std::pair<std::size_t, bool>> queue{{a, true}};
  while (!queue.empty()) {
    const auto [v, up] = queue.front();
    queue.pop_front();
    if (visited[2 * v + up]) continue;
    visited[2 * v + up] = 1;
    if (v == b && !observed[v]) return false;
    if (up && !observed[v]) {
      for (std::size_t p : parents[v]) queue.emplace_back(p, true);
      for (std::size_t c : children[v]) queue.emplace_back(c, false);
    } else if (!up) {
      if (!observed[v])
        for (std::size_t c : children[v]) queue.emplace_back(c, false);
      if (has_observed_descendant[v])
        for (std::size_t p : parents[v]) queue.emplace_back(p, true);
    }
  }
  return true;
}

bool d_separated(const CompositeGraph& graph, const std::string& a, const std::string& b,
                 const std::vector<std::string>& conditioning) {
  if (auto cycle = graph.find_cycle()) fail(ErrorCode::NotADag, "the composite graph has a directed cycle");
  const std::size_t ia = graph.index_of(a), ib = graph.index_of(b);
  if (ia == ib) fail(ErrorCode::SameVariable, "d-separation needs two distinct variables, got '" + a + "' twice");
  std::vector<std::size_t> cond;
  for (const auto& c : conditioning) {
    const std::size_t ic = graph.index_of(c);
    if (ic == ia || ic == ib) fail(ErrorCode::SameVariable, "'" + c + "' is both an endpoint and conditioned on");
    cond.push_back(ic);
  }
  std::vector<std::vector<std::size_t>> children(graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v) children[v] = graph.children(v);
  return d_separated(children, ia, ib, cond);
}

bool d_separated(const AtomicDag& dag, NodeIndex a, NodeIndex b, std::span<const NodeIndex> conditioning) {
  std::vector<std::vector<std::size_t>> children(dag.node_count());
  for (NodeIndex v = 0; v < dag.node_count(); ++v) children[v].assign(dag.children(v).begin(), dag.children(v).end());
  return d_separated(children, a, b, conditioning);
}

std::vector<FaithfulnessViolation> audit_faithfulness(const VariableSystem& system, const LinearScm& scm,
                                                      const AuditOptions& options) {
  const CompositeGraph graph = derive_composite_graph(system);
  if (auto cycle = graph.find_cycle()) {
    std::string text;
    for (const auto& name : *cycle) text += name + " -> ";
    fail(ErrorCode::NotADag, "the derived composite graph has a cycle " + text + cycle->front());
  }
  const ExactOracle oracle(system, scm);
  const std::size_t n = system.size();
  if (n > kMaxAuditVariables && !options.max_conditioning_size)
    fail(ErrorCode::TooManyVariables, "exhaustive audit is limited to " + std::to_string(kMaxAuditVariables) +
                                          " variables; give a maximum conditioning-set size for " +
                                          std::to_string(n));

  std::vector<std::string> names;
  for (const auto& v : system.variables()) names.push_back(v.name());
  std::sort(names.begin(), names.end());

  std::vector<FaithfulnessViolation> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < n; ++k)
        if (k != i && k != j) rest.push_back(k);
      const std::size_t max_size = std::min(rest.size(), options.max_conditioning_size.value_or(rest.size()));
      for (std::size_t size = 0; size <= max_size; ++size)
        for_each_subset(rest, size, [&](const std::vector<std::size_t>& subset) {
          std::vector<std::string> cond;
          for (std::size_t k : subset) cond.push_back(names[k]);
          if (d_separated(graph, names[i], names[j], cond)) return false;
          const CiResult r = oracle.test(names[i], names[j], cond);
          if (r.independent) out.push_back({names[i], names[j], cond, r.partial_correlation});
          return false;
        });
    }
  return out;
}

Skeleton pc_skeleton(const IndependenceOracle& oracle, std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  Skeleton out{Pdag(names), {}};
  Pdag& g = out.graph;
  const std::size_t n = names.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) g.add_undirected(a, b);

  for (std::size_t level = 0;; ++level) {
    bool any_testable = false;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y : g.adjacents(x)) {
        if (!g.adjacent(x, y)) continue;
        std::vector<std::size_t> others;
        for (std::size_t z : g.adjacents(x))
          if (z != y) others.push_back(z);
        if (others.size() < level) continue;
        any_testable = true;
        for_each_subset(others, level, [&](const std::vector<std::size_t>& subset) {
          std::vector<std::string> cond;
          for (std::size_t k : subset) cond.push_back(names[k]);
          if (!oracle.independent(names[x], names[y], cond)) return false;
          g.remove(x, y);
          out.separating_sets[{names[std::min(x, y)], names[std::max(x, y)]}] = std::move(cond);
          return true;
        });
      }
    if (!any_testable) break;
  }
  return out;
}

std::vector<TemporalViolation> temporal_consistency_report(const Pdag& pdag, const VariableSystem& system) {
  std::vector<TemporalViolation> out;
  for (const auto& name : pdag.names()) system.index_of(name);
  for (const auto& [from, to] : pdag.directed_edges()) {
    TemporalViolation v{from, to, {}};
    for (const auto& pair : pairwise_support(system, from, to))
      if (*pair.first.rbegin() >= *pair.second.begin()) v.offending.push_back(pair);
    if (!v.offending.empty()) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace tempodag
