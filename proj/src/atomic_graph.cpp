#include "tempodag/atomic_graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>

#include "tempodag/error.hpp"

namespace tempodag {

TimePoint::TimePoint(std::int64_t tick) : tick_(tick) {
  if (tick < 0) fail(ErrorCode::InvalidTimePoint, "time point " + std::to_string(tick) + " is negative");
}

ProcessId::ProcessId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) fail(ErrorCode::InvalidProcessName, "process name is empty");
  if (name_.find('@') != std::string::npos)
    fail(ErrorCode::InvalidProcessName, "process name '" + name_ + "' contains '@'");
}

AtomicNode node(const std::string& process, std::int64_t tick) {
  return AtomicNode{ProcessId(process), TimePoint(tick)};
}

std::string to_string(const AtomicNode& n) {
  return n.process.name() + "@" + std::to_string(n.time.tick());
}

AtomicNode parse_node(const std::string& text) {
  const auto at = text.rfind('@');
  if (at == std::string::npos)
    fail(ErrorCode::InvalidProcessName, "node '" + text + "' is not of the form PROCESS@TICK");
  std::int64_t tick = 0;
  const char* first = text.data() + at + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, tick);
  if (ec != std::errc{} || ptr != last || first == last)
    fail(ErrorCode::InvalidTimePoint, "node '" + text + "' has a malformed tick");
  return AtomicNode{ProcessId(text.substr(0, at)), TimePoint(tick)};
}

NodeIndex AtomicDag::add_node(const AtomicNode& n) {
  if (index_.contains(n)) fail(ErrorCode::DuplicateNode, "node " + to_string(n) + " registered twice");
  const NodeIndex i = nodes_.size();
  nodes_.push_back(n);
  index_.emplace(n, i);
  children_.emplace_back();
  parents_.emplace_back();
  return i;
}

void AtomicDag::add_edge(const AtomicNode& from, const AtomicNode& to) {
  const NodeIndex u = index_of(from);
  const NodeIndex v = index_of(to);
  if (!(from.time < to.time))
    fail(ErrorCode::BackwardInTimeEdge,
         "edge " + to_string(from) + " -> " + to_string(to) + " does not point strictly forward in time");
  if (!edge_set_.emplace(u, v).second)
    fail(ErrorCode::DuplicateEdge, "edge " + to_string(from) + " -> " + to_string(to) + " added twice");
  edges_.emplace_back(u, v);
  children_[u].push_back(v);
  parents_[v].push_back(u);
}

std::optional<NodeIndex> AtomicDag::find(const AtomicNode& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex AtomicDag::index_of(const AtomicNode& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) fail(ErrorCode::UnknownNode, "node " + to_string(n) + " is not registered");
  return it->second;
}

bool AtomicDag::has_edge(NodeIndex from, NodeIndex to) const { return edge_set_.contains({from, to}); }

bool AtomicDag::has_causal_path(const AtomicNode& from, const AtomicNode& to) const {
  return has_causal_path(index_of(from), index_of(to));
}

bool AtomicDag::has_causal_path(NodeIndex from, NodeIndex to) const {
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeIndex> stack(children_.at(from).begin(), children_.at(from).end());
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    if (seen[u]) continue;
    seen[u] = true;
    for (NodeIndex c : children_[u])
      if (!seen[c]) stack.push_back(c);
  }
  return false;
}

std::optional<std::vector<NodeIndex>> AtomicDag::find_path(NodeIndex from, NodeIndex to,
                                                          std::span<const char> passable) const {
  constexpr NodeIndex none = static_cast<NodeIndex>(-1);
  std::vector<NodeIndex> parent(nodes_.size(), none);
  std::vector<bool> seen(nodes_.size(), false);
  std::deque<NodeIndex> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const NodeIndex u = queue.front();
    queue.pop_front();
    for (NodeIndex c : children_[u]) {
      if (c == to) {
        std::vector<NodeIndex> path{to};
        for (NodeIndex w = u; w != none; w = parent[w]) path.push_back(w);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (seen[c] || !passable[c]) continue;
      seen[c] = true;
      parent[c] = u;
      queue.push_back(c);
    }
  }
  return std::nullopt;
}

std::vector<NodeIndex> AtomicDag::topological_order() const {
  std::vector<NodeIndex> order(nodes_.size());
  for (NodeIndex i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex a, NodeIndex b) { return nodes_[a].time < nodes_[b].time; });
  return order;
}

bool AtomicDag::is_acyclic() const {
  std::vector<std::size_t> indegree(nodes_.size());
  for (NodeIndex v = 0; v < nodes_.size(); ++v) indegree[v] = parents_[v].size();
  std::vector<NodeIndex> ready;
  for (NodeIndex v = 0; v < nodes_.size(); ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::size_t visited = 0;
  while (!ready.empty()) {
    const NodeIndex u = ready.back();
    ready.pop_back();
    ++visited;
    for (NodeIndex c : children_[u])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  return visited == nodes_.size();
}

std::vector<ProcessId> AtomicDag::processes() const {
  std::set<ProcessId> unique;
  for (const auto& n : nodes_) unique.insert(n.process);
  return {unique.begin(), unique.end()};
}

}  // namespace tempodag
