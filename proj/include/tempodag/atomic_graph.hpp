#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tempodag {

/// A tick on the within-realization timeline. Ticks are abstract integer
/// units starting at 0.
class TimePoint {
 public:
  constexpr TimePoint() = default;
  /// Throws InvalidTimePoint for negative ticks.
  explicit TimePoint(std::int64_t tick);

  constexpr std::int64_t tick() const noexcept { return tick_; }

  friend constexpr auto operator<=>(const TimePoint&, const TimePoint&) = default;

 private:
  std::int64_t tick_ = 0;
};

/// Name of a stochastic process. Non-empty and free of '@', which separates
/// process and tick in the textual node form "X@4".
class ProcessId {
 public:
  ProcessId() = default;
  /// Throws InvalidProcessName.
  explicit ProcessId(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const ProcessId&, const ProcessId&) = default;
  friend bool operator==(const ProcessId&, const ProcessId&) = default;

 private:
  std::string name_;
};

struct AtomicNode {
  ProcessId process;
  TimePoint time;

  friend auto operator<=>(const AtomicNode&, const AtomicNode&) = default;
  friend bool operator==(const AtomicNode&, const AtomicNode&) = default;
};

AtomicNode node(const std::string& process, std::int64_t tick);
std::string to_string(const AtomicNode& n);
/// Parses "X@4". Throws InvalidProcessName / InvalidTimePoint.
AtomicNode parse_node(const std::string& text);

using NodeIndex = std::size_t;

/// Causal DAG over time-point-specific variables. Every edge points strictly
/// forward in time, so acyclicity follows from construction. Nodes are
/// registered explicitly and keep their insertion index.
class AtomicDag {
 public:
  /// Throws DuplicateNode.
  NodeIndex add_node(const AtomicNode& n);
  /// Throws UnknownNode, BackwardInTimeEdge (from.time >= to.time) or
  /// DuplicateEdge.
  void add_edge(const AtomicNode& from, const AtomicNode& to);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<AtomicNode>& nodes() const noexcept { return nodes_; }
  const AtomicNode& node_at(NodeIndex i) const { return nodes_.at(i); }
  /// Edges in insertion order.
  const std::vector<std::pair<NodeIndex, NodeIndex>>& edges() const noexcept { return edges_; }

  bool contains(const AtomicNode& n) const { return index_.contains(n); }
  std::optional<NodeIndex> find(const AtomicNode& n) const;
  /// Throws UnknownNode.
  NodeIndex index_of(const AtomicNode& n) const;

  std::span<const NodeIndex> children(NodeIndex i) const { return children_.at(i); }
  std::span<const NodeIndex> parents(NodeIndex i) const { return parents_.at(i); }
  bool has_edge(NodeIndex from, NodeIndex to) const;

  /// True iff a directed path of at least one edge leads from `from` to `to`.
  /// Throws UnknownNode.
  bool has_causal_path(const AtomicNode& from, const AtomicNode& to) const;
  bool has_causal_path(NodeIndex from, NodeIndex to) const;

  /// Shortest directed path from `from` to `to` (both included) whose
  /// interior nodes all satisfy passable[i]. Endpoints are not tested.
  std::optional<std::vector<NodeIndex>> find_path(NodeIndex from, NodeIndex to,
                                                  std::span<const char> passable) const;

  /// Node indices sorted by (tick, insertion index); a topological order.
  std::vector<NodeIndex> topological_order() const;

  /// Kahn's algorithm, independent of the time invariant.
  bool is_acyclic() const;

  /// Distinct processes in name order.
  std::vector<ProcessId> processes() const;

 private:
  std::vector<AtomicNode> nodes_;
  std::map<AtomicNode, NodeIndex> index_;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
  std::set<std::pair<NodeIndex, NodeIndex>> edge_set_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<std::vector<NodeIndex>> parents_;
};

/// Dense transitive closure (paths of length >= 1) stored as bit rows.
class ReachabilityMatrix {
 public:
  ReachabilityMatrix() = default;
  explicit ReachabilityMatrix(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool reaches(NodeIndex from, NodeIndex to) const {
    return (bits_[from * words_ + to / 64] >> (to % 64)) & 1U;
  }
  void set(NodeIndex from, NodeIndex to) { bits_[from * words_ + to / 64] |= std::uint64_t{1} << (to % 64); }
  /// row(into) |= row(from)
  void merge_row(NodeIndex into, NodeIndex from);
  std::vector<NodeIndex> row(NodeIndex from) const;

  friend bool operator==(const ReachabilityMatrix&, const ReachabilityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Bitset closure; nodes sharing a tick are processed in parallel.
ReachabilityMatrix compute_reachability(const AtomicDag& dag);

namespace serial {
/// Reference closure: dynamic programming in reverse topological order.
ReachabilityMatrix compute_reachability(const AtomicDag& dag);
}  // namespace serial

/// closure[u] = nodes reachable from u by a directed path of length >= 1.
std::map<AtomicNode, std::set<AtomicNode>> reachability_closure(const AtomicDag& dag);

}  // namespace tempodag
