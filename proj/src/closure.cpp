#include <algorithm>

#include "tempodag/atomic_graph.hpp"

namespace tempodag {

namespace {
constexpr std::int64_t kMinParallelLevel = 8;
}  // namespace

ReachabilityMatrix::ReachabilityMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

void ReachabilityMatrix::merge_row(NodeIndex into, NodeIndex from) {
  std::uint64_t* dst = bits_.data() + into * words_;
  const std::uint64_t* src = bits_.data() + from * words_;
  for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
}

std::vector<NodeIndex> ReachabilityMatrix::row(NodeIndex from) const {
  std::vector<NodeIndex> out;
  for (NodeIndex to = 0; to < n_; ++to)
    if (reaches(from, to)) out.push_back(to);
  return out;
}

ReachabilityMatrix compute_reachability(const AtomicDag& dag) {
  ReachabilityMatrix closure(dag.node_count());
  // Edges only point to later ticks, so the nodes of one tick never depend on
  // each other. Ticks are finished latest first; within a tick each node
  // writes only its own row.
  const auto order = dag.topological_order();
  std::vector<std::size_t> level_start{0};
  for (std::size_t i = 1; i < order.size(); ++i)
    if (dag.node_at(order[i]).time != dag.node_at(order[i - 1]).time) level_start.push_back(i);
  level_start.push_back(order.size());
  for (std::size_t l = level_start.size() - 1; l-- > 0;) {
    const auto lo = static_cast<std::int64_t>(level_start[l]);
    const auto hi = static_cast<std::int64_t>(level_start[l + 1]);
    auto finish = [&](std::int64_t i) {
      const NodeIndex u = order[static_cast<std::size_t>(i)];
      for (NodeIndex c : dag.children(u)) {
        closure.set(u, c);
        closure.merge_row(u, c);
      }
    };
    if (hi - lo < kMinParallelLevel) {
      for (std::int64_t i = lo; i < hi; ++i) finish(i);
      continue;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = lo; i < hi; ++i) finish(i);
  }
  return closure;
}

namespace serial {

ReachabilityMatrix compute_reachability(const AtomicDag& dag) {
  ReachabilityMatrix closure(dag.node_count());
  const auto order = dag.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (NodeIndex c : dag.children(*it)) {
      closure.set(*it, c);
      closure.merge_row(*it, c);
    }
  }
  return closure;
}

}  // namespace serial

std::map<AtomicNode, std::set<AtomicNode>> reachability_closure(const AtomicDag& dag) {
  const auto closure = compute_reachability(dag);
  std::map<AtomicNode, std::set<AtomicNode>> out;
  for (NodeIndex u = 0; u < dag.node_count(); ++u) {
    auto& row = out[dag.node_at(u)];
    for (NodeIndex v : closure.row(u)) row.insert(dag.node_at(v));
  }
  return out;
}

}  // namespace tempodag
