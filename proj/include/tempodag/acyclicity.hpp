#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempodag/composite.hpp"

namespace tempodag {

/// Atomic evidence for a composite edge: a directed path between a time
/// point of the cause and one of the effect.
struct Witness {
  NodeIndex from = 0;
  NodeIndex to = 0;
  std::vector<NodeIndex> path;

  friend bool operator==(const Witness&, const Witness&) = default;
};

inline constexpr std::size_t kMaxWitnesses = 16;

struct Causation {
  bool holds = false;
  std::vector<Witness> witnesses;  // at most kMaxWitnesses
};

/// Composite causation: some jointly supported (s_a, s_b) has t_a in s_a and
/// t_b in s_b with a directed atomic path from a@t_a to b@t_b that does not
/// pass through a time point claimed by a third composite variable.
/// Throws UnknownVariable, SameVariable.
Causation causes(const VariableSystem& system, const std::string& a, const std::string& b);
Causation causes(const VariableSystem& system, std::size_t a, std::size_t b);

/// Directed graph between composite variables. Never has self-loops.
class CompositeGraph {
 public:
  CompositeGraph() = default;
  explicit CompositeGraph(std::vector<std::string> names);

  void add_edge(std::size_t from, std::size_t to, std::vector<Witness> witnesses = {});

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  /// Throws UnknownVariable.
  std::size_t index_of(const std::string& name) const;

  bool has_edge(std::size_t from, std::size_t to) const { return edges_.contains({from, to}); }
  bool has_edge(const std::string& from, const std::string& to) const;
  const std::map<std::pair<std::size_t, std::size_t>, std::vector<Witness>>& edges() const noexcept { return edges_; }
  /// Edges as name pairs in lexicographic order.
  std::vector<std::pair<std::string, std::string>> edge_names() const;
  std::vector<std::size_t> children(std::size_t v) const;
  std::vector<std::size_t> parents(std::size_t v) const;

  /// Any-length directed cycle check.
  bool is_dag() const { return !find_cycle().has_value(); }
  /// Some directed cycle as a name sequence (first name not repeated).
  std::optional<std::vector<std::string>> find_cycle() const;
  /// Unordered pairs {a, b} (a < b by name) with edges both ways.
  std::vector<std::pair<std::string, std::string>> two_cycles() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> by_name_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Witness>> edges_;
};

CompositeGraph derive_composite_graph(const VariableSystem& system);

/// max(s_a) < min(s_b) for every jointly supported (s_a, s_b); ties fail.
/// Throws UnknownVariable, EmptyJointSupport.
bool precedes(const VariableSystem& system, const std::string& a, const std::string& b);
bool precedes(const VariableSystem& system, std::size_t a, std::size_t b);

enum class Precedence { FirstPrecedesSecond, SecondPrecedesFirst, Neither };

std::string_view to_string(Precedence p) noexcept;

struct PairClassification {
  std::string first;
  std::string second;
  Precedence precedence = Precedence::Neither;
  /// Precedence holds in one direction.
  bool time_acyclic = false;
  /// No pair of atomic paths in opposite directions whose endpoints are each
  /// drawn from a jointly supported subset pair.
  bool acyclic = false;
  /// Same quantified over the product of marginal supports, which can differ
  /// from `acyclic` when the joint table excludes subset combinations.
  bool acyclic_product = false;
  /// Not time-acyclic, yet acyclic.
  bool effect_acyclic = false;
  /// No opposite-direction paths over all possible time points of both
  /// variables.
  bool total_effect_acyclic = false;

  friend bool operator==(const PairClassification&, const PairClassification&) = default;
};

/// Throws UnknownVariable, SameVariable, EmptyJointSupport.
PairClassification classify_pair(const VariableSystem& system, const std::string& a, const std::string& b);
PairClassification classify_pair(const VariableSystem& system, std::size_t a, std::size_t b);

struct SystemClassification {
  /// One entry per unordered pair, names ordered first < second, pairs sorted.
  std::vector<PairClassification> pairs;
  bool graph_time_acyclic = true;
  bool graph_acyclic = true;
  bool graph_acyclic_product = true;
  bool graph_effect_acyclic = true;
  bool graph_total_effect_acyclic = true;
  CompositeGraph graph;
  /// Standard directed-cycle check on `graph`, which pairwise verdicts alone
  /// do not cover.
  bool composite_is_dag = true;
  std::optional<std::vector<std::string>> cycle;
};

/// Pairs evaluated in parallel; output order is deterministic.
SystemClassification classify_system(const VariableSystem& system);

namespace serial {
SystemClassification classify_system(const VariableSystem& system);
}  // namespace serial

}  // namespace tempodag
