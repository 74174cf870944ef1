#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tempodag/acyclicity.hpp"
#include "tempodag/scm_oracle.hpp"

namespace tempodag {

/// d-separation by the reachable-trail (Bayes ball) procedure on a DAG
/// given as child lists. `a`, `b` must not be in `conditioning`.
bool d_separated(std::span<const std::vector<std::size_t>> children, std::size_t a, std::size_t b,
                 std::span<const std::size_t> conditioning);

/// Throws NotADag, UnknownVariable, SameVariable (a == b or an endpoint is
/// conditioned on).
bool d_separated(const CompositeGraph& graph, const std::string& a, const std::string& b,
                 const std::vector<std::string>& conditioning);

bool d_separated(const AtomicDag& dag, NodeIndex a, NodeIndex b, std::span<const NodeIndex> conditioning);

struct FaithfulnessViolation {
  std::string first;
  std::string second;
  std::vector<std::string> conditioning;
  double partial_correlation = 0.0;

  friend bool operator==(const FaithfulnessViolation&, const FaithfulnessViolation&) = default;
};

inline constexpr std::size_t kMaxAuditVariables = 8;

struct AuditOptions {
  /// Required for systems with more than kMaxAuditVariables variables.
  std::optional<std::size_t> max_conditioning_size;
};

/// Every (pair, conditioning set) that is d-connected in the derived
/// composite DAG yet independent under the exact oracle. Pairs and sets
/// are enumerated in name order, sets by ascending size.
/// Throws NotADag, MixingNotExact, TooManyVariables.
std::vector<FaithfulnessViolation> audit_faithfulness(const VariableSystem& system, const LinearScm& scm,
                                                      const AuditOptions& options = {});

class IndependenceOracle {
 public:
  virtual ~IndependenceOracle() = default;
  virtual bool independent(const std::string& a, const std::string& b,
                           const std::vector<std::string>& conditioning) const = 0;
};

class ExactIndependence final : public IndependenceOracle {
 public:
  explicit ExactIndependence(const ExactOracle& oracle) : oracle_(oracle) {}
  bool independent(const std::string& a, const std::string& b,
                   const std::vector<std::string>& conditioning) const override {
    return oracle_.test(a, b, conditioning).independent;
  }

 private:
  const ExactOracle& oracle_;
};

class FisherZIndependence final : public IndependenceOracle {
 public:
  FisherZIndependence(const EmpiricalOracle& oracle, double alpha) : oracle_(oracle), alpha_(alpha) {}
  bool independent(const std::string& a, const std::string& b,
                   const std::vector<std::string>& conditioning) const override {
    return oracle_.test(a, b, conditioning, alpha_).independent;
  }

 private:
  const EmpiricalOracle& oracle_;
  double alpha_;
};

/// Partially directed graph. A pair carries at most one edge, either
/// directed or undirected.
class Pdag {
 public:
  Pdag() = default;
  explicit Pdag(std::vector<std::string> names);

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  /// Throws UnknownVariable.
  std::size_t index_of(const std::string& name) const;

  void add_undirected(std::size_t a, std::size_t b);
  /// Replaces any existing edge between a and b by a -> b.
  void orient(std::size_t from, std::size_t to);
  void remove(std::size_t a, std::size_t b);

  bool adjacent(std::size_t a, std::size_t b) const { return mark(a, b) != Mark::None; }
  bool directed(std::size_t from, std::size_t to) const { return mark(from, to) == Mark::Tail; }
  bool undirected(std::size_t a, std::size_t b) const { return mark(a, b) == Mark::Undirected; }
  std::vector<std::size_t> adjacents(std::size_t v) const;

  /// Name pairs in lexicographic order; undirected pairs listed (a, b), a < b.
  std::vector<std::pair<std::string, std::string>> directed_edges() const;
  std::vector<std::pair<std::string, std::string>> undirected_edges() const;

  /// No directed cycle among the directed edges.
  bool directed_part_acyclic() const;

  friend bool operator==(const Pdag&, const Pdag&) = default;

 private:
  // mark(a, b): Tail means a -> b; Head means b -> a.
  enum class Mark : unsigned char { None, Undirected, Tail, Head };
  Mark mark(std::size_t a, std::size_t b) const { return marks_[a * names_.size() + b]; }
  void set(std::size_t a, std::size_t b, Mark m, Mark reverse) {
    marks_[a * names_.size() + b] = m;
    marks_[b * names_.size() + a] = reverse;
  }

  std::vector<std::string> names_;
  std::map<std::string, std::size_t> by_name_;
  std::vector<Mark> marks_;
};

using NamePair = std::pair<std::string, std::string>;

struct Skeleton {
  Pdag graph;
  /// Keyed by (a, b) with a < b.
  std::map<NamePair, std::vector<std::string>> separating_sets;
};

/// Classical PC adjacency search: start complete, test conditioning subsets
/// of current adjacencies by ascending size, remove edges as soon as a
/// separating set is found. Nodes are processed in lexicographic order.
Skeleton pc_skeleton(const IndependenceOracle& oracle, std::vector<std::string> names);

struct VStructure {
  std::string left;
  std::string collider;
  std::string right;

  friend bool operator==(const VStructure&, const VStructure&) = default;
};

/// Unshielded triples left - collider - right (left < right) whose collider
/// is not in the separating set of left and right.
std::vector<VStructure> find_v_structures(const Skeleton& skeleton);

/// Orients v-structures, then applies Meek rules R1-R4 until nothing
/// changes. Throws ConflictingOrientations when two v-structures demand
/// opposite directions on one edge.
Pdag orient(const Skeleton& skeleton);

/// Meek rules R1-R4 to closure.
Pdag apply_meek_rules(Pdag pdag);

struct TemporalViolation {
  std::string from;
  std::string to;
  /// Jointly supported (s_from, s_to) with max(s_from) >= min(s_to).
  std::vector<SubsetPair> offending;
};

/// Directed edges that do not respect temporal precedence. Throws
/// UnknownVariable.
std::vector<TemporalViolation> temporal_consistency_report(const Pdag& pdag, const VariableSystem& system);

}  // namespace tempodag
