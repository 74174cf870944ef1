#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tempodag/atomic_graph.hpp"

namespace tempodag {

/// Ordered set of time points.
using TimeSet = std::set<TimePoint>;

TimeSet make_time_set(std::initializer_list<std::int64_t> ticks);
std::string to_string(const TimeSet& s);

enum class AggregationKind { Identity, Mean, WeightedSum };

std::string_view to_string(AggregationKind kind) noexcept;

/// Closed catalog of aggregation functions. Every entry changes its output
/// when any single input component changes.
class AggregationSpec {
 public:
  static AggregationSpec identity();
  static AggregationSpec mean();
  /// Throws BadAggregation if a weight is zero or non-finite.
  static AggregationSpec weighted_sum(std::vector<double> weights);

  AggregationKind kind() const noexcept { return kind_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Throws ArityMismatch if the function cannot take `arity` inputs.
  void check_arity(std::size_t arity) const;
  /// Linear functional over `arity` inputs in ascending time order.
  std::vector<double> coefficients(std::size_t arity) const;
  /// Applies the function to values listed in ascending time order.
  double apply(std::span<const double> values) const;

  friend bool operator==(const AggregationSpec&, const AggregationSpec&) = default;

 private:
  AggregationSpec(AggregationKind kind, std::vector<double> weights)
      : kind_(kind), weights_(std::move(weights)) {}

  AggregationKind kind_ = AggregationKind::Identity;
  std::vector<double> weights_;
};

struct SupportEntry {
  TimeSet subset;
  double probability = 0.0;

  friend bool operator==(const SupportEntry&, const SupportEntry&) = default;
};

inline constexpr double kProbabilitySumTolerance = 1e-12;
inline constexpr double kMarginalTolerance = 1e-9;

/// A random size-k subset of a process's possible time points, aggregated
/// into one real value.
class CompositeVariable {
 public:
  /// Validates everything that does not need the atomic DAG: support
  /// subsets have `arity` elements drawn from `possible_times`, are
  /// distinct, and carry probabilities in (0, 1] summing to one.
  CompositeVariable(std::string name, ProcessId process, TimeSet possible_times, std::size_t arity,
                    std::vector<SupportEntry> support, AggregationSpec aggregation);

  const std::string& name() const noexcept { return name_; }
  const ProcessId& process() const noexcept { return process_; }
  const TimeSet& possible_times() const noexcept { return possible_; }
  std::size_t arity() const noexcept { return arity_; }
  const std::vector<SupportEntry>& support() const noexcept { return support_; }
  const AggregationSpec& aggregation() const noexcept { return aggregation_; }

  /// Point mass on a single subset.
  bool deterministic() const noexcept { return support_.size() == 1; }
  /// Throws NonDeterministicSupport for mixing variables.
  const TimeSet& deterministic_subset() const;
  std::optional<std::size_t> support_index(const TimeSet& subset) const;
  /// Union of all supported subsets.
  TimeSet support_union() const;

  friend bool operator==(const CompositeVariable&, const CompositeVariable&) = default;

 private:
  std::string name_;
  ProcessId process_;
  TimeSet possible_;
  std::size_t arity_;
  std::vector<SupportEntry> support_;
  AggregationSpec aggregation_;
};

/// Deterministic singleton with identity aggregation. Throws
/// TimePointNotPossible.
CompositeVariable make_selection(std::string name, ProcessId process, TimeSet possible, TimePoint chosen);

/// Random subset drawn from `support`. Throws BadDistribution,
/// TimePointNotPossible, ArityMismatch (subsets of different sizes).
CompositeVariable make_mixture(std::string name, ProcessId process, TimeSet possible,
                               std::vector<SupportEntry> support,
                               AggregationSpec aggregation = AggregationSpec::identity());

/// Deterministic multi-point variable; all of `times` is used. Throws
/// ArityMismatch.
CompositeVariable make_aggregate(std::string name, ProcessId process, TimeSet times, AggregationSpec aggregation);

/// Applies the aggregation to the values at `realized` in ascending time
/// order. Throws SubsetNotInSupport, MissingAtomicValue.
double evaluate(const CompositeVariable& variable, const std::map<AtomicNode, double>& atomic_values,
                const TimeSet& realized);

/// One row of a joint table as supplied by the user.
struct JointAssignment {
  std::map<std::string, TimeSet> subsets;
  double probability = 0.0;
};

/// Composite variables over an atomic DAG together with the joint
/// distribution of their time-point subsets.
class VariableSystem {
 public:
  /// Row of the joint table; choice[v] indexes variables()[v].support().
  struct JointEntry {
    std::vector<std::size_t> choice;
    double probability = 0.0;
  };

  static constexpr std::ptrdiff_t kUnclaimed = -1;

  const AtomicDag& atomic() const noexcept { return atomic_; }
  const std::vector<CompositeVariable>& variables() const noexcept { return variables_; }
  std::size_t size() const noexcept { return variables_.size(); }
  const std::vector<JointEntry>& joint() const noexcept { return joint_; }

  /// Throws UnknownVariable.
  std::size_t index_of(const std::string& name) const;
  const CompositeVariable& variable(const std::string& name) const { return variables_[index_of(name)]; }
  bool contains(const std::string& name) const;

  /// Atomic node of `variable`'s process at `t`.
  NodeIndex node_of(std::size_t variable, TimePoint t) const;
  /// Index of the variable whose possible times include atomic node `n`.
  std::ptrdiff_t owner(NodeIndex n) const { return owner_.at(n); }
  const ReachabilityMatrix& reachability() const noexcept { return reach_; }

  /// Rows of the joint table as name -> subset maps.
  std::vector<JointAssignment> joint_assignments() const;

 private:
  friend VariableSystem build_system(AtomicDag, std::vector<CompositeVariable>,
                                     std::optional<std::vector<JointAssignment>>);
  VariableSystem() = default;

  AtomicDag atomic_;
  std::vector<CompositeVariable> variables_;
  std::map<std::string, std::size_t> by_name_;
  std::vector<JointEntry> joint_;
  std::vector<std::ptrdiff_t> owner_;
  ReachabilityMatrix reach_;
};

/// Without a joint table the variables are taken as independent (product of
/// marginals). Throws DuplicateVariable, UnknownAtomicNode,
/// ProcessTimeCollision, SubsetNotInSupport, BadDistribution,
/// MarginalMismatch.
VariableSystem build_system(AtomicDag atomic, std::vector<CompositeVariable> variables,
                            std::optional<std::vector<JointAssignment>> joint = std::nullopt);

using SubsetPair = std::pair<TimeSet, TimeSet>;

/// Projection of the joint support onto (a, b). Throws UnknownVariable.
std::set<SubsetPair> pairwise_support(const VariableSystem& system, const std::string& a, const std::string& b);
std::set<SubsetPair> pairwise_support(const VariableSystem& system, std::size_t a, std::size_t b);

}  // namespace tempodag
