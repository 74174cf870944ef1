#include "tempodag/composite.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "tempodag/error.hpp"

namespace tempodag {

TimeSet make_time_set(std::initializer_list<std::int64_t> ticks) {
  TimeSet s;
  for (auto t : ticks) s.insert(TimePoint(t));
  return s;
}

std::string to_string(const TimeSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto t : s) {
    if (!first) os << ',';
    os << t.tick();
    first = false;
  }
  os << '}';
  return os.str();
}

std::string_view to_string(AggregationKind kind) noexcept {
  switch (kind) {
    case AggregationKind::Identity: return "identity";
    case AggregationKind::Mean: return "mean";
    case AggregationKind::WeightedSum: return "weighted_sum";
  }
  return "identity";
}

AggregationSpec AggregationSpec::identity() { return {AggregationKind::Identity, {}}; }
AggregationSpec AggregationSpec::mean() { return {AggregationKind::Mean, {}}; }

AggregationSpec AggregationSpec::weighted_sum(std::vector<double> weights) {
  if (weights.empty()) fail(ErrorCode::BadAggregation, "weighted_sum needs at least one weight");
  for (double w : weights)
    if (w == 0.0 || !std::isfinite(w)) fail(ErrorCode::BadAggregation, "weighted_sum weights must be finite and nonzero");
  return {AggregationKind::WeightedSum, std::move(weights)};
}

void AggregationSpec::check_arity(std::size_t arity) const {
  if (arity == 0) fail(ErrorCode::ArityMismatch, "arity must be positive");
  if (kind_ == AggregationKind::Identity && arity != 1)
    fail(ErrorCode::ArityMismatch, "identity aggregation needs exactly one time point, got " + std::to_string(arity));
  if (kind_ == AggregationKind::WeightedSum && weights_.size() != arity)
    fail(ErrorCode::ArityMismatch, "weighted_sum has " + std::to_string(weights_.size()) + " weights for " +
                                       std::to_string(arity) + " time points");
}

std::vector<double> AggregationSpec::coefficients(std::size_t arity) const {
  check_arity(arity);
  switch (kind_) {
    case AggregationKind::Identity: return {1.0};
    case AggregationKind::Mean: return std::vector<double>(arity, 1.0 / static_cast<double>(arity));
    case AggregationKind::WeightedSum: return weights_;
  }
  return {};
}

double AggregationSpec::apply(std::span<const double> values) const {
  check_arity(values.size());
  switch (kind_) {
    case AggregationKind::Identity: return values[0];
    case AggregationKind::Mean:
      return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    case AggregationKind::WeightedSum: {
      double sum = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) sum += weights_[i] * values[i];
      return sum;
    }
  }
  return 0.0;
}

CompositeVariable::CompositeVariable(std::string name, ProcessId process, TimeSet possible_times,
                                     std::size_t arity, std::vector<SupportEntry> support,
                                     AggregationSpec aggregation)
    : name_(std::move(name)),
      process_(std::move(process)),
      possible_(std::move(possible_times)),
      arity_(arity),
      support_(std::move(support)),
      aggregation_(std::move(aggregation)) {
  if (name_.empty()) fail(ErrorCode::SchemaError, "composite variable name is empty");
  const std::string who = "variable '" + name_ + "': ";
  if (possible_.empty()) fail(ErrorCode::TimePointNotPossible, who + "no possible time points");
  if (arity_ == 0) fail(ErrorCode::ArityMismatch, who + "arity must be positive");
  if (support_.empty()) fail(ErrorCode::BadDistribution, who + "empty support");
  aggregation_.check_arity(arity_);

  double total = 0.0;
  std::set<TimeSet> seen;
  for (const auto& entry : support_) {
    if (entry.subset.size() != arity_)
      fail(ErrorCode::ArityMismatch, who + "subset " + to_string(entry.subset) + " does not have " +
                                         std::to_string(arity_) + " elements");
    for (auto t : entry.subset)
      if (!possible_.contains(t))
        fail(ErrorCode::TimePointNotPossible,
             who + "time point " + std::to_string(t.tick()) + " is not among the possible times " + to_string(possible_));
    if (!(entry.probability > 0.0 && entry.probability <= 1.0))
      fail(ErrorCode::BadDistribution, who + "probability of " + to_string(entry.subset) + " is outside (0, 1]");
    if (!seen.insert(entry.subset).second)
      fail(ErrorCode::DuplicateSubset, who + "subset " + to_string(entry.subset) + " listed twice");
    total += entry.probability;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << who << "support probabilities sum to " << total << ", not 1";
    fail(ErrorCode::BadDistribution, os.str());
  }
}

const TimeSet& CompositeVariable::deterministic_subset() const {
  if (!deterministic())
    fail(ErrorCode::NonDeterministicSupport, "variable '" + name_ + "' mixes time points across realizations");
  return support_.front().subset;
}

std::optional<std::size_t> CompositeVariable::support_index(const TimeSet& subset) const {
  for (std::size_t i = 0; i < support_.size(); ++i)
    if (support_[i].subset == subset) return i;
  return std::nullopt;
}

TimeSet CompositeVariable::support_union() const {
  TimeSet out;
  for (const auto& e : support_) out.insert(e.subset.begin(), e.subset.end());
  return out;
}

CompositeVariable make_selection(std::string name, ProcessId process, TimeSet possible, TimePoint chosen) {
  if (!possible.contains(chosen))
    fail(ErrorCode::TimePointNotPossible, "variable '" + name + "': chosen time point " +
                                              std::to_string(chosen.tick()) + " is not among " + to_string(possible));
  return CompositeVariable(std::move(name), std::move(process), std::move(possible), 1,
                           {SupportEntry{TimeSet{chosen}, 1.0}}, AggregationSpec::identity());
}

CompositeVariable make_mixture(std::string name, ProcessId process, TimeSet possible,
                               std::vector<SupportEntry> support, AggregationSpec aggregation) {
  if (support.empty()) fail(ErrorCode::BadDistribution, "variable '" + name + "': empty mixture");
  const std::size_t arity = support.front().subset.size();
  for (const auto& e : support)
    if (e.subset.size() != arity)
      fail(ErrorCode::ArityMismatch, "variable '" + name + "': mixture subsets differ in size");
  return CompositeVariable(std::move(name), std::move(process), std::move(possible), arity, std::move(support),
                           std::move(aggregation));
}

CompositeVariable make_aggregate(std::string name, ProcessId process, TimeSet times, AggregationSpec aggregation) {
  aggregation.check_arity(times.size());
  TimeSet possible = times;
  const std::size_t arity = times.size();
  return CompositeVariable(std::move(name), std::move(process), std::move(possible), arity,
                           {SupportEntry{std::move(times), 1.0}}, std::move(aggregation));
}

double evaluate(const CompositeVariable& variable, const std::map<AtomicNode, double>& atomic_values,
                const TimeSet& realized) {
  if (!variable.support_index(realized))
    fail(ErrorCode::SubsetNotInSupport,
         "subset " + to_string(realized) + " is not in the support of '" + variable.name() + "'");
  std::vector<double> values;
  values.reserve(realized.size());
  for (auto t : realized) {
    const AtomicNode n{variable.process(), t};
    auto it = atomic_values.find(n);
    if (it == atomic_values.end()) fail(ErrorCode::MissingAtomicValue, "no value for " + to_string(n));
    values.push_back(it->second);
  }
  return variable.aggregation().apply(values);
}

std::size_t VariableSystem::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) fail(ErrorCode::UnknownVariable, "no composite variable named '" + name + "'");
  return it->second;
}

bool VariableSystem::contains(const std::string& name) const { return by_name_.contains(name); }

NodeIndex VariableSystem::node_of(std::size_t variable, TimePoint t) const {
  return atomic_.index_of(AtomicNode{variables_.at(variable).process(), t});
}

std::vector<JointAssignment> VariableSystem::joint_assignments() const {
  std::vector<JointAssignment> out;
  out.reserve(joint_.size());
  for (const auto& row : joint_) {
    JointAssignment a;
    a.probability = row.probability;
    for (std::size_t v = 0; v < variables_.size(); ++v)
      a.subsets.emplace(variables_[v].name(), variables_[v].support()[row.choice[v]].subset);
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

std::vector<VariableSystem::JointEntry> product_joint(const std::vector<CompositeVariable>& vars) {
  std::vector<VariableSystem::JointEntry> rows;
  if (vars.empty()) return rows;
  std::vector<std::size_t> choice(vars.size(), 0);
  while (true) {
    double p = 1.0;
    for (std::size_t v = 0; v < vars.size(); ++v) p *= vars[v].support()[choice[v]].probability;
    rows.push_back({choice, p});
    // odometer, last variable fastest
    std::size_t v = vars.size();
    while (v > 0) {
      --v;
      if (++choice[v] < vars[v].support().size()) break;
      choice[v] = 0;
      if (v == 0) return rows;
    }
  }
}

}  // namespace

VariableSystem build_system(AtomicDag atomic, std::vector<CompositeVariable> variables,
                            std::optional<std::vector<JointAssignment>> joint) {
  VariableSystem sys;
  sys.owner_.assign(atomic.node_count(), VariableSystem::kUnclaimed);

  for (std::size_t v = 0; v < variables.size(); ++v) {
    const auto& var = variables[v];
    if (!sys.by_name_.emplace(var.name(), v).second)
      fail(ErrorCode::DuplicateVariable, "composite variable '" + var.name() + "' defined twice");
    for (auto t : var.possible_times()) {
      const AtomicNode n{var.process(), t};
      auto idx = atomic.find(n);
      if (!idx)
        fail(ErrorCode::UnknownAtomicNode,
             "variable '" + var.name() + "' refers to " + to_string(n) + ", which is not an atomic node");
      auto& owner = sys.owner_[*idx];
      if (owner != VariableSystem::kUnclaimed)
        fail(ErrorCode::ProcessTimeCollision, "variables '" + variables[owner].name() + "' and '" + var.name() +
                                                  "' both claim " + to_string(n));
      owner = static_cast<std::ptrdiff_t>(v);
    }
  }

  if (!joint) {
    sys.joint_ = product_joint(variables);
  } else {
    double total = 0.0;
    std::set<std::vector<std::size_t>> seen;
    for (const auto& row : *joint) {
      if (row.subsets.size() != variables.size())
        fail(ErrorCode::BadDistribution, "joint row must assign a subset to each of the " +
                                             std::to_string(variables.size()) + " variables");
      std::vector<std::size_t> choice(variables.size());
      for (const auto& [name, subset] : row.subsets) {
        auto it = sys.by_name_.find(name);
        if (it == sys.by_name_.end()) fail(ErrorCode::UnknownVariable, "joint row names unknown variable '" + name + "'");
        auto idx = variables[it->second].support_index(subset);
        if (!idx)
          fail(ErrorCode::SubsetNotInSupport,
               "joint row assigns " + to_string(subset) + " to '" + name + "', which is not in its support");
        choice[it->second] = *idx;
      }
      if (!(row.probability > 0.0 && row.probability <= 1.0))
        fail(ErrorCode::BadDistribution, "joint row probability outside (0, 1]");
      if (!seen.insert(choice).second) fail(ErrorCode::BadDistribution, "joint row listed twice");
      total += row.probability;
      sys.joint_.push_back({std::move(choice), row.probability});
    }
    if (std::abs(total - 1.0) > kProbabilitySumTolerance)
      fail(ErrorCode::BadDistribution, "joint probabilities do not sum to 1");
    for (std::size_t v = 0; v < variables.size(); ++v) {
      std::vector<double> marginal(variables[v].support().size(), 0.0);
      for (const auto& row : sys.joint_) marginal[row.choice[v]] += row.probability;
      for (std::size_t s = 0; s < marginal.size(); ++s) {
        const auto& entry = variables[v].support()[s];
        if (std::abs(marginal[s] - entry.probability) > kMarginalTolerance) {
          std::ostringstream os;
          os.precision(17);
          os << "joint table gives '" << variables[v].name() << "' = " << to_string(entry.subset)
             << " probability " << marginal[s] << " but the declared marginal is " << entry.probability;
          fail(ErrorCode::MarginalMismatch, os.str());
        }
      }
    }
  }

  sys.reach_ = compute_reachability(atomic);
  sys.atomic_ = std::move(atomic);
  sys.variables_ = std::move(variables);
  return sys;
}

std::set<SubsetPair> pairwise_support(const VariableSystem& system, std::size_t a, std::size_t b) {
  const auto& va = system.variables().at(a);
  const auto& vb = system.variables().at(b);
  std::set<SubsetPair> out;
  for (const auto& row : system.joint())
    out.emplace(va.support()[row.choice[a]].subset, vb.support()[row.choice[b]].subset);
  return out;
}

std::set<SubsetPair> pairwise_support(const VariableSystem& system, const std::string& a, const std::string& b) {
  return pairwise_support(system, system.index_of(a), system.index_of(b));
}

}  // namespace tempodag
