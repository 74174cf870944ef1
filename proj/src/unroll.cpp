#include "tempodag/unroll.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "tempodag/acyclicity.hpp"
#include "tempodag/error.hpp"

namespace tempodag {

std::string unrolled_name(const std::string& variable, std::size_t i) {
  return variable + "#" + std::to_string(i + 1);
}

namespace {

Partition checked_blocks(const CompositeVariable& var, const Partition& partition) {
  const TimeSet& subset = var.deterministic_subset();
  const std::string who = "partition of '" + var.name() + "': ";
  if (partition.empty()) fail(ErrorCode::BadPartition, who + "no blocks");
  TimeSet covered;
  for (const auto& block : partition) {
    if (block.empty()) fail(ErrorCode::BadPartition, who + "empty block");
    for (auto t : block) {
      if (!subset.contains(t))
        fail(ErrorCode::BadPartition, who + "time point " + std::to_string(t.tick()) + " is not in " + to_string(subset));
      if (!covered.insert(t).second)
        fail(ErrorCode::BadPartition, who + "time point " + std::to_string(t.tick()) + " appears in two blocks");
    }
  }
  if (covered != subset) fail(ErrorCode::BadPartition, who + "blocks do not cover " + to_string(subset));
  Partition blocks = partition;
  std::sort(blocks.begin(), blocks.end(), [](const TimeSet& x, const TimeSet& y) { return *x.begin() < *y.begin(); });
  return blocks;
}

AggregationSpec restrict_aggregation(const CompositeVariable& var, const TimeSet& block) {
  const auto& agg = var.aggregation();
  switch (agg.kind()) {
    case AggregationKind::Identity: return AggregationSpec::identity();
    case AggregationKind::Mean: return AggregationSpec::mean();
    case AggregationKind::WeightedSum: {
      const TimeSet& subset = var.deterministic_subset();
      std::vector<double> weights;
      std::size_t pos = 0;
      for (auto t : subset) {
        if (block.contains(t)) weights.push_back(agg.weights()[pos]);
        ++pos;
      }
      return AggregationSpec::weighted_sum(std::move(weights));
    }
  }
  return AggregationSpec::identity();
}

}  // namespace

VariableSystem unroll_variable(const VariableSystem& system, const std::string& variable, const Partition& partition) {
  const std::size_t target = system.index_of(variable);
  const auto& var = system.variables()[target];
  const Partition blocks = checked_blocks(var, partition);
  const TimeSet& subset = var.deterministic_subset();

  std::vector<TimeSet> possible(blocks.begin(), blocks.end());
  for (auto t : var.possible_times()) {
    if (subset.contains(t)) continue;
    std::size_t home = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (*blocks[i].begin() <= t) home = i;
    possible[home].insert(t);
  }

  std::vector<CompositeVariable> parts;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    parts.emplace_back(unrolled_name(variable, i), var.process(), possible[i], blocks[i].size(),
                       std::vector<SupportEntry>{{blocks[i], 1.0}}, restrict_aggregation(var, blocks[i]));

  std::vector<CompositeVariable> vars;
  for (std::size_t v = 0; v < system.size(); ++v) {
    if (v == target)
      vars.insert(vars.end(), parts.begin(), parts.end());
    else
      vars.push_back(system.variables()[v]);
  }

  std::vector<JointAssignment> joint = system.joint_assignments();
  for (auto& row : joint) {
    row.subsets.erase(variable);
    for (const auto& p : parts) row.subsets.emplace(p.name(), p.deterministic_subset());
  }

  AtomicDag atomic = system.atomic();
  return build_system(std::move(atomic), std::move(vars), std::move(joint));
}

Partition split_at(const CompositeVariable& variable, TimePoint at) {
  TimeSet before, after;
  for (auto t : variable.deterministic_subset()) (t < at ? before : after).insert(t);
  if (before.empty() || after.empty())
    fail(ErrorCode::BadPartition, "splitting '" + variable.name() + "' at " + std::to_string(at.tick()) +
                                      " leaves one side empty");
  return {before, after};
}

std::vector<double> recombination_weights(const CompositeVariable& original, const Partition& partition) {
  const Partition blocks = checked_blocks(original, partition);
  std::vector<double> w;
  for (const auto& b : blocks) {
    if (original.aggregation().kind() == AggregationKind::Mean)
      w.push_back(static_cast<double>(b.size()) / static_cast<double>(original.arity()));
    else
      w.push_back(1.0);
  }
  return w;
}

VariableSystem apply_unrolling(const VariableSystem& system, std::span<const UnrollStep> steps) {
  VariableSystem out = system;
  for (const auto& step : steps) out = unroll_variable(out, step.variable, step.partition);
  return out;
}

namespace {

Partition blocks_from_cuts(const TimeSet& subset, std::uint64_t cuts) {
  Partition blocks(1);
  std::size_t gap = 0;
  for (auto it = subset.begin(); it != subset.end(); ++it, ++gap) {
    blocks.back().insert(*it);
    if (std::next(it) != subset.end() && ((cuts >> gap) & 1U)) blocks.emplace_back();
  }
  return blocks;
}

bool acyclic_after(const VariableSystem& system, std::span<const UnrollStep> steps) {
  return derive_composite_graph(apply_unrolling(system, steps)).is_dag();
}

}  // namespace

std::vector<UnrollStep> suggest_unrolling(const VariableSystem& system) {
  if (derive_composite_graph(system).is_dag())
    fail(ErrorCode::AlreadyAcyclic, "the derived composite graph has no directed cycle");

  struct Candidate {
    std::string name;
    TimeSet subset;
    std::size_t gaps;
  };
  std::vector<Candidate> splittable;
  for (const auto& v : system.variables())
    if (v.deterministic() && v.arity() > 1) splittable.push_back({v.name(), v.deterministic_subset(), v.arity() - 1});
  std::sort(splittable.begin(), splittable.end(), [](const Candidate& x, const Candidate& y) { return x.name < y.name; });

  std::vector<UnrollStep> full;
  std::size_t max_splits = 0;
  for (const auto& c : splittable) {
    full.push_back({c.name, blocks_from_cuts(c.subset, (std::uint64_t{1} << c.gaps) - 1)});
    max_splits += c.gaps;
  }
  if (!acyclic_after(system, full))
    fail(ErrorCode::UnresolvableWithMixing,
         "a directed cycle survives splitting every deterministic variable into single time points; "
         "it runs through a variable whose time points vary by realization");

  std::vector<std::uint64_t> cuts(splittable.size(), 0);
  std::vector<UnrollStep> best;

  // Assign split counts to variables in name order, earliest names first,
  // then enumerate cut positions with that many cuts in ascending order.
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t i, std::size_t remaining) -> bool {
    if (i == splittable.size()) {
      if (remaining != 0) return false;
      std::vector<UnrollStep> steps;
      for (std::size_t k = 0; k < splittable.size(); ++k)
        if (cuts[k] != 0) steps.push_back({splittable[k].name, blocks_from_cuts(splittable[k].subset, cuts[k])});
      if (!acyclic_after(system, steps)) return false;
      best = std::move(steps);
      return true;
    }
    const std::size_t gaps = splittable[i].gaps;
    for (std::size_t take = std::min(remaining, gaps) + 1; take-- > 0;) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gaps); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != take) continue;
        cuts[i] = mask;
        if (search(i + 1, remaining - take)) return true;
      }
    }
    cuts[i] = 0;
    return false;
  };
  for (std::size_t total = 1; total <= max_splits; ++total)
    if (search(0, total)) return best;

  // Unreachable: the full split above is acyclic.
  return full;
}

}  // namespace tempodag
