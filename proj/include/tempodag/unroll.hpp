#pragma once

#include <span>
#include <string>
#include <vector>

#include "tempodag/composite.hpp"

namespace tempodag {

/// Disjoint non-empty blocks of a variable's time points.
using Partition = std::vector<TimeSet>;

/// Name of block `i` (zero-based) of `variable` after unrolling: "Y#1", ...
std::string unrolled_name(const std::string& variable, std::size_t i);

/// Replaces a deterministic-support variable by one variable per block,
/// named var#1, var#2, ... in block time order. Each part keeps the
/// aggregation kind restricted to its block (weighted_sum weights are
/// carried over verbatim, not renormalized). Possible time points outside
/// the realized subset go to the block with the latest start not after
/// them, or to the first block. The atomic DAG is untouched.
/// Throws UnknownVariable, NonDeterministicSupport, BadPartition.
VariableSystem unroll_variable(const VariableSystem& system, const std::string& variable, const Partition& partition);

/// {t < at} and {t >= at} over the variable's realized subset. Throws
/// NonDeterministicSupport, BadPartition (one side empty).
Partition split_at(const CompositeVariable& variable, TimePoint at);

/// Weights w_i with original = sum_i w_i * part_i for every valuation:
/// |block| / k for mean, 1 for weighted_sum and identity.
std::vector<double> recombination_weights(const CompositeVariable& original, const Partition& partition);

struct UnrollStep {
  std::string variable;
  Partition partition;

  friend bool operator==(const UnrollStep&, const UnrollStep&) = default;
};

/// Fewest-new-variables set of contiguous-block splits after which the
/// derived composite graph has no directed cycle. Among equally small
/// solutions, splits of earlier-named variables win. Steps are listed in
/// variable name order. Throws AlreadyAcyclic, UnresolvableWithMixing.
std::vector<UnrollStep> suggest_unrolling(const VariableSystem& system);

VariableSystem apply_unrolling(const VariableSystem& system, std::span<const UnrollStep> steps);

}  // namespace tempodag
