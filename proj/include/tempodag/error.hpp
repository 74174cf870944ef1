#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tempodag {

// Every failure the library can raise. The CLI prints the enumerator name
// as the diagnostic code, so names are part of the external interface.
enum class ErrorCode {
  // atomic_graph
  BackwardInTimeEdge,
  UnknownNode,
  DuplicateNode,
  DuplicateEdge,
  InvalidTimePoint,
  InvalidProcessName,
  // composite
  TimePointNotPossible,
  BadDistribution,
  ArityMismatch,
  BadAggregation,
  DuplicateSubset,
  DuplicateVariable,
  MarginalMismatch,
  ProcessTimeCollision,
  UnknownAtomicNode,
  UnknownVariable,
  SubsetNotInSupport,
  MissingAtomicValue,
  // acyclicity
  SameVariable,
  EmptyJointSupport,
  // unroll
  NonDeterministicSupport,
  BadPartition,
  AlreadyAcyclic,
  UnresolvableWithMixing,
  // scm_oracle
  MissingCoefficient,
  ZeroCoefficient,
  UnexpectedCoefficient,
  BadNoiseVariance,
  ScmMismatch,
  MixingNotExact,
  SingularConditioning,
  InsufficientSamples,
  BadSampleCount,
  // discovery
  NotADag,
  ConflictingOrientations,
  TooManyVariables,
  // cli / spec format
  ParseError,
  SchemaError,
  UnsupportedVersion,
  MissingScm,
  UnknownProcess,
  DuplicateProcess,
  BadArgument,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tempodag
