#include "tempodag/error.hpp"

namespace tempodag {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BackwardInTimeEdge: return "BackwardInTimeEdge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InvalidTimePoint: return "InvalidTimePoint";
    case ErrorCode::InvalidProcessName: return "InvalidProcessName";
    case ErrorCode::TimePointNotPossible: return "TimePointNotPossible";
    case ErrorCode::BadDistribution: return "BadDistribution";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::BadAggregation: return "BadAggregation";
    case ErrorCode::DuplicateSubset: return "DuplicateSubset";
    case ErrorCode::DuplicateVariable: return "DuplicateVariable";
    case ErrorCode::MarginalMismatch: return "MarginalMismatch";
    case ErrorCode::ProcessTimeCollision: return "ProcessTimeCollision";
    case ErrorCode::UnknownAtomicNode: return "UnknownAtomicNode";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::SubsetNotInSupport: return "SubsetNotInSupport";
    case ErrorCode::MissingAtomicValue: return "MissingAtomicValue";
    case ErrorCode::SameVariable: return "SameVariable";
    case ErrorCode::EmptyJointSupport: return "EmptyJointSupport";
    case ErrorCode::NonDeterministicSupport: return "NonDeterministicSupport";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::AlreadyAcyclic: return "AlreadyAcyclic";
    case ErrorCode::UnresolvableWithMixing: return "UnresolvableWithMixing";
    case ErrorCode::MissingCoefficient: return "MissingCoefficient";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::UnexpectedCoefficient: return "UnexpectedCoefficient";
    case ErrorCode::BadNoiseVariance: return "BadNoiseVariance";
    case ErrorCode::ScmMismatch: return "ScmMismatch";
    case ErrorCode::MixingNotExact: return "MixingNotExact";
    case ErrorCode::SingularConditioning: return "SingularConditioning";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::BadSampleCount: return "BadSampleCount";
    case ErrorCode::NotADag: return "NotADag";
    case ErrorCode::ConflictingOrientations: return "ConflictingOrientations";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::MissingScm: return "MissingScm";
    case ErrorCode::UnknownProcess: return "UnknownProcess";
    case ErrorCode::DuplicateProcess: return "DuplicateProcess";
    case ErrorCode::BadArgument: return "BadArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tempodag
