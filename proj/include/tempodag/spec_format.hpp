#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tempodag/error.hpp"
#include "tempodag/scm_oracle.hpp"

namespace tempodag {

inline constexpr const char* kSpecVersion = "tempodag/1";

struct ProcessSpec {
  std::string name;
  std::string unit;
  friend bool operator==(const ProcessSpec&, const ProcessSpec&) = default;
};

struct CoefficientSpec {
  std::string from;
  std::string to;
  double value = 0.0;
  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

struct NoiseSpec {
  std::string node;
  double value = 0.0;
  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct ScmSpec {
  std::vector<CoefficientSpec> coefficients;
  /// Absent means unit variance at every node.
  std::optional<std::vector<NoiseSpec>> noise_variances;
  friend bool operator==(const ScmSpec&, const ScmSpec&) = default;
};

struct SupportSpec {
  std::vector<std::int64_t> times;
  /// Decimal string, kept verbatim.
  std::string probability;
  friend bool operator==(const SupportSpec&, const SupportSpec&) = default;
};

struct AggregationText {
  std::string kind;  // identity | mean | weighted_sum
  std::optional<std::vector<double>> weights;
  friend bool operator==(const AggregationText&, const AggregationText&) = default;
};

/// kind "selection" uses `chosen`; "mixture" uses `support`; "aggregate"
/// uses `times`. `possible` defaults to the chosen/supported/used times.
struct VariableSpec {
  std::string name;
  std::string process;
  std::string kind;
  std::optional<std::vector<std::int64_t>> possible;
  std::optional<std::int64_t> chosen;
  std::optional<std::vector<SupportSpec>> support;
  std::optional<std::vector<std::int64_t>> times;
  std::optional<AggregationText> aggregation;
  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

struct JointRowSpec {
  std::map<std::string, std::vector<std::int64_t>> assignment;
  std::string probability;
  friend bool operator==(const JointRowSpec&, const JointRowSpec&) = default;
};

/// In-memory form of a spec file. Field order here is irrelevant: the
/// serialized form has sorted keys.
struct SystemSpec {
  std::string version = kSpecVersion;
  std::vector<ProcessSpec> processes;
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::optional<ScmSpec> scm;
  std::vector<VariableSpec> variables;
  std::optional<std::vector<JointRowSpec>> joint;
  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// Error tied to a place in the document, as an RFC 6901 JSON pointer, or
/// to a byte offset for syntax errors.
class SpecError : public Error {
 public:
  SpecError(ErrorCode code, const std::string& message, std::string pointer,
            std::optional<std::size_t> offset = std::nullopt)
      : Error(code, message), pointer_(std::move(pointer)), offset_(offset) {}

  const std::string& pointer() const noexcept { return pointer_; }
  const std::optional<std::size_t>& offset() const noexcept { return offset_; }

 private:
  std::string pointer_;
  std::optional<std::size_t> offset_;
};

/// Throws SpecError with ParseError, SchemaError or UnsupportedVersion.
SystemSpec parse_spec(const std::string& text);

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
std::string serialize_spec(const SystemSpec& spec);

/// Strict decimal "d", "d.ddd" or ".ddd" in [0, 1] notation; no exponent.
/// Throws SpecError(SchemaError) with `pointer`.
double parse_probability(const std::string& text, const std::string& pointer);

struct LoadedSystem {
  VariableSystem system;
  std::optional<LinearScm> scm;
};

/// Builds the library objects. Module errors are rethrown as SpecError
/// anchored at the offending element.
LoadedSystem build(const SystemSpec& spec);

/// Spec of `unrolled`, a system obtained from `original` by unrolling:
/// untouched variables and all atomic data are copied verbatim, new parts
/// become deterministic entries.
SystemSpec unrolled_spec(const SystemSpec& original, const VariableSystem& unrolled);

/// 1-based line and column of byte `offset`.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset);

/// Byte offset of the value addressed by `pointer`, or of its deepest
/// existing ancestor. Tolerates malformed documents by returning nullopt.
std::optional<std::size_t> locate_pointer(const std::string& text, const std::string& pointer);

}  // namespace tempodag
