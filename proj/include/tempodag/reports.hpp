#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempodag/acyclicity.hpp"
#include "tempodag/discovery.hpp"
#include "tempodag/unroll.hpp"

namespace tempodag::report {

using nlohmann::json;

/// ANSI styling for human-readable output; inert when disabled.
struct Style {
  bool color = false;
  std::string good(const std::string& s) const { return wrap("32", s); }
  std::string bad(const std::string& s) const { return wrap("31", s); }
  std::string strong(const std::string& s) const { return wrap("1", s); }
  std::string flag(bool v) const { return v ? good("yes") : bad("no"); }

 private:
  std::string wrap(const char* code, const std::string& s) const {
    return color ? "\x1b[" + std::string(code) + "m" + s + "\x1b[0m" : s;
  }
};

/// "time_acyclic", "effect_acyclic", "acyclic" or "cyclic".
std::string verdict(const SystemClassification& c);

json graph_json(const CompositeGraph& graph);

json classify_json(const VariableSystem& system, const SystemClassification& c);
void classify_text(std::ostream& out, const VariableSystem& system, const SystemClassification& c, const Style& style);

struct UnrollOutcome {
  std::vector<UnrollStep> steps;
  CompositeGraph before;
  CompositeGraph after;
  std::string output_path;
};
json unroll_json(const UnrollOutcome& u);
void unroll_text(std::ostream& out, const UnrollOutcome& u, const Style& style);

json faithfulness_json(const std::vector<FaithfulnessViolation>& violations);
void faithfulness_text(std::ostream& out, const std::vector<FaithfulnessViolation>& violations, const Style& style);

struct EmpiricalSettings {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
};

struct DiscoveryOutcome {
  Skeleton skeleton;
  std::vector<VStructure> v_structures;
  Pdag pdag;
  std::vector<TemporalViolation> temporal;
  /// Absent for the exact oracle.
  std::optional<EmpiricalSettings> empirical;
};
json discover_json(const DiscoveryOutcome& d);
void discover_text(std::ostream& out, const DiscoveryOutcome& d, const Style& style);

/// Canonical rendering: sorted keys, two-space indent, trailing newline.
std::string dump(const json& doc);

}  // namespace tempodag::report
