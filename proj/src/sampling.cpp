#include <cmath>
#include <numbers>

#include "tempodag/error.hpp"
#include "tempodag/scm_oracle.hpp"

namespace tempodag {

namespace rng {

std::uint64_t mix(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

double uniform(std::uint64_t seed, std::uint64_t realization, std::uint64_t stream, std::uint64_t draw) noexcept {
  std::uint64_t h = mix(seed + 0x9E3779B97F4A7C15ULL);
  h = mix(h ^ realization);
  h = mix(h ^ (2 * stream + draw));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::uint64_t seed, std::uint64_t realization, std::uint64_t stream) noexcept {
  const double u1 = uniform(seed, realization, stream, 0);
  const double u2 = uniform(seed, realization, stream, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rng

namespace {

void check_inputs(const VariableSystem& system, const LinearScm& scm, std::size_t count) {
  if (count == 0) fail(ErrorCode::BadSampleCount, "sample count must be at least 1");
  if (system.atomic().nodes() != scm.dag().nodes() || system.atomic().edges() != scm.dag().edges())
    fail(ErrorCode::ScmMismatch, "the structural model is defined over a different atomic DAG");
}

std::size_t pick_joint_row(const VariableSystem& system, double u) {
  const auto& joint = system.joint();
  double cumulative = 0.0;
  for (std::size_t r = 0; r < joint.size(); ++r) {
    cumulative += joint[r].probability;
    if (u < cumulative) return r;
  }
  return joint.size() - 1;
}

RealizationBatch empty_batch(const VariableSystem& system, std::uint64_t seed, std::size_t count) {
  RealizationBatch batch;
  batch.seed = seed;
  batch.count = count;
  batch.atomic_values.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(system.atomic().node_count()));
  batch.composite_values.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(system.size()));
  batch.joint_rows.resize(count);
  for (const auto& v : system.variables()) batch.variable_names.push_back(v.name());
  return batch;
}

// Per variable and joint-support choice: atomic columns in ascending time.
std::vector<std::vector<std::vector<NodeIndex>>> support_columns(const VariableSystem& system) {
  std::vector<std::vector<std::vector<NodeIndex>>> cols(system.size());
  for (std::size_t v = 0; v < system.size(); ++v)
    for (const auto& entry : system.variables()[v].support()) {
      std::vector<NodeIndex> c;
      for (auto t : entry.subset) c.push_back(system.node_of(v, t));
      cols[v].push_back(std::move(c));
    }
  return cols;
}

}  // namespace

RealizationBatch sample(const VariableSystem& system, const LinearScm& scm, std::uint64_t seed, std::size_t count) {
  check_inputs(system, scm, count);
  RealizationBatch batch = empty_batch(system, seed, count);
  const auto& dag = scm.dag();
  const auto order = dag.topological_order();
  const auto columns = support_columns(system);
  const std::uint64_t joint_stream = dag.node_count();

  std::vector<std::vector<std::pair<NodeIndex, double>>> parents(dag.node_count());
  std::vector<double> sd(dag.node_count());
  for (NodeIndex v = 0; v < dag.node_count(); ++v) {
    for (NodeIndex p : dag.parents(v)) parents[v].emplace_back(p, scm.coefficient(p, v));
    sd[v] = std::sqrt(scm.noise_variances()[v]);
  }

  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (std::int64_t ri = 0; ri < n; ++ri) {
      const auto r = static_cast<std::uint64_t>(ri);
      double* row = batch.atomic_values.row(ri).data();
      for (NodeIndex v : order) {
        double x = 0.0;
        for (const auto& [p, c] : parents[v]) x += c * row[p];
        x += sd[v] * rng::standard_normal(seed, r, v);
        row[v] = x;
      }
      const std::size_t jr = pick_joint_row(system, rng::uniform(seed, r, joint_stream, 0));
      batch.joint_rows[static_cast<std::size_t>(ri)] = jr;
      const auto& choice = system.joint()[jr].choice;
      for (std::size_t v = 0; v < system.size(); ++v) {
        const auto& cols = columns[v][choice[v]];
        scratch.resize(cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) scratch[k] = row[cols[k]];
        batch.composite_values(ri, static_cast<Eigen::Index>(v)) = system.variables()[v].aggregation().apply(scratch);
      }
    }
  }
  return batch;
}

namespace serial {

RealizationBatch sample(const VariableSystem& system, const LinearScm& scm, std::uint64_t seed, std::size_t count) {
  check_inputs(system, scm, count);
  RealizationBatch batch = empty_batch(system, seed, count);
  const auto& dag = scm.dag();
  for (std::size_t r = 0; r < count; ++r) {
    std::map<AtomicNode, double> values;
    for (NodeIndex v : dag.topological_order()) {
      double x = 0.0;
      for (NodeIndex p : dag.parents(v)) x += scm.coefficient(p, v) * values.at(dag.node_at(p));
      x += std::sqrt(scm.noise_variances()[v]) * rng::standard_normal(seed, r, v);
      values[dag.node_at(v)] = x;
      batch.atomic_values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(v)) = x;
    }
    const std::size_t jr = pick_joint_row(system, rng::uniform(seed, r, dag.node_count(), 0));
    batch.joint_rows[r] = jr;
    for (std::size_t v = 0; v < system.size(); ++v) {
      const auto& var = system.variables()[v];
      batch.composite_values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(v)) =
          evaluate(var, values, var.support()[system.joint()[jr].choice[v]].subset);
    }
  }
  return batch;
}

}  // namespace serial

}  // namespace tempodag
