#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tempodag/composite.hpp"

namespace tempodag {

using EdgeKey = std::pair<AtomicNode, AtomicNode>;

/// Linear-Gaussian structural model: x_v = sum_{u -> v} c_uv x_u + e_v with
/// independent e_v ~ N(0, sigma_v^2).
class LinearScm {
 public:
  /// Coefficients must cover exactly the DAG's edges and be nonzero; every
  /// node needs a positive finite noise variance. Throws MissingCoefficient,
  /// UnexpectedCoefficient, ZeroCoefficient, BadNoiseVariance.
  LinearScm(AtomicDag dag, const std::map<EdgeKey, double>& coefficients,
            const std::map<AtomicNode, double>& noise_variances);

  /// Unit noise variances everywhere.
  static LinearScm with_unit_noise(AtomicDag dag, const std::map<EdgeKey, double>& coefficients);

  const AtomicDag& dag() const noexcept { return dag_; }
  /// Aligned with dag().edges().
  const std::vector<double>& edge_coefficients() const noexcept { return coefficients_; }
  /// Indexed by node.
  const std::vector<double>& noise_variances() const noexcept { return variances_; }
  double coefficient(NodeIndex from, NodeIndex to) const;

  /// All coefficients multiplied by `factor` (nonzero).
  LinearScm scaled(double factor) const;

 private:
  AtomicDag dag_;
  std::vector<double> coefficients_;
  std::vector<double> variances_;
  std::map<std::pair<NodeIndex, NodeIndex>, std::size_t> edge_index_;
};

/// Sigma = (I - B)^{-1} D (I - B)^{-T}, rows/columns indexed by node.
Eigen::MatrixXd atomic_covariance(const LinearScm& scm);

/// Row v holds variable v's aggregation as a linear functional of atomic
/// nodes. Throws MixingNotExact, ScmMismatch.
Eigen::MatrixXd loading_matrix(const VariableSystem& system, const LinearScm& scm);

/// A Sigma A^T, indexed like system.variables().
Eigen::MatrixXd composite_covariance(const VariableSystem& system, const LinearScm& scm);

inline constexpr double kIndependenceTolerance = 1e-9;
inline constexpr double kSingularTolerance = 1e-12;

/// Partial correlation of a and b given `conditioning`, via the Schur
/// complement of the conditioning block. Throws SingularConditioning when
/// the conditioning block is not invertible at kSingularTolerance.
double partial_correlation(const Eigen::MatrixXd& covariance, std::size_t a, std::size_t b,
                           std::span<const std::size_t> conditioning);

struct CiResult {
  bool independent = false;
  double partial_correlation = 0.0;
};

/// Exact conditional-independence oracle over the composite variables of a
/// deterministic-support system.
class ExactOracle {
 public:
  /// Throws MixingNotExact, ScmMismatch.
  ExactOracle(const VariableSystem& system, const LinearScm& scm);

  /// Independent iff |partial correlation| <= kIndependenceTolerance.
  /// Throws UnknownVariable, SingularConditioning.
  CiResult test(const std::string& a, const std::string& b, const std::vector<std::string>& conditioning) const;

  const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }
  std::size_t index_of(const std::string& name) const;

 private:
  std::map<std::string, std::size_t> index_;
  Eigen::MatrixXd covariance_;
};

CiResult ci_test_exact(const VariableSystem& system, const LinearScm& scm, const std::string& a, const std::string& b,
                       const std::vector<std::string>& conditioning);

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Independent realizations of the atomic process and the composite
/// variables computed from them.
struct RealizationBatch {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  /// count x node_count, columns indexed by atomic node.
  RowMatrix atomic_values;
  /// Row of system.joint() drawn for each realization.
  std::vector<std::size_t> joint_rows;
  std::vector<std::string> variable_names;
  /// count x variables.
  RowMatrix composite_values;
};

/// Counter-based draws. Every uniform is a pure function of
/// (seed, realization, stream, draw):
///   h = mix(seed + 0x9E3779B97F4A7C15); h = mix(h ^ realization);
///   h = mix(h ^ (2 * stream + draw)); u = ((h >> 11) + 0.5) * 2^-53
/// where mix is the SplitMix64 finalizer. Stream v < node_count feeds node
/// v's noise through Box-Muller on draws 0 and 1; stream node_count, draw 0
/// picks the joint-table row.
namespace rng {
std::uint64_t mix(std::uint64_t x) noexcept;
double uniform(std::uint64_t seed, std::uint64_t realization, std::uint64_t stream, std::uint64_t draw) noexcept;
double standard_normal(std::uint64_t seed, std::uint64_t realization, std::uint64_t stream) noexcept;
}  // namespace rng

/// Realizations distributed over OpenMP threads; bit-identical to
/// serial::sample for the same inputs. Throws BadSampleCount, ScmMismatch.
RealizationBatch sample(const VariableSystem& system, const LinearScm& scm, std::uint64_t seed, std::size_t count);

namespace serial {
/// Reference sampler: one realization at a time through evaluate().
RealizationBatch sample(const VariableSystem& system, const LinearScm& scm, std::uint64_t seed, std::size_t count);
}  // namespace serial

/// Unbiased sample covariance of the composite columns.
Eigen::MatrixXd sample_covariance(const RealizationBatch& batch);

struct EmpiricalCiResult {
  bool independent = false;
  double partial_correlation = 0.0;
  /// Fisher z statistic sqrt(n - |C| - 3) * atanh(r).
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Fisher-z test on sample covariances, computed once.
class EmpiricalOracle {
 public:
  explicit EmpiricalOracle(const RealizationBatch& batch);

  /// Independent iff p_value >= alpha. Throws UnknownVariable,
  /// InsufficientSamples (count < |C| + 4), SingularConditioning.
  EmpiricalCiResult test(const std::string& a, const std::string& b, const std::vector<std::string>& conditioning,
                         double alpha) const;

 private:
  std::size_t count_;
  std::map<std::string, std::size_t> index_;
  Eigen::MatrixXd covariance_;
};

EmpiricalCiResult ci_test_empirical(const RealizationBatch& batch, const std::string& a, const std::string& b,
                                    const std::vector<std::string>& conditioning, double alpha);

/// Header of variable names, one row per realization, 17 significant digits.
void write_csv(const RealizationBatch& batch, std::ostream& out);

}  // namespace tempodag
