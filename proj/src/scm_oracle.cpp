#include "tempodag/scm_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "tempodag/error.hpp"

namespace tempodag {

LinearScm::LinearScm(AtomicDag dag, const std::map<EdgeKey, double>& coefficients,
                     const std::map<AtomicNode, double>& noise_variances)
    : dag_(std::move(dag)) {
  const auto& edges = dag_.edges();
  coefficients_.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& from = dag_.node_at(edges[e].first);
    const auto& to = dag_.node_at(edges[e].second);
    auto it = coefficients.find({from, to});
    if (it == coefficients.end())
      fail(ErrorCode::MissingCoefficient, "edge " + to_string(from) + " -> " + to_string(to) + " has no coefficient");
    if (it->second == 0.0 || !std::isfinite(it->second))
      fail(ErrorCode::ZeroCoefficient,
           "edge " + to_string(from) + " -> " + to_string(to) + " needs a finite nonzero coefficient");
    coefficients_[e] = it->second;
    edge_index_.emplace(edges[e], e);
  }
  for (const auto& [key, value] : coefficients) {
    auto u = dag_.find(key.first), v = dag_.find(key.second);
    if (!u || !v || !dag_.has_edge(*u, *v))
      fail(ErrorCode::UnexpectedCoefficient,
           "coefficient given for " + to_string(key.first) + " -> " + to_string(key.second) + ", which is not an edge");
  }
  variances_.resize(dag_.node_count());
  for (NodeIndex n = 0; n < dag_.node_count(); ++n) {
    auto it = noise_variances.find(dag_.node_at(n));
    if (it == noise_variances.end())
      fail(ErrorCode::BadNoiseVariance, "node " + to_string(dag_.node_at(n)) + " has no noise variance");
    if (!(it->second > 0.0) || !std::isfinite(it->second))
      fail(ErrorCode::BadNoiseVariance, "node " + to_string(dag_.node_at(n)) + " needs a positive noise variance");
    variances_[n] = it->second;
  }
  for (const auto& [n, v] : noise_variances)
    if (!dag_.contains(n)) fail(ErrorCode::UnknownNode, "noise variance given for unknown node " + to_string(n));
}

LinearScm LinearScm::with_unit_noise(AtomicDag dag, const std::map<EdgeKey, double>& coefficients) {
  std::map<AtomicNode, double> variances;
  for (const auto& n : dag.nodes()) variances.emplace(n, 1.0);
  return LinearScm(std::move(dag), coefficients, variances);
}

double LinearScm::coefficient(NodeIndex from, NodeIndex to) const {
  auto it = edge_index_.find({from, to});
  return it == edge_index_.end() ? 0.0 : coefficients_[it->second];
}

LinearScm LinearScm::scaled(double factor) const {
  LinearScm out = *this;
  for (double& c : out.coefficients_) c *= factor;
  for (double c : out.coefficients_)
    if (c == 0.0 || !std::isfinite(c)) fail(ErrorCode::ZeroCoefficient, "scaling produced a zero coefficient");
  return out;
}

Eigen::MatrixXd atomic_covariance(const LinearScm& scm) {
  const auto& dag = scm.dag();
  const auto n = static_cast<Eigen::Index>(dag.node_count());
  const auto order = dag.topological_order();
  std::vector<Eigen::Index> position(dag.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<Eigen::Index>(i);

  // I - B in topological order is unit lower triangular.
  Eigen::MatrixXd lower = Eigen::MatrixXd::Identity(n, n);
  const auto& edges = dag.edges();
  for (std::size_t e = 0; e < edges.size(); ++e)
    lower(position[edges[e].second], position[edges[e].first]) = -scm.edge_coefficients()[e];
  Eigen::MatrixXd total = Eigen::MatrixXd::Identity(n, n);
  lower.triangularView<Eigen::UnitLower>().solveInPlace(total);

  Eigen::VectorXd d(n);
  for (NodeIndex v = 0; v < dag.node_count(); ++v) d(position[v]) = scm.noise_variances()[v];
  Eigen::MatrixXd topo = total * d.asDiagonal() * total.transpose();
  // Mirror the lower triangle so the result is exactly symmetric.
  topo = topo.selfadjointView<Eigen::Lower>();

  Eigen::MatrixXd sigma(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      sigma(i, j) = topo(position[static_cast<std::size_t>(i)], position[static_cast<std::size_t>(j)]);
  return sigma;
}

namespace {

void check_same_dag(const VariableSystem& system, const LinearScm& scm) {
  const auto& a = system.atomic();
  const auto& b = scm.dag();
  if (a.nodes() != b.nodes() || a.edges() != b.edges())
    fail(ErrorCode::ScmMismatch, "the structural model is defined over a different atomic DAG");
}

}  // namespace

Eigen::MatrixXd loading_matrix(const VariableSystem& system, const LinearScm& scm) {
  check_same_dag(system, scm);
  const auto& vars = system.variables();
  Eigen::MatrixXd loading = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vars.size()),
                                                  static_cast<Eigen::Index>(system.atomic().node_count()));
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (!vars[v].deterministic())
      fail(ErrorCode::MixingNotExact,
           "variable '" + vars[v].name() + "' mixes time points; its distribution is a mixture, use sampling");
    const auto& subset = vars[v].deterministic_subset();
    const auto coef = vars[v].aggregation().coefficients(subset.size());
    std::size_t k = 0;
    for (auto t : subset)
      loading(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(system.node_of(v, t))) = coef[k++];
  }
  return loading;
}

Eigen::MatrixXd composite_covariance(const VariableSystem& system, const LinearScm& scm) {
  const Eigen::MatrixXd loading = loading_matrix(system, scm);
  return loading * atomic_covariance(scm) * loading.transpose();
}

double partial_correlation(const Eigen::MatrixXd& covariance, std::size_t a, std::size_t b,
                           std::span<const std::size_t> conditioning) {
  const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
  Eigen::Matrix2d block;
  block << covariance(ia, ia), covariance(ia, ib), covariance(ib, ia), covariance(ib, ib);

  if (!conditioning.empty()) {
    const auto k = static_cast<Eigen::Index>(conditioning.size());
    Eigen::MatrixXd cc(k, k);
    Eigen::MatrixXd cross(2, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto ci = static_cast<Eigen::Index>(conditioning[static_cast<std::size_t>(i)]);
      cross(0, i) = covariance(ia, ci);
      cross(1, i) = covariance(ib, ci);
      for (Eigen::Index j = 0; j < k; ++j)
        cc(i, j) = covariance(ci, static_cast<Eigen::Index>(conditioning[static_cast<std::size_t>(j)]));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cc, Eigen::EigenvaluesOnly);
    const double largest = eig.eigenvalues().maxCoeff();
    if (!(eig.eigenvalues().minCoeff() > kSingularTolerance * std::max(1.0, largest)))
      fail(ErrorCode::SingularConditioning, "conditioning covariance is singular");
    block -= cross * cc.ldlt().solve(cross.transpose());
  }

  // A variable fully determined by the conditioning set is constant given it.
  const double eps = kSingularTolerance;
  if (block(0, 0) <= eps * std::max(1.0, covariance(ia, ia)) || block(1, 1) <= eps * std::max(1.0, covariance(ib, ib)))
    return 0.0;
  return block(0, 1) / std::sqrt(block(0, 0) * block(1, 1));
}

ExactOracle::ExactOracle(const VariableSystem& system, const LinearScm& scm)
    : covariance_(composite_covariance(system, scm)) {
  for (std::size_t v = 0; v < system.size(); ++v) index_.emplace(system.variables()[v].name(), v);
}

std::size_t ExactOracle::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) fail(ErrorCode::UnknownVariable, "no composite variable named '" + name + "'");
  return it->second;
}

CiResult ExactOracle::test(const std::string& a, const std::string& b,
                           const std::vector<std::string>& conditioning) const {
  std::vector<std::size_t> cond;
  for (const auto& c : conditioning) cond.push_back(index_of(c));
  const double r = partial_correlation(covariance_, index_of(a), index_of(b), cond);
  return {std::abs(r) <= kIndependenceTolerance, r};
}

CiResult ci_test_exact(const VariableSystem& system, const LinearScm& scm, const std::string& a, const std::string& b,
                       const std::vector<std::string>& conditioning) {
  return ExactOracle(system, scm).test(a, b, conditioning);
}

Eigen::MatrixXd sample_covariance(const RealizationBatch& batch) {
  const Eigen::MatrixXd centered = batch.composite_values.rowwise() - batch.composite_values.colwise().mean();
  return (centered.adjoint() * centered) / static_cast<double>(batch.count > 1 ? batch.count - 1 : 1);
}

EmpiricalOracle::EmpiricalOracle(const RealizationBatch& batch)
    : count_(batch.count), covariance_(sample_covariance(batch)) {
  for (std::size_t v = 0; v < batch.variable_names.size(); ++v) index_.emplace(batch.variable_names[v], v);
}

EmpiricalCiResult EmpiricalOracle::test(const std::string& a, const std::string& b,
                                        const std::vector<std::string>& conditioning, double alpha) const {
  auto lookup = [&](const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) fail(ErrorCode::UnknownVariable, "no composite variable named '" + name + "'");
    return it->second;
  };
  if (count_ < conditioning.size() + 4)
    fail(ErrorCode::InsufficientSamples, "Fisher z test needs at least " + std::to_string(conditioning.size() + 4) +
                                             " realizations, got " + std::to_string(count_));
  std::vector<std::size_t> cond;
  for (const auto& c : conditioning) cond.push_back(lookup(c));
  EmpiricalCiResult out;
  out.partial_correlation = partial_correlation(covariance_, lookup(a), lookup(b), cond);
  const double dof = static_cast<double>(count_ - conditioning.size() - 3);
  const double r = out.partial_correlation;
  if (std::abs(r) >= 1.0) {
    out.statistic = std::copysign(INFINITY, r);
    out.p_value = 0.0;
  } else {
    out.statistic = std::sqrt(dof) * std::atanh(r);
    out.p_value = std::erfc(std::abs(out.statistic) / std::sqrt(2.0));
  }
  out.independent = out.p_value >= alpha;
  return out;
}

EmpiricalCiResult ci_test_empirical(const RealizationBatch& batch, const std::string& a, const std::string& b,
                                    const std::vector<std::string>& conditioning, double alpha) {
  return EmpiricalOracle(batch).test(a, b, conditioning, alpha);
}

void write_csv(const RealizationBatch& batch, std::ostream& out) {
  for (std::size_t v = 0; v < batch.variable_names.size(); ++v) {
    if (v) out << ',';
    out << batch.variable_names[v];
  }
  out << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < batch.composite_values.rows(); ++r) {
    for (Eigen::Index c = 0; c < batch.composite_values.cols(); ++c) {
      if (c) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", batch.composite_values(r, c));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace tempodag
