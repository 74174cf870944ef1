#pragma once

// Shared helpers for the test suite: fixture loading, random generators and
// reference oracles written independently of the library's algorithms.

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tempodag/acyclicity.hpp"
#include "tempodag/scm_oracle.hpp"
#include "tempodag/spec_format.hpp"

// Asserts that `stmt` throws tempodag::Error with the given code.
#define EXPECT_CODE(stmt, expected)                                        \
  do {                                                                     \
    try {                                                                  \
      stmt;                                                                \
      ADD_FAILURE() << "no error raised, expected " << tempodag::to_string(expected); \
    } catch (const tempodag::Error& e) {                                   \
      EXPECT_EQ(e.code(), expected) << e.what();                           \
    }                                                                      \
  } while (0)

namespace testing_support {

using namespace tempodag;

inline std::string fixture_path(const std::string& name) { return std::string(TEMPODAG_FIXTURE_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(TEMPODAG_GOLDEN_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline LoadedSystem load_fixture(const std::string& name) { return build(parse_spec(read_text(fixture_path(name)))); }

inline AtomicDag make_dag(const std::vector<std::string>& nodes,
                          const std::vector<std::pair<std::string, std::string>>& edges) {
  AtomicDag dag;
  for (const auto& n : nodes) dag.add_node(parse_node(n));
  for (const auto& [a, b] : edges) dag.add_edge(parse_node(a), parse_node(b));
  return dag;
}

inline TimeSet ts(std::initializer_list<std::int64_t> ticks) { return make_time_set(ticks); }

// ---------------------------------------------------------------------------
// Reference oracles

/// reach[u] = nodes reachable from u, by naive recursion over the edge list.
inline std::vector<std::set<NodeIndex>> brute_reach(const AtomicDag& dag) {
  std::vector<std::vector<NodeIndex>> out_edges(dag.node_count());
  for (const auto& [u, v] : dag.edges()) out_edges[u].push_back(v);
  std::vector<std::set<NodeIndex>> reach(dag.node_count());
  for (NodeIndex s = 0; s < dag.node_count(); ++s) {
    std::function<void(NodeIndex)> walk = [&](NodeIndex u) {
      for (NodeIndex v : out_edges[u])
        if (reach[s].insert(v).second) walk(v);
    };
    walk(s);
  }
  return reach;
}

/// d-separation through the moralized ancestral graph.
inline bool moral_d_separated(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                              std::size_t a, std::size_t b, const std::vector<std::size_t>& z) {
  std::vector<std::vector<std::size_t>> parents(n);
  for (const auto& [u, v] : edges) parents[v].push_back(u);
  std::vector<char> keep(n, 0);
  std::vector<std::size_t> stack{a, b};
  stack.insert(stack.end(), z.begin(), z.end());
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = 1;
    for (std::size_t p : parents[v]) stack.push_back(p);
  }
  std::vector<std::set<std::size_t>> adj(n);
  auto link = [&](std::size_t x, std::size_t y) {
    adj[x].insert(y);
    adj[y].insert(x);
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    for (std::size_t i = 0; i < parents[v].size(); ++i) {
      link(parents[v][i], v);
      for (std::size_t j = i + 1; j < parents[v].size(); ++j) link(parents[v][i], parents[v][j]);
    }
  }
  std::vector<char> blocked(n, 0), seen(n, 0);
  for (std::size_t v : z) blocked[v] = 1;
  stack = {a};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = 1;
    if (v == b) return false;
    for (std::size_t w : adj[v])
      if (keep[w] && !blocked[w]) stack.push_back(w);
  }
  return true;
}

/// Jointly supported subset pairs of (a, b), straight from the joint rows.
inline std::set<SubsetPair> joint_pairs(const VariableSystem& s, const std::string& a, const std::string& b) {
  std::set<SubsetPair> out;
  for (const auto& row : s.joint_assignments()) out.emplace(row.subsets.at(a), row.subsets.at(b));
  return out;
}

/// All subset pairs of the product of marginal supports.
inline std::set<SubsetPair> product_pairs(const VariableSystem& s, const std::string& a, const std::string& b) {
  std::set<SubsetPair> out;
  for (const auto& x : s.variable(a).support())
    for (const auto& y : s.variable(b).support()) out.emplace(x.subset, y.subset);
  return out;
}

/// Does some path run from `from` to `to` whose interior nodes satisfy `ok`?
/// Exhaustive depth-first enumeration.
inline bool path_exists(const AtomicDag& dag, NodeIndex from, NodeIndex to, const std::function<bool(NodeIndex)>& ok) {
  std::vector<char> seen(dag.node_count(), 0);
  std::function<bool(NodeIndex)> walk = [&](NodeIndex u) {
    for (const auto& [x, y] : dag.edges()) {
      if (x != u) continue;
      if (y == to) return true;
      if (!seen[y] && ok(y)) {
        seen[y] = 1;
        if (walk(y)) return true;
      }
    }
    return false;
  };
  return walk(from);
}

inline NodeIndex node_index(const VariableSystem& s, const std::string& var, TimePoint t) {
  return s.atomic().index_of({s.variable(var).process(), t});
}

/// Composite causation recomputed by enumeration: interior nodes must not be
/// claimed by a variable other than a or b.
inline bool causes_oracle(const VariableSystem& s, const std::string& a, const std::string& b) {
  std::map<NodeIndex, std::string> claim;
  for (const auto& v : s.variables())
    for (auto t : v.possible_times()) claim[s.atomic().index_of({v.process(), t})] = v.name();
  auto ok = [&](NodeIndex n) {
    auto it = claim.find(n);
    return it == claim.end() || it->second == a || it->second == b;
  };
  for (const auto& [sa, sb] : joint_pairs(s, a, b))
    for (auto ta : sa)
      for (auto tb : sb)
        if (path_exists(s.atomic(), node_index(s, a, ta), node_index(s, b, tb), ok)) return true;
  return false;
}

/// Raw (unrestricted) path between some t_a in s_a and t_b in s_b, over the
/// given subset pairs.
inline bool raw_path_over(const VariableSystem& s, const std::set<SubsetPair>& pairs, const std::string& a,
                          const std::string& b, bool forward) {
  const auto reach = brute_reach(s.atomic());
  for (const auto& [sa, sb] : pairs)
    for (auto ta : sa)
      for (auto tb : sb) {
        const NodeIndex na = node_index(s, a, ta), nb = node_index(s, b, tb);
        if (forward ? reach[na].contains(nb) : reach[nb].contains(na)) return true;
      }
  return false;
}

// ---------------------------------------------------------------------------
// Random generators

/// Nodes on `processes` processes named P0, P1, ...; each process gets between
/// 1 and max_ticks distinct ticks in [0, horizon). Forward edges with
/// probability p.
inline AtomicDag random_dag(std::mt19937_64& rng, std::size_t processes, std::size_t max_ticks, std::int64_t horizon,
                            double p) {
  AtomicDag dag;
  std::uniform_int_distribution<std::size_t> count(1, max_ticks);
  for (std::size_t i = 0; i < processes; ++i) {
    std::vector<std::int64_t> all(static_cast<std::size_t>(horizon));
    for (std::int64_t t = 0; t < horizon; ++t) all[static_cast<std::size_t>(t)] = t;
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t k = std::min(count(rng), all.size());
    for (std::size_t j = 0; j < k; ++j) dag.add_node(node("P" + std::to_string(i), all[j]));
  }
  std::bernoulli_distribution coin(p);
  const auto nodes = dag.nodes();
  for (const auto& u : nodes)
    for (const auto& v : nodes)
      if (u.time < v.time && coin(rng)) dag.add_edge(u, v);
  return dag;
}

struct SystemShape {
  std::size_t processes = 3;
  std::size_t max_ticks = 4;
  std::int64_t horizon = 10;
  double edge_probability = 0.3;
  bool allow_mixture = true;
  bool allow_aggregate = true;
  bool singletons_only = false;  // deterministic arity-1 selections
  bool random_joint = true;      // else product of marginals
};

/// One variable per process, claiming all of that process's ticks.
inline VariableSystem random_system(std::mt19937_64& rng, const SystemShape& shape) {
  AtomicDag dag = random_dag(rng, shape.processes, shape.max_ticks, shape.horizon, shape.edge_probability);
  std::map<std::string, TimeSet> ticks;
  for (const auto& n : dag.nodes()) ticks[n.process.name()].insert(n.time);

  struct Draft {
    std::string name;
    ProcessId process;
    TimeSet possible;
    std::vector<TimeSet> subsets;
    AggregationSpec aggregation = AggregationSpec::identity();
  };
  std::vector<Draft> drafts;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& [proc, possible] : ticks) {
    Draft d{"V" + proc.substr(1), ProcessId(proc), possible, {}};
    std::vector<TimePoint> pts(possible.begin(), possible.end());
    const double kind = unit(rng);
    if (shape.singletons_only || (!shape.allow_mixture && !shape.allow_aggregate) || pts.size() == 1 || kind < 0.34) {
      std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
      d.subsets = {{pts[pick(rng)]}};
    } else if (shape.allow_mixture && (kind < 0.67 || !shape.allow_aggregate)) {
      std::shuffle(pts.begin(), pts.end(), rng);
      std::uniform_int_distribution<std::size_t> m(2, pts.size());
      const std::size_t count = m(rng);
      for (std::size_t i = 0; i < count; ++i) d.subsets.push_back({pts[i]});
    } else {
      std::shuffle(pts.begin(), pts.end(), rng);
      std::uniform_int_distribution<std::size_t> m(2, pts.size());
      TimeSet used(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(m(rng)));
      d.subsets = {used};
      if (unit(rng) < 0.5) {
        d.aggregation = AggregationSpec::mean();
      } else {
        std::vector<double> w;
        for (std::size_t i = 0; i < used.size(); ++i) w.push_back(unit(rng) < 0.5 ? -0.5 - unit(rng) : 0.5 + unit(rng));
        d.aggregation = AggregationSpec::weighted_sum(w);
      }
    }
    drafts.push_back(std::move(d));
  }

  // Joint rows first, marginals derived from them.
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::vector<std::size_t>> all{{}};
  for (const auto& d : drafts) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& r : all)
      for (std::size_t i = 0; i < d.subsets.size(); ++i) {
        auto e = r;
        e.push_back(i);
        next.push_back(e);
      }
    all = std::move(next);
  }
  if (!shape.random_joint) {
    rows = all;
  } else {
    std::bernoulli_distribution keep(0.6);
    for (const auto& r : all)
      if (keep(rng)) rows.push_back(r);
    for (std::size_t v = 0; v < drafts.size(); ++v)
      for (std::size_t i = 0; i < drafts[v].subsets.size(); ++i) {
        const bool covered = std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r[v] == i; });
        if (!covered) {
          std::vector<std::size_t> r;
          for (std::size_t w = 0; w < drafts.size(); ++w) {
            std::uniform_int_distribution<std::size_t> pick(0, drafts[w].subsets.size() - 1);
            r.push_back(w == v ? i : pick(rng));
          }
          if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
        }
      }
  }
  std::vector<double> weights;
  for (std::size_t i = 0; i < rows.size(); ++i) weights.push_back(shape.random_joint ? 0.1 + unit(rng) : 1.0);
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;

  std::vector<CompositeVariable> vars;
  for (std::size_t v = 0; v < drafts.size(); ++v) {
    std::vector<SupportEntry> support;
    for (std::size_t i = 0; i < drafts[v].subsets.size(); ++i) {
      double m = 0.0;
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r][v] == i) m += weights[r];
      support.push_back({drafts[v].subsets[i], drafts[v].subsets.size() == 1 ? 1.0 : m});
    }
    vars.emplace_back(drafts[v].name, drafts[v].process, drafts[v].possible, drafts[v].subsets.front().size(),
                      std::move(support), drafts[v].aggregation);
  }
  std::optional<std::vector<JointAssignment>> joint;
  if (shape.random_joint) {
    joint.emplace();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      JointAssignment a;
      for (std::size_t v = 0; v < drafts.size(); ++v) a.subsets[drafts[v].name] = drafts[v].subsets[rows[r][v]];
      a.probability = weights[r];
      joint->push_back(std::move(a));
    }
  }
  return build_system(std::move(dag), std::move(vars), std::move(joint));
}

/// Coefficients uniform in [0.5, 2] with random sign.
inline std::map<EdgeKey, double> generic_coefficients(std::mt19937_64& rng, const AtomicDag& dag) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5);
  std::map<EdgeKey, double> out;
  for (const auto& [u, v] : dag.edges()) out[{dag.node_at(u), dag.node_at(v)}] = sign(rng) ? mag(rng) : -mag(rng);
  return out;
}

/// Random DAG on n single-node processes with distinct ticks and an identity
/// selection per node, so composite and atomic graphs coincide.
inline VariableSystem random_identity_system(std::mt19937_64& rng, std::size_t n, double p) {
  AtomicDag dag;
  std::vector<std::int64_t> ticks(n);
  for (std::size_t i = 0; i < n; ++i) ticks[i] = static_cast<std::int64_t>(i);
  std::shuffle(ticks.begin(), ticks.end(), rng);
  std::vector<CompositeVariable> vars;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = std::string(1, static_cast<char>('A' + i));
    dag.add_node(node(name, ticks[i]));
    vars.push_back(make_selection(name, ProcessId(name), {TimePoint(ticks[i])}, TimePoint(ticks[i])));
  }
  std::bernoulli_distribution coin(p);
  const auto nodes = dag.nodes();
  for (const auto& u : nodes)
    for (const auto& v : nodes)
      if (u.time < v.time && coin(rng)) dag.add_edge(u, v);
  return build_system(std::move(dag), std::move(vars));
}

/// Every subset of {0..n-1} minus {a, b}.
inline std::vector<std::vector<std::size_t>> conditioning_sets(std::size_t n, std::size_t a, std::size_t b) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (i != a && i != b) rest.push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (mask >> i & 1U) s.push_back(rest[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace testing_support
