#include <gtest/gtest.h>

#include <functional>

#include "support.hpp"
#include "tempodag/discovery.hpp"

using namespace tempodag;
using namespace testing_support;

namespace {

using NamePairs = std::vector<std::pair<std::string, std::string>>;

CompositeGraph graph_of(std::vector<std::string> names, const NamePairs& edges) {
  CompositeGraph g(std::move(names));
  for (const auto& [a, b] : edges) g.add_edge(g.index_of(a), g.index_of(b));
  return g;
}

Pdag pdag_of(std::vector<std::string> names, const NamePairs& undirected, const NamePairs& directed) {
  Pdag p(std::move(names));
  for (const auto& [a, b] : undirected) p.add_undirected(p.index_of(a), p.index_of(b));
  for (const auto& [a, b] : directed) p.orient(p.index_of(a), p.index_of(b));
  return p;
}

class FunctionOracle final : public IndependenceOracle {
 public:
  using Fn = std::function<bool(const std::string&, const std::string&, const std::vector<std::string>&)>;
  explicit FunctionOracle(Fn fn) : fn_(std::move(fn)) {}
  bool independent(const std::string& a, const std::string& b, const std::vector<std::string>& c) const override {
    return fn_(a, b, c);
  }

 private:
  Fn fn_;
};

std::vector<std::string> names_of(const VariableSystem& s, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(s.variables()[i].name());
  return out;
}

TEST(DSeparated, ChainAndCollider) {
  const auto chain = graph_of({"X", "Y", "Z"}, {{"X", "Y"}, {"Y", "Z"}});
  EXPECT_FALSE(d_separated(chain, "X", "Z", {}));
  EXPECT_TRUE(d_separated(chain, "X", "Z", {"Y"}));

  const auto collider = graph_of({"X", "Y", "Z"}, {{"X", "Y"}, {"Z", "Y"}});
  EXPECT_TRUE(d_separated(collider, "X", "Z", {}));
  EXPECT_FALSE(d_separated(collider, "X", "Z", {"Y"}));
}

TEST(DSeparated, DescendantOfColliderOpensPath) {
  const auto g = graph_of({"W", "X", "Y", "Z"}, {{"X", "Y"}, {"Z", "Y"}, {"Y", "W"}});
  EXPECT_FALSE(d_separated(g, "X", "Z", {"W"}));
}

TEST(DSeparated, Errors) {
  const auto cyclic = graph_of({"X", "Y"}, {{"X", "Y"}, {"Y", "X"}});
  EXPECT_CODE(d_separated(cyclic, "X", "Y", {}), ErrorCode::NotADag);
  const auto chain = graph_of({"X", "Y", "Z"}, {{"X", "Y"}, {"Y", "Z"}});
  EXPECT_CODE(d_separated(chain, "X", "Q", {}), ErrorCode::UnknownVariable);
  EXPECT_CODE(d_separated(chain, "X", "X", {}), ErrorCode::SameVariable);
  EXPECT_CODE(d_separated(chain, "X", "Z", {"X"}), ErrorCode::SameVariable);
}

TEST(DSeparated, AtomicOverload) {
  const auto dag = make_dag({"A@0", "B@1", "C@2"}, {{"A@0", "B@1"}, {"B@1", "C@2"}});
  const NodeIndex a = dag.index_of(node("A", 0)), b = dag.index_of(node("B", 1)), c = dag.index_of(node("C", 2));
  const std::vector<NodeIndex> given{b};
  EXPECT_TRUE(d_separated(dag, a, c, given));
  EXPECT_FALSE(d_separated(dag, a, c, {}));
}

TEST(DSeparated, BayesBallMatchesMoralization) {
  std::mt19937_64 rng(1001);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
    std::vector<std::vector<std::size_t>> children(n);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (coin(rng)) {
          children[u].push_back(v);
          edges.emplace_back(u, v);
        }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (const auto& z : conditioning_sets(n, a, b))
          ASSERT_EQ(d_separated(children, a, b, z), moral_d_separated(n, edges, a, b, z));
  }
}

TEST(DSeparated, AgreesWithExactOracleOnFaithfulSystems) {
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_identity_system(rng, 2 + static_cast<std::size_t>(trial % 5), 0.5);
    const auto scm = LinearScm::with_unit_noise(s.atomic(), generic_coefficients(rng, s.atomic()));
    const ExactOracle oracle(s, scm);
    const auto g = derive_composite_graph(s);
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        for (const auto& z : conditioning_sets(s.size(), a, b)) {
          const auto& na = s.variables()[a].name();
          const auto& nb = s.variables()[b].name();
          ASSERT_EQ(d_separated(g, na, nb, names_of(s, z)), oracle.test(na, nb, names_of(s, z)).independent);
        }
  }
}

TEST(AuditFaithfulness, SplitMediatorHasOneViolation) {
  const auto loaded = load_fixture("split_mediator.json");
  const auto v = audit_faithfulness(loaded.system, *loaded.scm);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].first, "X");
  EXPECT_EQ(v[0].second, "Z");
  EXPECT_TRUE(v[0].conditioning.empty());
  EXPECT_NEAR(v[0].partial_correlation, 0.0, 1e-12);
}

TEST(AuditFaithfulness, FaithfulAndEmptySystems) {
  const auto chain = load_fixture("faithful_chain.json");
  EXPECT_TRUE(audit_faithfulness(chain.system, *chain.scm).empty());
  const auto triple = load_fixture("independent_triple.json");
  EXPECT_TRUE(audit_faithfulness(triple.system, *triple.scm).empty());
}

TEST(AuditFaithfulness, Errors) {
  const auto b = load_fixture("treatment_cycle.json");
  const auto scm_b = LinearScm::with_unit_noise(b.system.atomic(), {{{node("Y", 0), node("X", 7)}, 1.0},
                                                                    {{node("X", 7), node("Y", 10)}, 1.0},
                                                                    {{node("Y", 0), node("Y", 10)}, 1.0}});
  EXPECT_CODE(audit_faithfulness(b.system, scm_b), ErrorCode::NotADag);

  const auto mixing = load_fixture("mixing_restricted.json").system;
  std::mt19937_64 rng(3);
  const auto scm_m = LinearScm::with_unit_noise(mixing.atomic(), generic_coefficients(rng, mixing.atomic()));
  EXPECT_CODE(audit_faithfulness(mixing, scm_m), ErrorCode::MixingNotExact);

  const auto big = random_identity_system(rng, 9, 0.2);
  const auto scm_big = LinearScm::with_unit_noise(big.atomic(), generic_coefficients(rng, big.atomic()));
  EXPECT_CODE(audit_faithfulness(big, scm_big), ErrorCode::TooManyVariables);
  EXPECT_NO_THROW(audit_faithfulness(big, scm_big, {1}));
}

TEST(AuditFaithfulness, ReportedViolationsReproduce) {
  std::mt19937_64 rng(1003);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SystemShape shape;
    shape.allow_mixture = false;
    shape.random_joint = false;
    shape.processes = 3 + static_cast<std::size_t>(trial % 2);
    const auto s = random_system(rng, shape);
    const auto g = derive_composite_graph(s);
    if (!g.is_dag()) continue;
    // Coefficients of +-1 make path cancellations common.
    std::map<EdgeKey, double> coef;
    std::bernoulli_distribution sign(0.5);
    for (const auto& [u, v] : s.atomic().edges()) coef[{s.atomic().node_at(u), s.atomic().node_at(v)}] = sign(rng) ? 1 : -1;
    const auto scm = LinearScm::with_unit_noise(s.atomic(), coef);
    for (const auto& v : audit_faithfulness(s, scm)) {
      ++found;
      ASSERT_TRUE(ci_test_exact(s, scm, v.first, v.second, v.conditioning).independent);
      ASSERT_FALSE(d_separated(g, v.first, v.second, v.conditioning));
    }
  }
  EXPECT_GT(found, 0);
}

TEST(PcSkeleton, SplitMediator) {
  const auto loaded = load_fixture("split_mediator.json");
  const ExactOracle oracle(loaded.system, *loaded.scm);
  const auto sk = pc_skeleton(ExactIndependence(oracle), {"Z", "Y", "X"});
  EXPECT_EQ(sk.graph.names(), (std::vector<std::string>{"X", "Y", "Z"}));
  EXPECT_EQ(sk.graph.undirected_edges(), (NamePairs{{"X", "Y"}, {"Y", "Z"}}));
  EXPECT_EQ(sk.separating_sets.at({"X", "Z"}), std::vector<std::string>{});
  EXPECT_EQ(sk.separating_sets.size(), 1u);
}

TEST(PcSkeleton, IndependentTripleAndDuplicates) {
  const FunctionOracle all_independent([](auto&, auto&, auto&) { return true; });
  EXPECT_TRUE(pc_skeleton(all_independent, {"A", "B", "C"}).graph.undirected_edges().empty());

  // A and B are copies of one another: never independent, everything else is.
  const FunctionOracle duplicates([](const std::string& a, const std::string& b, auto&) {
    return !((a == "A" && b == "B") || (a == "B" && b == "A"));
  });
  EXPECT_EQ(pc_skeleton(duplicates, {"A", "B", "C"}).graph.undirected_edges(), (NamePairs{{"A", "B"}}));
}

TEST(PcSkeleton, TestsSubsetsOfLiveAdjacenciesInOrder) {
  std::vector<std::vector<std::string>> asked;
  // Chain A - B - C - D: separated only by an interior node.
  const FunctionOracle chain([&](const std::string& a, const std::string& b, const std::vector<std::string>& c) {
    if (a == "A" && b == "B") asked.push_back(c);
    auto pos = [](const std::string& x) { return x[0] - 'A'; };
    const int lo = std::min(pos(a), pos(b)), hi = std::max(pos(a), pos(b));
    if (hi - lo == 1) return false;
    for (const auto& z : c)
      if (pos(z) > lo && pos(z) < hi) return true;
    return false;
  });
  const auto sk = pc_skeleton(chain, {"A", "B", "C", "D"});
  EXPECT_EQ(sk.graph.undirected_edges(), (NamePairs{{"A", "B"}, {"B", "C"}, {"C", "D"}}));
  EXPECT_EQ(sk.separating_sets.at({"A", "C"}), std::vector<std::string>{"B"});
  EXPECT_EQ(sk.separating_sets.at({"A", "D"}), std::vector<std::string>{"B"});
  ASSERT_FALSE(asked.empty());
  EXPECT_TRUE(asked.front().empty());
}

TEST(Orient, SplitMediatorCollider) {
  const auto loaded = load_fixture("split_mediator.json");
  const ExactOracle oracle(loaded.system, *loaded.scm);
  const auto sk = pc_skeleton(ExactIndependence(oracle), {"X", "Y", "Z"});
  EXPECT_EQ(find_v_structures(sk), (std::vector<VStructure>{{"X", "Y", "Z"}}));
  const auto p = orient(sk);
  EXPECT_EQ(p.directed_edges(), (NamePairs{{"X", "Y"}, {"Z", "Y"}}));
  EXPECT_TRUE(p.undirected_edges().empty());
}

TEST(Orient, ChainStaysUndirectedAndIsolatedNodesUnchanged) {
  Skeleton chain{pdag_of({"X", "Y", "Z"}, {{"X", "Y"}, {"Y", "Z"}}, {}), {{{"X", "Z"}, {"Y"}}}};
  EXPECT_TRUE(find_v_structures(chain).empty());
  EXPECT_EQ(orient(chain), chain.graph);

  Skeleton pair{Pdag({"A", "B"}), {{{"A", "B"}, {}}}};
  EXPECT_EQ(orient(pair), pair.graph);
}

TEST(Orient, ConflictingVStructures) {
  Skeleton sk{pdag_of({"A", "B", "C", "D"}, {{"A", "B"}, {"B", "C"}, {"C", "D"}}, {}),
              {{{"A", "C"}, {}}, {{"A", "D"}, {}}, {{"B", "D"}, {}}}};
  EXPECT_CODE(orient(sk), ErrorCode::ConflictingOrientations);
}

TEST(MeekRules, EachRuleFires) {
  // R1: A -> B - C, A and C nonadjacent.
  auto r1 = apply_meek_rules(pdag_of({"A", "B", "C"}, {{"B", "C"}}, {{"A", "B"}}));
  EXPECT_TRUE(r1.directed(r1.index_of("B"), r1.index_of("C")));

  // R2: A -> B -> C with A - C.
  auto r2 = apply_meek_rules(pdag_of({"A", "B", "C"}, {{"A", "C"}}, {{"A", "B"}, {"B", "C"}}));
  EXPECT_TRUE(r2.directed(r2.index_of("A"), r2.index_of("C")));

  // R3: A - C -> B, A - D -> B, A - B, C and D nonadjacent.
  auto r3 = apply_meek_rules(
      pdag_of({"A", "B", "C", "D"}, {{"A", "B"}, {"A", "C"}, {"A", "D"}}, {{"C", "B"}, {"D", "B"}}));
  EXPECT_TRUE(r3.directed(r3.index_of("A"), r3.index_of("B")));
  EXPECT_TRUE(r3.undirected(r3.index_of("A"), r3.index_of("C")));

  // R4: C -> D -> B, A adjacent to B, C, D; C and B nonadjacent.
  auto r4 = apply_meek_rules(
      pdag_of({"A", "B", "C", "D"}, {{"A", "B"}, {"A", "C"}, {"A", "D"}}, {{"C", "D"}, {"D", "B"}}));
  EXPECT_TRUE(r4.directed(r4.index_of("A"), r4.index_of("B")));
}

TEST(MeekRules, ClosureIsIdempotent) {
  std::mt19937_64 rng(1004);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_identity_system(rng, 3 + static_cast<std::size_t>(trial % 4), 0.5);
    const auto scm = LinearScm::with_unit_noise(s.atomic(), generic_coefficients(rng, s.atomic()));
    const ExactOracle oracle(s, scm);
    std::vector<std::string> names;
    for (const auto& v : s.variables()) names.push_back(v.name());
    const auto once = orient(pc_skeleton(ExactIndependence(oracle), names));
    ASSERT_EQ(apply_meek_rules(once), once);
    ASSERT_TRUE(once.directed_part_acyclic());
  }
}

TEST(PcProperties, RecoversEquivalenceClassOfFaithfulSystems) {
  std::mt19937_64 rng(1005);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_identity_system(rng, 2 + static_cast<std::size_t>(trial % 5), 0.5);
    const auto scm = LinearScm::with_unit_noise(s.atomic(), generic_coefficients(rng, s.atomic()));
    const ExactOracle oracle(s, scm);
    const auto truth = derive_composite_graph(s);
    std::vector<std::string> names;
    for (const auto& v : s.variables()) names.push_back(v.name());
    const auto sk = pc_skeleton(ExactIndependence(oracle), names);
    const auto p = orient(sk);

    std::set<std::pair<std::string, std::string>> true_adj, found_adj;
    for (const auto& [a, b] : truth.edge_names()) true_adj.insert(std::minmax(a, b));
    for (const auto& e : p.directed_edges()) found_adj.insert(std::minmax(e.first, e.second));
    for (const auto& e : p.undirected_edges()) found_adj.insert(e);
    ASSERT_EQ(found_adj, true_adj);

    std::set<std::tuple<std::string, std::string, std::string>> true_v, found_v;
    for (std::size_t c = 0; c < truth.size(); ++c) {
      const auto parents = truth.parents(c);
      for (std::size_t i = 0; i < parents.size(); ++i)
        for (std::size_t j = i + 1; j < parents.size(); ++j) {
          const auto& l = truth.names()[parents[i]];
          const auto& r = truth.names()[parents[j]];
          if (!truth.has_edge(l, r) && !truth.has_edge(r, l)) true_v.emplace(std::min(l, r), truth.names()[c], std::max(l, r));
        }
    }
    for (const auto& v : find_v_structures(sk)) found_v.emplace(v.left, v.collider, v.right);
    ASSERT_EQ(found_v, true_v);
    for (const auto& [a, b] : p.directed_edges()) ASSERT_TRUE(truth.has_edge(a, b)) << a << "->" << b;
  }
}

TEST(TemporalReport, SplitMediatorFlagsZToY) {
  const auto s = load_fixture("split_mediator.json").system;
  const auto report = temporal_consistency_report(pdag_of({"X", "Y", "Z"}, {}, {{"X", "Y"}, {"Z", "Y"}}), s);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].from, "Z");
  EXPECT_EQ(report[0].to, "Y");
  EXPECT_EQ(report[0].offending, (std::vector<SubsetPair>{{ts({10}), ts({2, 8})}}));
}

TEST(TemporalReport, SelectionPairCleanInterleavedFlagged) {
  const auto e1 = load_fixture("selection_pair.json").system;
  EXPECT_TRUE(temporal_consistency_report(pdag_of({"X", "Y"}, {}, {{"X", "Y"}}), e1).empty());
  const auto e3 = load_fixture("interleaved_aggregates.json").system;
  const auto r = temporal_consistency_report(pdag_of({"X", "Y"}, {}, {{"X", "Y"}}), e3);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].offending, (std::vector<SubsetPair>{{ts({0, 6}), ts({4, 10})}}));
  // Undirected edges are never flagged.
  EXPECT_TRUE(temporal_consistency_report(pdag_of({"X", "Y"}, {{"X", "Y"}}, {}), e3).empty());
  EXPECT_CODE(temporal_consistency_report(pdag_of({"W", "X"}, {}, {{"W", "X"}}), e3), ErrorCode::UnknownVariable);
}

TEST(PdagType, Errors) {
  EXPECT_CODE(Pdag({"A", "A"}), ErrorCode::DuplicateVariable);
  Pdag p({"A", "B"});
  EXPECT_CODE(p.index_of("C"), ErrorCode::UnknownVariable);
  EXPECT_CODE(p.add_undirected(0, 0), ErrorCode::SameVariable);
}

}  // namespace
