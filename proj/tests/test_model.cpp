#include <gtest/gtest.h>

#include "support.hpp"

using namespace pidlint;
using namespace testing_support;

TEST(Taxonomy, BuiltinSubsumption) {
  const auto& t = *builtin_taxonomy();
  EXPECT_TRUE(t.is_subclass("CentrifugalPump", "Pump"));
  EXPECT_TRUE(t.is_subclass("CentrifugalPump", kRootClass));
  EXPECT_TRUE(t.is_subclass("GateValve", "OperatedValve"));
  EXPECT_TRUE(t.is_subclass("Pump", "Pump"));
  EXPECT_FALSE(t.is_subclass("Pump", "CentrifugalPump"));
  EXPECT_FALSE(t.is_subclass("CheckValve", "OperatedValve"));
  EXPECT_THROW(t.is_subclass("NoSuchClass", kRootClass), TaxonomyError);
  EXPECT_EQ(t.ancestors("GlobeValve"),
            (std::vector<std::string>{"OperatedValve", "Valve", "PipingComponent", kRootClass}));
}

TEST(Taxonomy, FromPairsAcceptsAnyOrderAndRejectsCycles) {
  auto t = Taxonomy::from_pairs({{"B", "A"}, {"A", kRootClass}});
  EXPECT_TRUE(t.is_subclass("B", kRootClass));
  EXPECT_THROW(Taxonomy::from_pairs({{"A", "B"}, {"B", "A"}}), TaxonomyError);
  EXPECT_THROW(Taxonomy::from_pairs({{"A", "Missing"}}), TaxonomyError);
  Taxonomy dup;
  dup.add_class("X", kRootClass);
  EXPECT_THROW(dup.add_class("X", kRootClass), TaxonomyError);
}

TEST(Graph, AddRejectsUnknownClassDuplicatesAndDangling) {
  PidGraph g;
  add(g, "A", "Vessel");
  EXPECT_THROW(add(g, "A", "Vessel"), GraphError);
  EXPECT_THROW(add(g, "B", "Spaceship"), GraphError);
  EXPECT_THROW(pipe(g, "L1", "A", "Z"), GraphError);
  pipe(g, "L1", "A", "A");
  EXPECT_THROW(pipe(g, "L1", "A", "A"), GraphError);
  EXPECT_TRUE(g.validate().empty());
}

TEST(Graph, RemoveNodeCascadesToIncidentEdges) {
  PidGraph g;
  add(g, "A", "Vessel");
  add(g, "B", "GateValve");
  add(g, "C", "CentrifugalPump");
  pipe(g, "L1", "A", "B");
  pipe(g, "L2", "B", "C");
  signal(g, "S1", "C", "A");
  auto removed = g.remove_node("B");
  std::sort(removed.begin(), removed.end());
  EXPECT_EQ(removed, (std::vector<std::string>{"L1", "L2"}));
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.out_edge_ids("A").empty());
  EXPECT_TRUE(g.validate().empty());
  EXPECT_THROW(g.remove_node("B"), GraphError);
  EXPECT_THROW(g.remove_edge("L1"), GraphError);
}

TEST(Graph, NeighborsFilterByDirectionAndKindInEdgeIdOrder) {
  PidGraph g;
  add(g, "P", "CentrifugalPump");
  add(g, "X", "Vessel");
  add(g, "Y", "GateValve");
  pipe(g, "L2", "P", "Y");
  pipe(g, "L1", "X", "P");
  signal(g, "S1", "P", "X");
  pipe(g, "L3", "P", "Y");  // parallel
  auto out = g.neighbors("P", Direction::out, EdgeKind::pipe);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].edge->id, "L2");
  EXPECT_EQ(out[1].edge->id, "L3");
  auto in = g.neighbors("P", Direction::in, std::nullopt);
  ASSERT_EQ(in.size(), 1u);
  EXPECT_EQ(in[0].node->id, "X");
  EXPECT_EQ(g.neighbors("P", Direction::any, std::nullopt).size(), 4u);
}

TEST(Graph, EqualityIsStructural) {
  PidGraph a = build_case_study_fixture();
  PidGraph b = build_case_study_fixture();
  EXPECT_TRUE(a == b);
  b.remove_edge("L01");
  EXPECT_FALSE(a == b);
}

TEST(Fixture, HasDocumentedShape) {
  PidGraph g = build_case_study_fixture();
  EXPECT_EQ(g.node_count(), 33u);
  EXPECT_EQ(g.edge_count(), 36u);
  EXPECT_TRUE(g.validate().empty());
  int pumps = 0, vessels = 0, pipes = 0;
  for (const auto& [id, n] : g.nodes()) {
    pumps += g.taxonomy().is_subclass(n.cls, "Pump");
    vessels += n.cls == "Vessel";
  }
  for (const auto& [id, e] : g.edges()) pipes += e.kind == EdgeKind::pipe;
  EXPECT_EQ(pumps, 2);
  EXPECT_EQ(vessels, 1);
  EXPECT_EQ(pipes, 19);
  // Every pipe attribute set carries a DN below 100, so Rule 3 stays quiet.
  for (const auto& [id, e] : g.edges()) {
    if (e.kind != EdgeKind::pipe) continue;
    auto it = e.attributes.find("nominalDiameterDN");
    ASSERT_NE(it, e.attributes.end()) << id;
    EXPECT_LT(as_double(it->second), 100.0) << id;
  }
}
