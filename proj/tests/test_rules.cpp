#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace pidlint;
using namespace testing_support;

namespace {

bool has_violation(const RuleGraph& r, const std::string& needle) {
  for (const auto& v : validate_rule(r, *builtin_taxonomy())) {
    if (v.reason.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Rules, BuiltinsAreValidAndOrdered) {
  auto rules = builtin_rules();
  ASSERT_EQ(rules.size(), 5u);
  std::vector<std::string> ids;
  for (const auto& r : rules) {
    EXPECT_TRUE(validate_rule(r, *builtin_taxonomy()).empty()) << r.meta.id;
    ids.push_back(r.meta.id);
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"3", "9", "21", "10", "19"}));
  EngineConfig c;
  auto selected = select_rules(rules, c);
  ASSERT_EQ(selected.size(), 5u);
  EXPECT_EQ(selected[2]->meta.id, "21");
  EXPECT_EQ(selected[3]->meta.id, "10");  // block valves before strainer
}

TEST(Rules, RecommendationLevels) {
  auto rules = builtin_rules();
  EXPECT_EQ(rule_by_id(rules, "9").meta.recommendation, Recommendation::mandatory);
  EXPECT_EQ(rule_by_id(rules, "21").meta.recommendation, Recommendation::mandatory);
  EXPECT_EQ(rule_by_id(rules, "3").meta.recommendation, Recommendation::suggested);
  EXPECT_EQ(rule_by_id(rules, "10").meta.recommendation, Recommendation::suggested);
  EXPECT_EQ(rule_by_id(rules, "19").meta.recommendation, Recommendation::suggested);
  EXPECT_FALSE(rule_by_id(rules, "3").meta.missing_component);
  EXPECT_TRUE(rule_by_id(rules, "9").meta.missing_component);
}

TEST(Rules, ProjectionsSplitByAction) {
  const auto r = rule_pump_suction_strainer();
  auto err = erroneous_pattern(r);
  auto cor = corrected_pattern(r);
  ASSERT_EQ(err.nodes.size(), 2u);
  ASSERT_EQ(err.edges.size(), 1u);
  EXPECT_EQ(err.edges[0].key, "suction");
  ASSERT_EQ(cor.nodes.size(), 3u);
  ASSERT_EQ(cor.edges.size(), 2u);
  EXPECT_TRUE(cor.find_node("strainer"));
  EXPECT_FALSE(err.find_node("strainer"));
}

TEST(Rules, ValidationCatchesMalformedRules) {
  using namespace detail;
  RuleGraph base = rule_pump_suction_strainer();

  RuleGraph r = base;
  r.meta.id.clear();
  auto vs = validate_rule(r, *builtin_taxonomy());
  ASSERT_FALSE(vs.empty());
  EXPECT_EQ(vs[0].element, "meta.id");

  r = base;
  r.nodes.push_back(r.nodes[0]);
  EXPECT_TRUE(has_violation(r, "duplicate"));

  r = base;
  r.nodes[0].pattern.cls = "Spaceship";
  EXPECT_TRUE(has_violation(r, "unknown class"));

  r = base;
  r.nodes[2].pattern.conditions = {{"x", ConditionOp::eq, {Value{std::int64_t{1}}}}};
  EXPECT_TRUE(has_violation(r, "insert"));

  r = base;
  r.edges[0].pattern.target_key = "nowhere";
  EXPECT_FALSE(validate_rule(r, *builtin_taxonomy()).empty());

  r = base;
  r.edges[1].copy_attributes_from = "to_pump";  // not an erroneous-pattern edge
  EXPECT_FALSE(validate_rule(r, *builtin_taxonomy()).empty());

  r = base;
  r.edges[0].copy_attributes_from = "suction";  // only inserted edges may copy
  EXPECT_FALSE(validate_rule(r, *builtin_taxonomy()).empty());

  // Erroneous pattern must be connected.
  r = base;
  r.nodes.push_back(rule_node("island", "Vessel"));
  EXPECT_TRUE(has_violation(r, "connected"));

  // Kept edge may not touch an inserted node.
  r = base;
  r.edges.push_back(rule_edge("bad", "strainer", "pump", EdgeKind::pipe, Action::keep));
  EXPECT_FALSE(validate_rule(r, *builtin_taxonomy()).empty());
}

// The shipped JSON rule files are the built-ins, byte for byte.
TEST(Rules, ShippedRuleFilesEqualBuiltins) {
  std::filesystem::path dir = PIDLINT_SOURCE_DIR "/rules";
  auto lib = load_rule_directory(dir);
  EXPECT_TRUE(lib.failures.empty());
  auto builtins = builtin_rules();
  ASSERT_EQ(lib.rules.size(), builtins.size());
  for (const auto& b : builtins) {
    const auto& loaded = rule_by_id(lib.rules, b.meta.id);
    EXPECT_EQ(serialize_rule(loaded), serialize_rule(b)) << b.meta.id;
    EXPECT_EQ(read_file(dir / rule_file_name(b)), serialize_rule(b)) << b.meta.id;
  }
}

TEST(Rules, DirectoryLoadingReportsBadFilesAndDuplicates) {
  auto dir = std::filesystem::temp_directory_path() / "pidlint-rules-test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "a.rule.json", serialize_rule(rule_vessel_level_instrument()));
  write_file(dir / "b.rule.json", serialize_rule(rule_vessel_level_instrument()));
  write_file(dir / "c.rule.json", "{ not json");
  write_file(dir / "ignored.json", "{}");
  auto lib = load_rule_directory(dir);
  EXPECT_EQ(lib.rules.size(), 1u);
  ASSERT_EQ(lib.failures.size(), 2u);
  EXPECT_THROW(load_rule_directory(dir / "missing"), Error);
  std::filesystem::remove_all(dir);
}
