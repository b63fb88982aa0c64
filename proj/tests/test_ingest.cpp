#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace pidlint;
using namespace testing_support;

namespace {

std::string location_of(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const ParseError& e) {
    return e.location();
  }
  return "<parsed>";
}

const char* kMinimal = R"({
  "formatVersion": "1",
  "nodes": [
    {"id": "A", "class": "Vessel"},
    {"id": "B", "class": "GateValve", "tag": "HV1", "attributes": {"dn": 80, "open": true}}
  ],
  "edges": [
    {"id": "L1", "source": "A", "target": "B", "kind": "pipe", "attributes": {"medium": "water"}}
  ]
})";

}  // namespace

TEST(Ingest, ParsesMinimalGraph) {
  PidGraph g = parse_graph(kMinimal);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.node("B").tag, "HV1");
  EXPECT_EQ(std::get<std::int64_t>(g.node("B").attributes.at("dn")), 80);
  EXPECT_EQ(std::get<bool>(g.node("B").attributes.at("open")), true);
  EXPECT_EQ(std::get<std::string>(g.edge("L1").attributes.at("medium")), "water");
}

TEST(Ingest, GraphRoundTripIsStructuralAndCanonical) {
  PidGraph g = build_case_study_fixture();
  std::string text = serialize_graph(g);
  PidGraph back = parse_graph(text);
  EXPECT_TRUE(back == g);
  EXPECT_EQ(serialize_graph(back), text);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Ingest, RoundTripPreservesValueKinds) {
  PidGraph g;
  add(g, "A", "Vessel",
      {{"i", Value{std::int64_t{-7}}},
       {"d", Value{2.0}},
       {"f", Value{0.1}},
       {"b", Value{false}},
       {"s", Value{std::string("ü \"quoted\"")}}});
  PidGraph back = parse_graph(serialize_graph(g));
  EXPECT_TRUE(back == g);
  // 2.0 stays a double, it does not collapse to an integer.
  EXPECT_TRUE(std::holds_alternative<double>(back.node("A").attributes.at("d")));
}

TEST(Ingest, ErrorsCarryJsonPaths) {
  EXPECT_EQ(location_of("{"), "$");
  EXPECT_EQ(location_of("[]"), "$");
  EXPECT_EQ(location_of(R"({"formatVersion":"2","nodes":[],"edges":[]})"), "$.formatVersion");
  EXPECT_EQ(location_of(R"({"formatVersion":"1","edges":[]})"), "$.nodes");
  EXPECT_EQ(location_of(R"({"formatVersion":"1","nodes":[{"id":"A","class":"Rocket"}],"edges":[]})"),
            "$.nodes[0].class");
  EXPECT_EQ(location_of(R"({"formatVersion":"1","nodes":[{"id":"A","class":"Vessel"},{"id":"A","class":"Vessel"}],"edges":[]})"),
            "$.nodes[1].id");
  EXPECT_EQ(location_of(R"({"formatVersion":"1","nodes":[{"id":"A","class":"Vessel"}],
      "edges":[{"id":"L","source":"A","target":"Q","kind":"pipe"}]})"),
            "$.edges[0].target");
  EXPECT_EQ(location_of(R"({"formatVersion":"1","nodes":[{"id":"A","class":"Vessel"}],
      "edges":[{"id":"L","source":"A","target":"A","kind":"steam"}]})"),
            "$.edges[0].kind");
  EXPECT_EQ(location_of(R"({"formatVersion":"1","nodes":[{"id":"A","class":"Vessel","attributes":{"x":[1]}}],"edges":[]})"),
            "$.nodes[0].attributes.x");
}

TEST(Ingest, UnknownTopLevelFieldsWarn) {
  std::vector<std::string> warnings;
  parse_graph(R"({"formatVersion":"1","nodes":[],"edges":[],"layout":{}})", builtin_taxonomy(),
              &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("layout"), std::string::npos);
}

TEST(Ingest, RuleRoundTripForEveryBuiltin) {
  for (const auto& r : builtin_rules()) {
    std::string text = serialize_rule(r);
    RuleGraph back = load_rule(text);
    EXPECT_EQ(serialize_rule(back), text) << r.meta.id;
    EXPECT_EQ(erroneous_pattern(back), erroneous_pattern(r));
    EXPECT_EQ(corrected_pattern(back), corrected_pattern(r));
    EXPECT_EQ(back.meta.order, r.meta.order);
    for (std::size_t i = 0; i < r.edges.size(); ++i) {
      EXPECT_EQ(back.edges[i].copy_attributes_from, r.edges[i].copy_attributes_from);
      EXPECT_EQ(back.edges[i].action, r.edges[i].action);
    }
  }
}

TEST(Ingest, InvalidRuleReportsLocatedViolation) {
  Json j = rule_to_json(rule_pump_suction_strainer());
  j["pattern"]["nodes"][2]["class"] = "Unobtainium";
  try {
    rule_from_json(j);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location(), "$.pattern.nodes[2]");
  }
  Json k = rule_to_json(rule_large_globe_valve());
  k["pattern"]["edges"][0]["conditions"][0]["operator"] = "approximately";
  EXPECT_THROW(rule_from_json(k), ParseError);
}

TEST(Ingest, TaxonomyRoundTrip) {
  Taxonomy t = parse_taxonomy(serialize_taxonomy(*builtin_taxonomy()));
  EXPECT_EQ(t.size(), builtin_taxonomy()->size());
  EXPECT_TRUE(t.is_subclass("GateValve", "Valve"));
}

// Mutated inputs either parse or raise ParseError; nothing else escapes.
TEST(Ingest, FuzzedGraphsNeverCrash) {
  const std::string seed = serialize_graph(build_case_study_fixture());
  std::mt19937 rng(99);
  const std::string alphabet = "{}[]\",:0123456789-.eE truefalsnul\\u\x01\xff";
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string s = seed;
    int edits = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < edits && !s.empty(); ++k) {
      std::size_t pos = rng() % s.size();
      switch (rng() % 4) {
        case 0: s[pos] = alphabet[rng() % alphabet.size()]; break;
        case 1: s.erase(pos, 1 + rng() % 20); break;
        case 2: s.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        case 3: s.resize(pos); break;
      }
    }
    try {
      PidGraph g = parse_graph(s);
      EXPECT_TRUE(g.validate().empty());
      ++parsed;
    } catch (const ParseError&) {
      ++rejected;
    } catch (const std::exception& e) {
      FAIL() << "unexpected exception: " << e.what();
    }
  }
  EXPECT_GT(rejected, 0);
  EXPECT_GT(parsed, 0);
}

TEST(Ingest, FuzzedRulesNeverCrash) {
  const std::string seed = serialize_rule(rule_pump_isolation());
  std::mt19937 rng(4242);
  for (int i = 0; i < 2000; ++i) {
    std::string s = seed;
    for (int k = 0; k < 3; ++k) {
      std::size_t pos = rng() % s.size();
      if (rng() % 2) {
        s[pos] = static_cast<char>(32 + rng() % 95);
      } else {
        s.erase(pos, 1 + rng() % 8);
      }
    }
    try {
      load_rule(s);
    } catch (const ParseError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected exception: " << e.what();
    }
  }
}

TEST(Ingest, StructurallyRandomJsonNeverCrashes) {
  std::mt19937 rng(5);
  std::function<Json(int)> gen = [&](int depth) -> Json {
    switch (depth > 3 ? rng() % 4 : rng() % 6) {
      case 0: return Json(static_cast<std::int64_t>(rng()) - (1ll << 31));
      case 1: return Json("x" + std::to_string(rng() % 3));
      case 2: return Json(rng() % 2 == 0);
      case 3: return Json(nullptr);
      case 4: {
        Json a = Json::array();
        for (int i = 0, n = rng() % 4; i < n; ++i) a.push_back(gen(depth + 1));
        return a;
      }
      default: {
        static const char* keys[] = {"id", "class", "source", "target", "kind", "nodes",
                                     "edges", "attributes", "formatVersion", "tag"};
        Json o = Json::object();
        for (int i = 0, n = rng() % 5; i < n; ++i) o[keys[rng() % 10]] = gen(depth + 1);
        return o;
      }
    }
  };
  for (int i = 0; i < 3000; ++i) {
    Json j = gen(0);
    if (rng() % 2 && j.is_object()) {
      j["formatVersion"] = "1";
      j["nodes"] = Json::array({gen(1), gen(1)});
      j["edges"] = Json::array({gen(1)});
    }
    try {
      graph_from_json(j);
    } catch (const ParseError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected exception: " << e.what() << " on " << j.dump();
    }
  }
}
