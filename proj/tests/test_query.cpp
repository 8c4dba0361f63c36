#include <functional>

#include "capakb/errors.hpp"
#include "capakb/fixtures.hpp"
#include "capakb/query.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace capakb;
using namespace capakb::testutil;

namespace {

QueryVocab pepper_vocab(KnowledgeBase& kb) {
  QueryVocab v;
  v.has_capability = pepper(kb, "hasCapability");
  v.capability_root = pepper(kb, "Capability");
  v.has_component = pepper(kb, "hasComponent");
  return v;
}

}  // namespace

TEST_CASE("capabilities_of reports the classified capability individual") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto report = capabilities_of(kb, pepper(kb, "pepper"), pepper_vocab(kb));

  REQUIRE(report.capability_individual.has_value());
  CHECK(*report.capability_individual == pepper(kb, "pepper_capa"));
  CHECK(report.capabilities.count(pepper(kb, "ObjectLocalisationCapa")));
  CHECK(report.capabilities.count(pepper(kb, "HandPointingCapa")));
  CHECK(report.capabilities.count(pepper(kb, "ScrewingCapability")));
  CHECK(report.components.count(pepper(kb, "realsense")));  // via transitivity
  CHECK(report.components.count(pepper(kb, "screwdriver")));
}

TEST_CASE("capabilities_of flags agents without a capability individual") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto report = capabilities_of(kb, pepper(kb, "cube"), pepper_vocab(kb));
  CHECK_FALSE(report.capability_individual.has_value());
  CHECK(report.capabilities.empty());
}

TEST_CASE("capabilities_of rejects multiple capability individuals") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  kb.assert_fact(fact(kb, "pepper", "hasCapability", "second_capa"));
  CHECK_THROWS_AS(capabilities_of(kb, pepper(kb, "pepper"), pepper_vocab(kb)),
                  KbError);
}

TEST_CASE("agent with components but no satisfied equivalence has none") {
  KnowledgeBase kb;
  std::string ttl = fixtures::pepper_turtle() +
                    "\nex:nao a ex:Agent ;\n"
                    "    ex:hasCapability ex:nao_capa ;\n"
                    "    ex:hasComponent ex:nao_head .\n";
  REQUIRE_FALSE(has_errors(kb.load_ontology(ttl)));
  REQUIRE_FALSE(has_errors(kb.load_rules(fixtures::pepper_rules())));
  REQUIRE_FALSE(has_errors(kb.compile_program()));
  kb.materialize();
  auto report = capabilities_of(kb, pepper(kb, "nao"), pepper_vocab(kb));
  REQUIRE(report.capability_individual.has_value());
  CHECK(report.capabilities.empty());
  CHECK(report.components.count(pepper(kb, "nao_head")));
}

TEST_CASE("instances_of answers type queries") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto cameras = instances_of(kb, pepper(kb, "Camera"));
  CHECK(cameras == std::set<TermId>{pepper(kb, "realsense")});
  CHECK(instances_of(kb, iri(kb, "http://ex.org/FreshClass")).empty());
  // Subclass propagation carries the capability individual to the root.
  auto caps = instances_of(kb, pepper(kb, "Capability"));
  CHECK(caps.count(pepper(kb, "pepper_capa")));
}

TEST_CASE("affordances_of reports rule-derived pairs") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  TermId grasp = pepper(kb, "hasGraspingAffordance");
  auto pairs = affordances_of(kb, pepper(kb, "pepper"), {grasp});
  CHECK(pairs == std::set<std::pair<TermId, TermId>>{
                     {grasp, pepper(kb, "cube")}});

  SUBCASE("two pickables yield both pairs") {
    kb.assert_fact(type_fact(kb, "ball", "Pickable"));
    auto two = affordances_of(kb, pepper(kb, "pepper"), {grasp});
    CHECK(two.size() == 2);
    CHECK(two.count({grasp, pepper(kb, "ball")}));
  }

  SUBCASE("no pickables, no pairs") {
    kb.retract_fact(type_fact(kb, "cube", "Pickable"));
    CHECK(affordances_of(kb, pepper(kb, "pepper"), {grasp}).empty());
  }
}

TEST_CASE("explain produces a leaf for asserted facts") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto node = explain(kb, fact(kb, "pepper", "hasComponent", "artrack"));
  CHECK(node.kind == DerivationNode::Kind::Asserted);
  CHECK(node.children.empty());
}

TEST_CASE("explain errors on absent facts") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  CHECK_THROWS_WITH_AS(explain(kb, fact(kb, "pepper", "hasComponent", "teapot")),
                       doctest::Contains("not in store"), KbError);
}

TEST_CASE("explain of the localisation membership roots at recognition") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto node =
      explain(kb, type_fact(kb, "pepper_capa", "ObjectLocalisationCapa"));
  CHECK(node.kind == DerivationNode::Kind::Derived);
  CHECK(node.rule == "recognize(ObjectLocalisationCapa)");

  // Leaves include the camera typing; chain edges expand via the chain rule.
  bool saw_camera_leaf = false;
  bool saw_chain_rule = false;
  std::function<void(const DerivationNode&)> walk =
      [&](const DerivationNode& n) {
        if (n.kind == DerivationNode::Kind::Asserted &&
            n.fact == type_fact(kb, "realsense", "Camera"))
          saw_camera_leaf = true;
        if (n.kind == DerivationNode::Kind::Derived &&
            n.rule == "chain(hasAvailableComponent)")
          saw_chain_rule = true;
        for (const auto& child : n.children) walk(child);
      };
  walk(node);
  CHECK(saw_camera_leaf);
  CHECK(saw_chain_rule);
}

TEST_CASE("explain of a three-hop transitive edge stacks the rule") {
  KnowledgeBase kb = load_kb(
      "@prefix ex: <http://ex.org/> .\n"
      "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
      "ex:p a owl:TransitiveProperty .\n"
      "ex:a ex:p ex:b .\n"
      "ex:b ex:p ex:c .\n"
      "ex:c ex:p ex:d .\n");
  Triple long_edge{iri(kb, "http://ex.org/a"), iri(kb, "http://ex.org/p"),
                   iri(kb, "http://ex.org/d")};
  REQUIRE(kb.store().contains(long_edge));
  auto node = explain(kb, long_edge);
  CHECK(node.rule == "transitive(p)");
  REQUIRE(node.children.size() == 2);
  // Height three: root, one internal transitive node, asserted leaves.
  const DerivationNode* internal = nullptr;
  for (const auto& child : node.children)
    if (child.kind == DerivationNode::Kind::Derived) internal = &child;
  REQUIRE(internal != nullptr);
  CHECK(internal->rule == "transitive(p)");
  for (const auto& leaf : internal->children)
    CHECK(leaf.kind == DerivationNode::Kind::Asserted);
}

TEST_CASE("explain truncates at the depth cap") {
  KnowledgeBase kb = load_kb(
      "@prefix ex: <http://ex.org/> .\n"
      "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
      "ex:p a owl:TransitiveProperty .\n"
      "ex:a ex:p ex:b .\n"
      "ex:b ex:p ex:c .\n"
      "ex:c ex:p ex:d .\n");
  Triple long_edge{iri(kb, "http://ex.org/a"), iri(kb, "http://ex.org/p"),
                   iri(kb, "http://ex.org/d")};
  auto node = explain(kb, long_edge, 1);
  CHECK(node.kind == DerivationNode::Kind::Derived);
  bool truncated = false;
  for (const auto& child : node.children)
    if (child.kind == DerivationNode::Kind::Truncated) truncated = true;
  CHECK(truncated);
}

TEST_CASE("derivation trees re-fire their rules exactly") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  // Every internal node's fact must follow from its children under the
  // named rule: check premise count and re-derive the head by position.
  std::function<void(const DerivationNode&)> walk =
      [&](const DerivationNode& n) {
        if (n.kind == DerivationNode::Kind::Derived) {
          const CompiledRule* rule = nullptr;
          for (const auto& r : kb.program().rules)
            if (r.name == n.rule) rule = &r;
          REQUIRE(rule != nullptr);
          REQUIRE(rule->body.size() == n.children.size());
          // Bind variables from children, then instantiate the head.
          std::vector<std::optional<TermId>> binds(rule->var_count);
          auto bind = [&](const PatternTerm& pt, TermId v) {
            if (!pt.is_var) {
              REQUIRE(pt.constant == v);
              return;
            }
            if (binds[pt.var])
              REQUIRE(*binds[pt.var] == v);
            else
              binds[pt.var] = v;
          };
          for (std::size_t i = 0; i < n.children.size(); ++i) {
            bind(rule->body[i].s, n.children[i].fact.s);
            bind(rule->body[i].p, n.children[i].fact.p);
            bind(rule->body[i].o, n.children[i].fact.o);
          }
          auto value = [&](const PatternTerm& pt) {
            return pt.is_var ? *binds[pt.var] : pt.constant;
          };
          CHECK(value(rule->head.s) == n.fact.s);
          CHECK(value(rule->head.p) == n.fact.p);
          CHECK(value(rule->head.o) == n.fact.o);
        }
        for (const auto& child : n.children) walk(child);
      };
  walk(explain(kb, type_fact(kb, "pepper_capa", "HandPointingCapa")));
  walk(explain(kb, fact(kb, "pepper", "hasGraspingAffordance", "cube")));
}

TEST_CASE("dot export is deterministic and marks derived edges dashed") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  std::string dot = export_dot(kb);
  CHECK(dot == export_dot(kb));
  CHECK(dot.find("\"ex:pepper\" -> \"ex:realsense\" [label=\"hasComponent\", "
                 "style=dashed]") != std::string::npos);
  CHECK(dot.find("\"ex:realsense\" -> \"ex:Camera\" [label=\"isA\", "
                 "style=solid]") != std::string::npos);
  CHECK(dot.find("\"ex:Camera\" [shape=box]") != std::string::npos);
  CHECK(dot.find("\"ex:pepper\" [shape=ellipse]") != std::string::npos);
  // Structure nodes never leak into the graph.
  CHECK(dot.find("bnode") == std::string::npos);
  CHECK(dot.find("owl:") == std::string::npos);
}

TEST_CASE("dot export of an empty kb is the bare digraph") {
  KnowledgeBase kb;
  REQUIRE_FALSE(has_errors(kb.compile_program()));
  kb.materialize();
  std::string dot = export_dot(kb);
  CHECK(dot == "// capability knowledge base export\ndigraph capakb {}\n");
}

TEST_CASE("dot export focus restricts to the neighborhood") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  DotOptions opts;
  opts.focus = pepper(kb, "pepper_capa");
  opts.depth = 1;
  std::string dot = export_dot(kb, opts);
  CHECK(dot.find("hasAvailableComponent") != std::string::npos);
  CHECK(dot.find("ex:cube") == std::string::npos);  // unrelated individual

  SUBCASE("hiding derived edges leaves the asserted core") {
    DotOptions hide;
    hide.show_derived = false;
    std::string plain = export_dot(kb, hide);
    CHECK(plain.find("style=dashed") == std::string::npos);
    CHECK(plain.find("\"ex:pepper\" -> \"ex:pepper_head\"") != std::string::npos);
  }
}
