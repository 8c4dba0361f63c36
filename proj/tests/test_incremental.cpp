#include <algorithm>
#include <random>

#include "capakb/errors.hpp"
#include "capakb/fixtures.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace capakb;
using namespace capakb::testutil;

namespace {

bool report_lists(const std::vector<Triple>& list, const Triple& t) {
  return std::find(list.begin(), list.end(), t) != list.end();
}

// Grabs the fixture text without the line asserting the held screwdriver.
std::string pepper_without_holding() {
  std::string text = fixtures::pepper_turtle();
  std::string line = "ex:pepper_hand a ex:Hand ;\n    ex:isHolding ex:screwdriver .";
  auto pos = text.find(line);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, line.size(), "ex:pepper_hand a ex:Hand .");
  return text;
}

}  // namespace

TEST_CASE("asserting the held screwdriver adds the screwing capability") {
  KnowledgeBase kb;
  REQUIRE_FALSE(has_errors(kb.load_ontology(pepper_without_holding())));
  REQUIRE_FALSE(has_errors(kb.load_rules(fixtures::pepper_rules())));
  REQUIRE_FALSE(has_errors(kb.compile_program()));
  kb.materialize();
  CHECK_FALSE(kb.store().contains(
      type_fact(kb, "pepper_capa", "ScrewingCapability")));

  auto report = kb.assert_fact(fact(kb, "pepper_hand", "isHolding", "screwdriver"));
  CHECK(report_lists(report.added,
                     type_fact(kb, "pepper_capa", "ScrewingCapability")));
  CHECK(report.removed.empty());
  CHECK(triple_set(kb.store()) == rebuild_result(kb));
  audit_provenance(kb);
}

TEST_CASE("asserting a present fact is an empty delta") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto report = kb.assert_fact(fact(kb, "pepper", "hasComponent", "artrack"));
  CHECK(report.added.empty());
  CHECK(report.removed.empty());

  // Asserting a derived fact upgrades its flag and reports no additions.
  Triple derived = fact(kb, "pepper", "hasComponent", "realsense");
  REQUIRE(kb.store().flag_of(derived) == TripleFlag::Derived);
  auto upgrade = kb.assert_fact(derived);
  CHECK(upgrade.added.empty());
  CHECK(kb.store().flag_of(derived) == TripleFlag::Asserted);
}

TEST_CASE("asserting an isolated fact reports just that fact") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  Triple isolated = fact(kb, "cube", "locatedOn", "table");
  auto report = kb.assert_fact(isolated);
  REQUIRE(report.added.size() == 1);
  CHECK(report.added[0] == isolated);
}

TEST_CASE("retracting the tracker cascades through both capabilities") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto report = kb.retract_fact(fact(kb, "pepper", "hasComponent", "artrack"));

  CHECK(report_lists(report.removed,
                     type_fact(kb, "pepper_capa", "ObjectLocalisationCapa")));
  CHECK(report_lists(report.removed,
                     type_fact(kb, "pepper_capa", "HandPointingCapa")));
  // The affordance does not depend on the tracker.
  CHECK(kb.store().contains(fact(kb, "pepper", "hasGraspingAffordance", "cube")));
  CHECK(kb.store().contains(type_fact(kb, "pepper_capa", "ScrewingCapability")));
  CHECK(triple_set(kb.store()) == rebuild_result(kb));
  audit_provenance(kb);
}

TEST_CASE("retract then re-assert restores the exact prior state") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto before_triples = kb.store().entries();
  std::size_t before_supports = kb.provenance().support_count();

  Triple target = fact(kb, "pepper", "hasComponent", "artrack");
  kb.retract_fact(target);
  kb.assert_fact(target);

  CHECK(kb.store().entries() == before_triples);
  CHECK(kb.provenance().support_count() == before_supports);
  audit_provenance(kb);
}

TEST_CASE("assert then retract of a new fact is a clean round trip") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto before_triples = kb.store().entries();
  std::size_t before_supports = kb.provenance().support_count();

  Triple f = fact(kb, "pepper", "hasComponent", "lidar");
  kb.assert_fact(f);
  kb.retract_fact(f);

  CHECK(kb.store().entries() == before_triples);
  CHECK(kb.provenance().support_count() == before_supports);
  audit_provenance(kb);
}

TEST_CASE("a redundant camera keeps the capability through rederivation") {
  // Two cameras: retracting one overdeletes the capability membership and
  // the rederive phase restores it, so it reports as rederived, not removed.
  KnowledgeBase kb;
  std::string extra =
      fixtures::pepper_turtle() +
      "\nex:webcam a ex:Camera .\nex:pepper ex:hasComponent ex:webcam .\n";
  REQUIRE_FALSE(has_errors(kb.load_ontology(extra)));
  REQUIRE_FALSE(has_errors(kb.load_rules(fixtures::pepper_rules())));
  REQUIRE_FALSE(has_errors(kb.compile_program()));
  kb.materialize();

  auto report = kb.retract_fact(fact(kb, "pepper_head", "hasComponent", "realsense"));
  Triple olc = type_fact(kb, "pepper_capa", "ObjectLocalisationCapa");
  CHECK(report_lists(report.rederived, olc));
  CHECK_FALSE(report_lists(report.removed, olc));
  CHECK(kb.store().contains(olc));
  CHECK(triple_set(kb.store()) == rebuild_result(kb));
  audit_provenance(kb);
}

TEST_CASE("retract errors and no-ops behave as documented") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();

  Triple derived = fact(kb, "pepper", "hasComponent", "realsense");
  REQUIRE(kb.store().flag_of(derived) == TripleFlag::Derived);
  CHECK_THROWS_WITH_AS(kb.retract_fact(derived),
                       doctest::Contains("cannot retract derived fact"),
                       KbError);

  auto noop = kb.retract_fact(fact(kb, "pepper", "hasComponent", "teapot"));
  CHECK(noop.added.empty());
  CHECK(noop.removed.empty());
  CHECK(noop.rederived.empty());
}

TEST_CASE("added and removed never overlap in a report") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto report = kb.retract_fact(fact(kb, "pepper_hand", "isHolding", "screwdriver"));
  for (const Triple& t : report.added)
    CHECK_FALSE(report_lists(report.removed, t));
  CHECK(report_lists(report.removed,
                     type_fact(kb, "pepper_capa", "ScrewingCapability")));
}

TEST_CASE("batch retract runs one maintenance cycle") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto report = kb.retract_all({fact(kb, "pepper", "hasComponent", "artrack"),
                                fact(kb, "pepper_hand", "isHolding", "screwdriver")});
  CHECK(report_lists(report.removed,
                     type_fact(kb, "pepper_capa", "ObjectLocalisationCapa")));
  CHECK(report_lists(report.removed,
                     type_fact(kb, "pepper_capa", "ScrewingCapability")));
  CHECK(triple_set(kb.store()) == rebuild_result(kb));
  audit_provenance(kb);
}

TEST_CASE("batch assert runs one delta cycle") {
  KnowledgeBase kb;
  REQUIRE_FALSE(has_errors(kb.load_ontology(pepper_without_holding())));
  REQUIRE_FALSE(has_errors(kb.load_rules(fixtures::pepper_rules())));
  REQUIRE_FALSE(has_errors(kb.compile_program()));
  kb.materialize();
  auto report = kb.assert_all({fact(kb, "pepper_hand", "isHolding", "screwdriver"),
                               fact(kb, "cube", "locatedOn", "table")});
  CHECK(report_lists(report.added,
                     type_fact(kb, "pepper_capa", "ScrewingCapability")));
  CHECK(triple_set(kb.store()) == rebuild_result(kb));
}

TEST_CASE("rebuild equals the incremental store and is stable") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  kb.retract_fact(fact(kb, "pepper", "hasComponent", "artrack"));
  kb.assert_fact(fact(kb, "pepper", "hasComponent", "webcam2"));

  KnowledgeBase clone = kb;
  auto stats1 = clone.rebuild();
  CHECK(triple_set(clone.store()) == triple_set(kb.store()));
  auto stats2 = clone.rebuild();
  CHECK(stats1.derived_count == stats2.derived_count);
}

TEST_CASE("rebuild of a never-materialized kb equals materialize") {
  KnowledgeBase a = fixtures::build_pepper();
  KnowledgeBase b = fixtures::build_pepper();
  a.rebuild();
  b.materialize();
  CHECK(triple_set(a.store()) == triple_set(b.store()));
}

TEST_CASE("maintenance law holds over random operation sequences") {
  std::mt19937_64 gen(2024);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    fixtures::RandomKbSpec spec;
    spec.individuals = 10;
    spec.seed = 500 + seed;
    auto generated = fixtures::generate_random(spec);

    KnowledgeBase kb;
    REQUIRE_FALSE(has_errors(kb.load_ontology(generated.ontology_ttl)));
    REQUIRE_FALSE(has_errors(kb.load_rules(generated.rules_text)));
    REQUIRE_FALSE(has_errors(kb.compile_program()));
    kb.materialize();

    std::vector<TermId> terms;
    for (int i = 0; i < spec.individuals; ++i)
      terms.push_back(kb.terms().intern_iri("http://example.org/rnd#i" +
                                            std::to_string(i)));
    std::vector<TermId> props;
    for (int p = 0; p < spec.properties; ++p)
      props.push_back(kb.terms().intern_iri("http://example.org/rnd#p" +
                                            std::to_string(p)));

    for (int step = 0; step < 25; ++step) {
      auto asserted = kb.store().triples_with_flag(TripleFlag::Asserted);
      if (gen() % 2 == 0 && !asserted.empty()) {
        kb.retract_fact(asserted[gen() % asserted.size()]);
      } else {
        Triple t{terms[gen() % terms.size()], props[gen() % props.size()],
                 terms[gen() % terms.size()]};
        kb.assert_fact(t);
      }
      CHECK(triple_set(kb.store()) == rebuild_result(kb));
      audit_provenance(kb);
    }
  }
}
