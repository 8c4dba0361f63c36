#include <random>

#include "capakb/errors.hpp"
#include "capakb/fixtures.hpp"
#include "capakb/reasoner.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace capakb;
using namespace capakb::testutil;

TEST_CASE("pepper materialization classifies the capability individual") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  CHECK(kb.store().contains(
      type_fact(kb, "pepper_capa", "ObjectLocalisationCapa")));
  CHECK(kb.store().contains(type_fact(kb, "pepper_capa", "ScrewingCapability")));
  CHECK(kb.store().contains(type_fact(kb, "pepper_capa", "HandPointingCapa")));
  CHECK(kb.store().contains(
      fact(kb, "pepper", "hasGraspingAffordance", "cube")));
  // Inferred, not asserted.
  CHECK(kb.store().flag_of(type_fact(kb, "pepper_capa", "ScrewingCapability")) ==
        TripleFlag::Derived);
}

TEST_CASE("pepper components are closed under transitivity") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto components = kb.store().match(TriplePattern{
      pepper(kb, "pepper"), pepper(kb, "hasComponent"), std::nullopt});
  std::set<TermId> got;
  for (const Triple& t : components) got.insert(t.o);
  std::set<TermId> expected = {
      pepper(kb, "pepper_head"),    pepper(kb, "realsense"),
      pepper(kb, "artrack"),        pepper(kb, "pepper_rightarm"),
      pepper(kb, "pepper_hand"),    pepper(kb, "screwdriver"),
  };
  CHECK(got == expected);
  CHECK(kb.store().flag_of(fact(kb, "pepper", "hasComponent", "realsense")) ==
        TripleFlag::Derived);
}

TEST_CASE("chain without isCapabilityOf facts derives nothing") {
  KnowledgeBase kb = load_kb(
      "@prefix ex: <http://ex.org/> .\n"
      "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
      "ex:hAC owl:propertyChainAxiom ( ex:isCapabilityOf ex:hasComponent ) .\n"
      "ex:a ex:hasComponent ex:b .\n"
      "ex:b ex:hasComponent ex:c .\n");
  CHECK(kb.store()
            .match(TriplePattern{std::nullopt, iri(kb, "http://ex.org/hAC"),
                                 std::nullopt})
            .empty());
}

TEST_CASE("single fact with empty program derives nothing") {
  KnowledgeBase kb = load_kb(
      "@prefix ex: <http://ex.org/> .\n"
      "ex:a ex:p ex:b .\n");
  CHECK(kb.store().derived_count() == 0);
  CHECK(kb.store().size() == 1);
}

TEST_CASE("materialize is idempotent and the second run is one round") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  auto before = triple_set(kb.store());
  std::size_t derived_before = kb.store().derived_count();
  KnowledgeBase copy = kb;
  auto stats = copy.materialize();
  CHECK(stats.iterations == 1);
  CHECK(copy.store().derived_count() == derived_before);
  CHECK(triple_set(copy.store()) == before);
}

TEST_CASE("iteration cap aborts with a diagnostic error") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.engine_options().iteration_cap = 1;
  CHECK_THROWS_AS(kb.materialize(), IterationLimitError);
}

TEST_CASE("semi-naive equals naive fixpoint on random kbs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    fixtures::RandomKbSpec spec;
    spec.individuals = 12;
    spec.seed = seed;
    auto generated = fixtures::generate_random(spec);

    KnowledgeBase kb;
    REQUIRE_FALSE(has_errors(kb.load_ontology(generated.ontology_ttl)));
    REQUIRE_FALSE(has_errors(kb.load_rules(generated.rules_text)));
    REQUIRE_FALSE(has_errors(kb.compile_program()));
    TripleStore base = kb.store();
    kb.materialize();
    CHECK(triple_set(kb.store()) == naive_result(base, kb.program()));
  }
}

TEST_CASE("transitive closure equals the BFS oracle on random digraphs") {
  std::mt19937_64 gen(123);
  for (int trial = 0; trial < 30; ++trial) {
    KnowledgeBase kb;
    TermId p = iri(kb, "http://ex.org/p");
    kb.add_axiom(TransitivePropertyAxiom{p});
    int nodes = 4 + int(gen() % 27);
    std::vector<TermId> ids;
    for (int i = 0; i < nodes; ++i)
      ids.push_back(iri(kb, "http://ex.org/n" + std::to_string(i)));
    std::vector<std::pair<TermId, TermId>> edges;
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j) {
        if (i == j) continue;
        if (gen() % 100 < 12) {
          edges.emplace_back(ids[i], ids[j]);
          kb.add_fact(Triple{ids[i], p, ids[j]});
        }
      }
    REQUIRE_FALSE(has_errors(kb.compile_program()));
    kb.materialize();

    auto closure = fixtures::bfs_closure_oracle(edges);
    std::set<std::pair<TermId, TermId>> asserted(edges.begin(), edges.end());
    std::set<std::pair<TermId, TermId>> derived;
    for (const Triple& t :
         kb.store().match(TriplePattern{std::nullopt, p, std::nullopt}))
      if (kb.store().flag_of(t) == TripleFlag::Derived)
        derived.emplace(t.s, t.o);

    std::set<std::pair<TermId, TermId>> expected;
    for (const auto& e : closure)
      if (!asserted.count(e)) expected.insert(e);
    CHECK(derived == expected);
  }
}

TEST_CASE("monotonicity: a larger asserted base derives a superset") {
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    fixtures::RandomKbSpec spec;
    spec.individuals = 10;
    spec.seed = seed;
    auto generated = fixtures::generate_random(spec);

    KnowledgeBase big;
    REQUIRE_FALSE(has_errors(big.load_ontology(generated.ontology_ttl)));
    REQUIRE_FALSE(has_errors(big.load_rules(generated.rules_text)));
    REQUIRE_FALSE(has_errors(big.compile_program()));

    // Same program over a deterministic half of the asserted facts.
    TripleStore small_base;
    std::mt19937_64 gen(seed);
    for (const Triple& t : big.store().triples())
      if (gen() % 2 == 0) small_base.insert(t, TripleFlag::Asserted);
    ProvenanceIndex scratch;
    naive_fixpoint(small_base, big.program(), scratch);

    big.materialize();
    auto small_set = triple_set(small_base);
    auto big_set = triple_set(big.store());
    CHECK(std::includes(big_set.begin(), big_set.end(), small_set.begin(),
                        small_set.end()));
  }
}

TEST_CASE("recognition soundness: derived members satisfy the expression") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  for (const Axiom& axiom : kb.axioms()) {
    const auto* eq = std::get_if<EquivalentToAxiom>(&axiom);
    if (!eq) continue;
    for (const Triple& t : kb.store().match(
             TriplePattern{std::nullopt, kb.vocab().rdf_type, eq->cls})) {
      CHECK(check_instance(kb.store(), t.s, eq->expr, kb.vocab().rdf_type));
    }
  }
}

TEST_CASE("chain witness: every derived chain edge has matching premises") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  TermId hac = pepper(kb, "hasAvailableComponent");
  TermId ico = pepper(kb, "isCapabilityOf");
  TermId hc = pepper(kb, "hasComponent");
  auto chain_edges =
      kb.store().match(TriplePattern{std::nullopt, hac, std::nullopt});
  CHECK_FALSE(chain_edges.empty());
  for (const Triple& edge : chain_edges) {
    bool witnessed = false;
    for (auto sid : kb.provenance().supports_of(edge)) {
      const Support& s = kb.provenance().get(sid);
      if (s.premises.size() != 2) continue;
      if (s.premises[0].p == ico && s.premises[1].p == hc &&
          s.premises[0].s == edge.s && s.premises[1].o == edge.o &&
          s.premises[0].o == s.premises[1].s)
        witnessed = true;
    }
    CHECK(witnessed);
  }
}

TEST_CASE("check_instance evaluates expressions directly") {
  KnowledgeBase kb = fixtures::build_pepper();
  kb.materialize();
  TermId capa = pepper(kb, "pepper_capa");
  TermId hac = pepper(kb, "hasAvailableComponent");

  ClassExpression olc_expr = ClassExpression::intersection_of(
      {ClassExpression::some(hac, pepper(kb, "Camera")),
       ClassExpression::some(hac, pepper(kb, "ObjectTracker"))});
  CHECK(check_instance(kb.store(), capa, olc_expr, kb.vocab().rdf_type));

  // Any individual satisfies its own asserted class.
  CHECK(check_instance(kb.store(), pepper(kb, "realsense"),
                       ClassExpression::named_class(pepper(kb, "Camera")),
                       kb.vocab().rdf_type));

  // No property edges, no existential.
  CHECK_FALSE(check_instance(kb.store(), pepper(kb, "cube"),
                             ClassExpression::some(hac, pepper(kb, "Camera")),
                             kb.vocab().rdf_type));
}

TEST_CASE("membership via recognition implies named conjuncts after fixpoint") {
  // C equivalent to (A and some p.F): landing in C also lands in A, both for
  // recognized and for asserted members.
  KnowledgeBase kb;
  TermId a = iri(kb, "http://ex.org/A");
  TermId c = iri(kb, "http://ex.org/C");
  TermId f = iri(kb, "http://ex.org/F");
  TermId p = iri(kb, "http://ex.org/p");
  TermId x = iri(kb, "http://ex.org/x");
  TermId y = iri(kb, "http://ex.org/y");
  TermId w = iri(kb, "http://ex.org/w");
  kb.add_axiom(EquivalentToAxiom{
      c, ClassExpression::intersection_of({ClassExpression::named_class(a),
                                           ClassExpression::some(p, f)})});
  kb.add_fact(Triple{x, kb.vocab().rdf_type, a});
  kb.add_fact(Triple{x, p, y});
  kb.add_fact(Triple{y, kb.vocab().rdf_type, f});
  kb.add_fact(Triple{w, kb.vocab().rdf_type, c});
  REQUIRE_FALSE(has_errors(kb.compile_program()));
  kb.materialize();
  CHECK(kb.store().contains(Triple{x, kb.vocab().rdf_type, c}));
  CHECK(kb.store().contains(Triple{w, kb.vocab().rdf_type, a}));
}

TEST_CASE("materialization stats are reproducible") {
  KnowledgeBase a = fixtures::build_pepper();
  KnowledgeBase b = fixtures::build_pepper();
  auto sa = a.materialize();
  auto sb = b.materialize();
  CHECK(sa.iterations == sb.iterations);
  CHECK(sa.derived_count == sb.derived_count);
  CHECK(sa.rule_fire_counts == sb.rule_fire_counts);
}
