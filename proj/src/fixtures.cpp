#include "capakb/fixtures.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "capakb/errors.hpp"

namespace capakb::fixtures {

namespace {

const std::string kPepperTurtle = R"(@prefix ex: <http://example.org/capa#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .

# Properties. Ownership is transitive; carrying something counts as owning
# it; the chain property links a capability individual to everything the
# agent owns.

ex:hasComponent a owl:TransitiveProperty .
ex:isHolding rdfs:subPropertyOf ex:hasComponent .
ex:hasCapability owl:inverseOf ex:isCapabilityOf .
ex:hasAvailableComponent owl:propertyChainAxiom ( ex:isCapabilityOf ex:hasComponent ) .

# Capability hierarchy.

ex:Communication rdfs:subClassOf ex:Capability .
ex:Perception rdfs:subClassOf ex:Capability .
ex:Navigation rdfs:subClassOf ex:Capability .
ex:ObjectManipulation rdfs:subClassOf ex:Capability .

ex:HumanFaceDetection rdfs:subClassOf ex:Perception .
ex:HumanLocalisation rdfs:subClassOf ex:Perception .
ex:BodyJointsDetection rdfs:subClassOf ex:Perception .

ex:ObjectLocalisationCapa rdfs:subClassOf ex:Perception .
ex:HandPointingCapa rdfs:subClassOf ex:Communication .
ex:ScrewingCapability rdfs:subClassOf ex:ObjectManipulation .
ex:MoveObjectViaGrasping rdfs:subClassOf ex:ObjectManipulation .

# Capability definitions: a capability class is equivalent to having the
# right set of components available.

ex:ObjectLocalisationCapa owl:equivalentClass [
    owl:intersectionOf (
        [ a owl:Restriction ; owl:onProperty ex:hasAvailableComponent ; owl:someValuesFrom ex:Camera ]
        [ a owl:Restriction ; owl:onProperty ex:hasAvailableComponent ; owl:someValuesFrom ex:ObjectTracker ]
    )
] .

ex:HandPointingCapa owl:equivalentClass [
    owl:intersectionOf (
        ex:ObjectLocalisationCapa
        [ a owl:Restriction ; owl:onProperty ex:hasAvailableComponent ; owl:someValuesFrom ex:Hand ]
    )
] .

ex:ScrewingCapability owl:equivalentClass [
    a owl:Restriction ; owl:onProperty ex:hasAvailableComponent ; owl:someValuesFrom ex:Screwdriver
] .

# A gripper-based definition would derive the grasping capability instead of
# asserting it; enable once a gripper component exists in the description.
# ex:MoveObjectViaGrasping owl:equivalentClass [
#     a owl:Restriction ; owl:onProperty ex:hasAvailableComponent ; owl:someValuesFrom ex:Gripper
# ] .

# The robot, its parts, and the things around it.

ex:pepper a ex:Agent ;
    ex:hasCapability ex:pepper_capa ;
    ex:hasComponent ex:pepper_head , ex:artrack , ex:pepper_rightarm .

ex:pepper_head ex:hasComponent ex:realsense .
ex:pepper_rightarm ex:hasComponent ex:pepper_hand .

ex:pepper_hand a ex:Hand ;
    ex:isHolding ex:screwdriver .

ex:realsense a ex:Camera .
ex:artrack a ex:ObjectTracker .
ex:screwdriver a ex:Screwdriver .
ex:cube a ex:Pickable .

ex:pepper_capa a ex:MoveObjectViaGrasping .
)";

const std::string kPepperRules = R"(@prefix ex: <http://example.org/capa#> .

rule "grasping": ex:Agent(?a), ex:MoveObjectViaGrasping(?m), ex:hasCapability(?a,?m), ex:Pickable(?p) -> ex:hasGraspingAffordance(?a,?p) .
)";

}  // namespace

const std::string& pepper_turtle() { return kPepperTurtle; }
const std::string& pepper_rules() { return kPepperRules; }

std::string pepper_iri(const std::string& local) {
  return std::string(kPepperNs) + local;
}

KnowledgeBase build_pepper() {
  KnowledgeBase kb;
  auto check = [](const std::vector<Diagnostic>& diags, const char* what) {
    for (const auto& d : diags)
      throw KbError(std::string("pepper fixture ") + what +
                    " did not load cleanly: " + format_diagnostic(d));
  };
  check(kb.load_ontology(pepper_turtle()), "ontology");
  check(kb.load_rules(pepper_rules()), "rules");
  check(kb.compile_program(), "program");
  return kb;
}

// --- random knowledge bases --------------------------------------------------

GeneratedKb generate_random(const RandomKbSpec& spec) {
  std::mt19937_64 gen(spec.seed * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL);
  auto pick = [&](int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(std::max(1, n))); };
  auto chance = [&](double p) {
    return (gen() % 1000000ULL) < static_cast<std::uint64_t>(p * 1000000.0);
  };
  auto ind = [](int k) { return "ex:i" + std::to_string(k); };
  auto cls = [](int k) { return "ex:C" + std::to_string(k); };
  auto prop = [](int k) { return "ex:p" + std::to_string(k); };

  std::ostringstream ttl;
  ttl << "@prefix ex: <http://example.org/rnd#> .\n";
  ttl << "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n";
  ttl << "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\n";

  for (int k = 0; k < spec.transitive_axioms; ++k)
    ttl << prop(pick(spec.properties)) << " a owl:TransitiveProperty .\n";
  for (int k = 0; k < spec.inverse_axioms; ++k) {
    int p = pick(spec.properties);
    int q = pick(spec.properties);
    if (p == q) q = (q + 1) % std::max(1, spec.properties);
    ttl << prop(p) << " owl:inverseOf " << prop(q) << " .\n";
  }
  for (int k = 0; k < spec.subproperty_axioms; ++k) {
    int p = pick(spec.properties);
    int q = pick(spec.properties);
    if (p == q) q = (q + 1) % std::max(1, spec.properties);
    ttl << prop(p) << " rdfs:subPropertyOf " << prop(q) << " .\n";
  }
  for (int k = 0; k < spec.chain_axioms; ++k) {
    int a = pick(spec.properties);
    int b = pick(spec.properties);
    int implied = -1;
    for (int c = 0; c < spec.properties; ++c)
      if (c != a && c != b) implied = c;
    std::string implied_name =
        implied >= 0 ? prop(implied) : "ex:chained" + std::to_string(k);
    ttl << implied_name << " owl:propertyChainAxiom ( " << prop(a) << " "
        << prop(b) << " ) .\n";
  }
  for (int k = 0; k < spec.subclass_axioms; ++k) {
    int a = pick(spec.classes);
    int b = pick(spec.classes);
    if (a == b) b = (b + 1) % std::max(1, spec.classes);
    ttl << cls(a) << " rdfs:subClassOf " << cls(b) << " .\n";
  }
  for (int k = 0; k < spec.equivalence_axioms; ++k) {
    int c = pick(spec.classes);
    auto restriction = [&]() {
      return "[ a owl:Restriction ; owl:onProperty " + prop(pick(spec.properties)) +
             " ; owl:someValuesFrom " + cls(pick(spec.classes)) + " ]";
    };
    if (pick(3) == 0) {
      ttl << cls(c) << " owl:equivalentClass " << restriction() << " .\n";
    } else {
      std::string first = pick(2) == 0 ? cls(pick(spec.classes)) : restriction();
      std::string second = pick(2) == 0 ? cls(pick(spec.classes)) : restriction();
      ttl << cls(c) << " owl:equivalentClass [ owl:intersectionOf ( " << first
          << " " << second << " ) ] .\n";
    }
  }

  ttl << "\n";
  for (int i = 0; i < spec.individuals; ++i) {
    int types = 1 + pick(2);
    for (int k = 0; k < types; ++k)
      ttl << ind(i) << " a " << cls(pick(spec.classes)) << " .\n";
  }
  for (int p = 0; p < spec.properties; ++p) {
    for (int i = 0; i < spec.individuals; ++i) {
      for (int j = 0; j < spec.individuals; ++j) {
        if (i == j) continue;
        if (chance(spec.edge_density))
          ttl << ind(i) << " " << prop(p) << " " << ind(j) << " .\n";
      }
    }
  }

  std::ostringstream rules;
  rules << "@prefix ex: <http://example.org/rnd#> .\n\n";
  for (int k = 0; k < spec.user_rules; ++k) {
    rules << "rule \"gen-" << k << "\": " << cls(pick(spec.classes))
          << "(?x), " << prop(pick(spec.properties)) << "(?x,?y)";
    if (pick(2) == 0) rules << ", " << cls(pick(spec.classes)) << "(?y)";
    rules << " -> ";
    if (pick(2) == 0)
      rules << prop(pick(spec.properties)) << "(?x,?y)";
    else
      rules << cls(pick(spec.classes)) << "(?x)";
    rules << " .\n";
  }

  return GeneratedKb{ttl.str(), rules.str()};
}

std::set<std::pair<TermId, TermId>> bfs_closure_oracle(
    const std::vector<std::pair<TermId, TermId>>& edges) {
  std::map<TermId, std::vector<TermId>> adjacency;
  std::set<TermId> nodes;
  for (const auto& [from, to] : edges) {
    adjacency[from].push_back(to);
    nodes.insert(from);
    nodes.insert(to);
  }
  std::set<std::pair<TermId, TermId>> closure;
  for (TermId start : nodes) {
    std::deque<TermId> queue;
    std::set<TermId> reached;
    // Seed with successors so the node itself is reached only via a cycle.
    for (TermId next : adjacency[start])
      if (reached.insert(next).second) queue.push_back(next);
    while (!queue.empty()) {
      TermId at = queue.front();
      queue.pop_front();
      closure.emplace(start, at);
      for (TermId next : adjacency[at])
        if (reached.insert(next).second) queue.push_back(next);
    }
  }
  return closure;
}

KnowledgeBase build_component_forest(std::size_t edge_count, int max_depth,
                                     int equivalence_count,
                                     std::uint64_t seed) {
  KnowledgeBase kb;
  TermInterner& terms = kb.terms();
  const std::string ns = "http://example.org/forest#";

  TermId has_component = terms.intern_iri(ns + "hasComponent");
  TermId has_capability = terms.intern_iri(ns + "hasCapability");
  TermId is_capability_of = terms.intern_iri(ns + "isCapabilityOf");
  TermId has_available = terms.intern_iri(ns + "hasAvailableComponent");

  kb.add_axiom(TransitivePropertyAxiom{has_component});
  kb.add_axiom(InversePropertiesAxiom{has_capability, is_capability_of});
  kb.add_axiom(
      PropertyChainAxiom{{is_capability_of, has_component}, has_available});

  std::vector<TermId> part_classes;
  for (int k = 0; k < std::max(1, equivalence_count); ++k)
    part_classes.push_back(terms.intern_iri(ns + "Part" + std::to_string(k)));
  for (int k = 0; k < equivalence_count; ++k) {
    TermId capa_class = terms.intern_iri(ns + "Capa" + std::to_string(k));
    if (k % 2 == 0) {
      kb.add_axiom(EquivalentToAxiom{
          capa_class, ClassExpression::some(has_available, part_classes[k])});
    } else {
      kb.add_axiom(EquivalentToAxiom{
          capa_class,
          ClassExpression::intersection_of(
              {ClassExpression::some(has_available, part_classes[k]),
               ClassExpression::some(has_available,
                                     part_classes[(k + 1) % part_classes.size()])})});
    }
  }

  std::mt19937_64 gen(seed ^ 0xD1B54A32D192ED03ULL);
  auto pick = [&](std::size_t n) {
    return static_cast<std::size_t>(gen() % std::max<std::size_t>(1, n));
  };

  std::size_t node_counter = 0;
  std::size_t agent_counter = 0;
  std::size_t edges_added = 0;
  while (edges_added < edge_count) {
    std::size_t r = agent_counter++;
    TermId agent = terms.intern_iri(ns + "agent" + std::to_string(r));
    TermId capa = terms.intern_iri(ns + "capa" + std::to_string(r));
    kb.add_fact(Triple{agent, has_capability, capa});

    std::vector<std::pair<TermId, int>> eligible{{agent, 0}};
    std::size_t tree_budget =
        std::min<std::size_t>(edge_count - edges_added, 80 + pick(160));
    for (std::size_t k = 0; k < tree_budget; ++k) {
      auto [parent, depth] = eligible[pick(eligible.size())];
      if (depth >= max_depth) continue;
      TermId child =
          terms.intern_iri(ns + "n" + std::to_string(node_counter++));
      kb.add_fact(Triple{parent, has_component, child});
      ++edges_added;
      eligible.emplace_back(child, depth + 1);
      if (pick(10) == 0)
        kb.add_fact(Triple{child, kb.vocab().rdf_type,
                           part_classes[pick(part_classes.size())]});
    }
  }

  auto diags = kb.compile_program();
  if (has_errors(diags)) throw KbError("forest fixture failed to compile");
  return kb;
}

}  // namespace capakb::fixtures
