#pragma once
// The Pepper demo ontology shipped with the project, plus random
// knowledge-base generators and independent oracles for property tests.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "capakb/kb.hpp"

namespace capakb::fixtures {

// Canonical fixture sources. The committed fixtures/pepper.ttl and
// fixtures/pepper.rules files carry exactly these bytes.
const std::string& pepper_turtle();
const std::string& pepper_rules();

// Loads and compiles the Pepper fixture (not yet materialized).
// Throws KbError if the fixture does not load cleanly.
KnowledgeBase build_pepper();

// Fixture IRIs used by tests and as CLI defaults.
inline constexpr const char* kPepperNs = "http://example.org/capa#";
std::string pepper_iri(const std::string& local);

struct RandomKbSpec {
  int individuals = 20;
  int classes = 6;
  int properties = 4;
  double edge_density = 0.05;
  int subclass_axioms = 2;
  int transitive_axioms = 1;
  int inverse_axioms = 1;
  int subproperty_axioms = 1;
  int chain_axioms = 1;
  int equivalence_axioms = 2;
  int user_rules = 1;
  std::uint64_t seed = 0;
};

struct GeneratedKb {
  std::string ontology_ttl;
  std::string rules_text;
};

// Deterministic per seed: the same spec always yields byte-identical text.
// The output parses with zero error diagnostics and passes validate().
GeneratedKb generate_random(const RandomKbSpec& spec);

// Strict reachability closure (paths of length >= 1) by per-node BFS.
// Independent oracle for transitive-property derivations.
std::set<std::pair<TermId, TermId>> bfs_closure_oracle(
    const std::vector<std::pair<TermId, TermId>>& edges);

// Large synthetic input for the performance checks: a component forest of
// `edge_count` hasComponent edges with bounded depth, one agent per tree,
// plus `equivalence_count` capability definitions over leaf part classes.
KnowledgeBase build_component_forest(std::size_t edge_count, int max_depth,
                                     int equivalence_count, std::uint64_t seed);

}  // namespace capakb::fixtures
