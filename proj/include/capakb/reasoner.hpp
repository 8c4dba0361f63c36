#pragma once
// Fixpoint engines over a triple store: the semi-naive materializer used in
// production and a naive reference oracle that re-evaluates every rule
// against the full store each round. Both record provenance the same way
// and must reach identical fixpoints.

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "capakb/model.hpp"
#include "capakb/provenance.hpp"
#include "capakb/triple_store.hpp"

namespace capakb {

struct MaterializationStats {
  std::size_t iterations = 0;
  std::size_t derived_count = 0;  // total derived-flagged triples after the run
  std::map<std::string, std::size_t> rule_fire_counts;
  std::chrono::microseconds elapsed{0};
};

struct EngineOptions {
  std::size_t iteration_cap = 10'000;
};

// Computes the least fixpoint of `program` over the store's current
// contents. Every derived fact gets at least one recorded support. Throws
// IterationLimitError past the cap.
MaterializationStats materialize(TripleStore& store,
                                 const InferenceProgram& program,
                                 ProvenanceIndex& provenance,
                                 const EngineOptions& opts = {});

// Semi-naive rounds seeded from `seed` instead of the whole store; used by
// incremental assertion and the rederivation phase of retraction. Appends
// every newly inserted triple to `added`.
MaterializationStats materialize_delta(TripleStore& store,
                                       const InferenceProgram& program,
                                       ProvenanceIndex& provenance,
                                       const std::vector<Triple>& seed,
                                       std::vector<Triple>* added,
                                       const EngineOptions& opts = {});

// Reference oracle; final triple set must equal materialize's on any input.
MaterializationStats naive_fixpoint(TripleStore& store,
                                    const InferenceProgram& program,
                                    ProvenanceIndex& provenance,
                                    const EngineOptions& opts = {});

// Direct evaluation of a class expression against the store, no derivation:
// Named -> type triple present; SomeValuesFrom -> a filler-typed successor
// exists; Intersection -> all conjuncts hold.
bool check_instance(const TripleStore& store, TermId individual,
                    const ClassExpression& expr, TermId rdf_type);

}  // namespace capakb
