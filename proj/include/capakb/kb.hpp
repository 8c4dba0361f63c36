#pragma once
// A knowledge base bundles the interner, store, compiled program and
// provenance, and keeps the materialization consistent under assertion and
// retraction (delete-and-rederive). Single writer; readers work on value
// snapshots taken between operations.

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "capakb/parser.hpp"
#include "capakb/reasoner.hpp"

namespace capakb {

struct DeltaReport {
  std::vector<Triple> added;      // facts newly present (assert)
  std::vector<Triple> removed;    // facts gone after rederivation (retract)
  std::vector<Triple> rederived;  // overdeleted but restored (retract)
  std::chrono::microseconds elapsed{0};
};

class KnowledgeBase {
public:
  KnowledgeBase();

  TermInterner& terms() { return terms_; }
  const TermInterner& terms() const { return terms_; }
  const Vocab& vocab() const { return vocab_; }
  const TripleStore& store() const { return store_; }
  const InferenceProgram& program() const { return program_; }
  const ProvenanceIndex& provenance() const { return prov_; }
  const PrefixMap& prefixes() const { return prefixes_; }
  bool materialized() const { return materialized_; }

  void add_prefixes(const PrefixMap& prefixes);

  // Loading inserts every parsed triple as asserted (schema triples
  // included, so the store serializes back to the full document) and stages
  // the recognized axioms for compile().
  std::vector<Diagnostic> load_ontology(std::string_view text);
  std::vector<Diagnostic> load_rules(std::string_view text);

  void add_axiom(Axiom axiom);
  void add_rule(HornRule rule);
  void add_fact(const Triple& t);  // asserted; predicate must be an IRI

  const std::vector<Axiom>& axioms() const { return axioms_; }
  const std::vector<HornRule>& rules() const { return rules_; }

  // Validates and lowers the staged axioms and rules. Must be called before
  // materialize; returns validation diagnostics (empty on success).
  std::vector<Diagnostic> compile_program();

  MaterializationStats materialize();

  // Incremental maintenance; both require a materialized base.
  DeltaReport assert_fact(const Triple& t);
  DeltaReport assert_all(const std::vector<Triple>& ts);
  // DRed: overdelete everything reachable through invalidated supports,
  // then rederive what the surviving facts still justify.
  DeltaReport retract_fact(const Triple& t);
  DeltaReport retract_all(const std::vector<Triple>& ts);

  // Drops all derived triples and provenance, re-materializes from the
  // asserted set. The recovery path and the oracle for the maintenance law.
  MaterializationStats rebuild();

  TripleStore snapshot() const { return store_; }

  EngineOptions& engine_options() { return engine_options_; }

  std::string rule_name(std::uint32_t rule_index) const;

private:
  void ensure_materialized(const char* op) const;
  DeltaReport retract_batch(const std::vector<Triple>& ts);

  TermInterner terms_;
  Vocab vocab_;
  TripleStore store_;
  PrefixMap prefixes_;
  std::vector<Axiom> axioms_;
  std::vector<HornRule> rules_;
  InferenceProgram program_;
  ProvenanceIndex prov_;
  EngineOptions engine_options_;
  std::uint64_t skolem_counter_ = 0;
  bool compiled_ = false;
  bool materialized_ = false;
};

}  // namespace capakb
