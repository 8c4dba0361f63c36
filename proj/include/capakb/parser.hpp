#pragma once
// Turtle-subset reader/writer and the rule-file reader. The subset covers
// @prefix/@base, absolute IRIs, prefixed names, 'a', ';'/',' lists, blank
// node property lists, collections, opaque literals and '#' comments. Blank
// nodes are skolemized while parsing; axiom vocabulary is recognized into
// typed Axiom values afterwards.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "capakb/model.hpp"
#include "capakb/triple_store.hpp"

namespace capakb {

// Reserved vocabulary, interned once per knowledge base.
struct Vocab {
  TermId rdf_type = 0;
  TermId rdf_first = 0;
  TermId rdf_rest = 0;
  TermId rdf_nil = 0;
  TermId rdfs_sub_class_of = 0;
  TermId rdfs_sub_property_of = 0;
  TermId owl_transitive_property = 0;
  TermId owl_inverse_of = 0;
  TermId owl_equivalent_class = 0;
  TermId owl_restriction = 0;
  TermId owl_on_property = 0;
  TermId owl_some_values_from = 0;
  TermId owl_intersection_of = 0;
  TermId owl_property_chain_axiom = 0;

  static Vocab standard(TermInterner& terms);
  CoreVocab core() const { return {rdf_type, rdfs_sub_class_of}; }
};

using PrefixMap = std::map<std::string, std::string>;  // prefix -> IRI

struct OntologyDocument {
  PrefixMap prefixes;
  std::vector<Triple> triples;  // everything parsed, in statement order
  std::vector<Axiom> axioms;    // recognized schema content
  std::vector<Triple> facts;    // triples not consumed into an axiom
};

struct ParseResult {
  OntologyDocument document;
  std::vector<Diagnostic> diagnostics;
  std::uint64_t skolem_next = 0;  // counter value after this document
  bool ok() const { return !has_errors(diagnostics); }
};

struct ParseOptions {
  // Continues skolem numbering across documents loaded into one store.
  std::uint64_t skolem_start = 0;
};

ParseResult parse_turtle(std::string_view text, TermInterner& terms,
                         const Vocab& vocab, const ParseOptions& opts = {});

struct RecognizeResult {
  std::vector<Axiom> axioms;
  std::vector<Triple> facts;
  std::vector<Diagnostic> diagnostics;
};

// Splits a triple list into recognized axioms and leftover facts. Structural
// triples (restriction nodes, collection spines) consumed into an axiom do
// not reappear as facts. `spans`, when given, must parallel `triples` and
// feeds diagnostic locations.
RecognizeResult recognize_axioms(const std::vector<Triple>& triples,
                                 const TermInterner& terms, const Vocab& vocab,
                                 const std::vector<SourceSpan>* spans = nullptr);

struct RulesParseResult {
  std::vector<HornRule> rules;
  PrefixMap prefixes;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

// Grammar: rule "<name>": atom ("," atom)* "->" atom "."
// where atom is Class(?v) or property(?v, ?w); an @prefix block may precede
// the rules and `base_prefixes` seeds the prefix table.
RulesParseResult parse_rules(std::string_view text, TermInterner& terms,
                             const PrefixMap& base_prefixes = {});

struct SerializeOptions {
  // When set, derived triples are written too, each annotated "# derived".
  bool include_derived = false;
};

// Deterministic writer: prefixes sorted, subjects sorted by IRI, predicates
// grouped with ';' (rdf:type first, rendered as 'a'), objects grouped with
// ','. Output is byte-stable for equal stores.
std::string serialize_turtle(const TripleStore& store, const TermInterner& terms,
                             const PrefixMap& prefixes, const Vocab& vocab,
                             const SerializeOptions& opts = {});

// IRI <-> prefixed-name helpers shared by the serializer, CLI and exports.
std::string compact_iri(const std::string& iri, const PrefixMap& prefixes);
std::string render_term(const Term& term, const PrefixMap& prefixes);

}  // namespace capakb
