#pragma once
// Typed axiom fragment and the compiler that lowers it, together with user
// rules, into the uniform body/head pattern form the materializer executes.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "capakb/diagnostics.hpp"
#include "capakb/term.hpp"

namespace capakb {

// --- class expressions -----------------------------------------------------

struct ClassExpression {
  enum class Kind : std::uint8_t { Named, Intersection, SomeValuesFrom };

  Kind kind = Kind::Named;
  TermId named = 0;     // Named
  TermId property = 0;  // SomeValuesFrom
  TermId filler = 0;    // SomeValuesFrom: named filler class
  std::vector<ClassExpression> conjuncts;  // Intersection

  static ClassExpression named_class(TermId cls);
  static ClassExpression some(TermId property, TermId filler);
  static ClassExpression intersection_of(std::vector<ClassExpression> conjuncts);

  // Flattens one level of nested intersections. Deeper nesting is a
  // validation error and survives normalization so validate can see it.
  ClassExpression normalized() const;

  bool operator==(const ClassExpression&) const = default;
};

// --- axioms ------------------------------------------------------------------

struct SubClassOfAxiom {
  TermId sub = 0;
  TermId sup = 0;
  bool operator==(const SubClassOfAxiom&) const = default;
};

struct EquivalentToAxiom {
  TermId cls = 0;  // left side, always a named class
  ClassExpression expr;
  bool operator==(const EquivalentToAxiom&) const = default;
};

struct TransitivePropertyAxiom {
  TermId property = 0;
  bool operator==(const TransitivePropertyAxiom&) const = default;
};

struct InversePropertiesAxiom {
  TermId p = 0;
  TermId q = 0;
  bool operator==(const InversePropertiesAxiom&) const = default;
};

struct SubPropertyOfAxiom {
  TermId sub = 0;
  TermId sup = 0;
  bool operator==(const SubPropertyOfAxiom&) const = default;
};

struct PropertyChainAxiom {
  std::vector<TermId> chain;  // length >= 2
  TermId implies = 0;
  bool operator==(const PropertyChainAxiom&) const = default;
};

using Axiom = std::variant<SubClassOfAxiom, EquivalentToAxiom,
                           TransitivePropertyAxiom, InversePropertiesAxiom,
                           SubPropertyOfAxiom, PropertyChainAxiom>;

// --- user rules --------------------------------------------------------------

struct RuleAtom {
  enum class Kind : std::uint8_t { Class, Property };
  Kind kind = Kind::Class;
  TermId predicate = 0;   // class or property term
  std::string var1;       // subject variable
  std::string var2;       // object variable (property atoms only)
  bool operator==(const RuleAtom&) const = default;
};

struct HornRule {
  std::string name;
  std::vector<RuleAtom> body;
  RuleAtom head;
  bool operator==(const HornRule&) const = default;
};

// --- compiled form -----------------------------------------------------------

// A position in a body/head pattern: either a constant term or a variable
// slot local to the rule.
struct PatternTerm {
  bool is_var = false;
  std::uint32_t var = 0;
  TermId constant = 0;

  static PatternTerm variable(std::uint32_t v) { return {true, v, 0}; }
  static PatternTerm term(TermId t) { return {false, 0, t}; }
  bool operator==(const PatternTerm&) const = default;
};

struct AtomPattern {
  PatternTerm s, p, o;
  bool operator==(const AtomPattern&) const = default;
};

enum class RuleOrigin : std::uint8_t { Builtin, Axiom, UserRule };

struct CompiledRule {
  std::string name;
  std::vector<AtomPattern> body;  // empty body = ground head, fired once
  AtomPattern head;
  RuleOrigin origin = RuleOrigin::Builtin;
  std::uint32_t var_count = 0;
  bool operator==(const CompiledRule&) const = default;
};

struct InferenceProgram {
  std::vector<CompiledRule> rules;
  bool operator==(const InferenceProgram&) const = default;
};

// Reserved predicate ids every program joins on.
struct CoreVocab {
  TermId rdf_type = 0;
  TermId rdfs_sub_class_of = 0;
};

// --- validation and compilation ----------------------------------------------

// Returns every violation found; an empty list means the inputs compile.
std::vector<Diagnostic> validate(const std::vector<Axiom>& axioms,
                                 const std::vector<HornRule>& user_rules);

struct CompileResult {
  InferenceProgram program;
  std::vector<Diagnostic> diagnostics;
  bool ok() const;
};

// Lowers axioms and user rules into the executable program. Inputs that
// fail validate() yield the diagnostics and an empty program.
CompileResult compile(const std::vector<Axiom>& axioms,
                      const std::vector<HornRule>& user_rules,
                      const CoreVocab& vocab, const TermInterner& terms);

// Short display name for a term: the part after the last '#' or '/'.
std::string local_name(const TermInterner& terms, TermId id);

}  // namespace capakb
