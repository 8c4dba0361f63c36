#pragma once
// Read-side operations over a materialized knowledge base: capability and
// affordance reports, instance lookup, derivation-tree explanations and the
// Graphviz export.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "capakb/kb.hpp"

namespace capakb {

struct QueryVocab {
  TermId has_capability = 0;
  TermId capability_root = 0;
  TermId has_component = 0;
};

struct CapabilityReport {
  TermId agent = 0;
  std::optional<TermId> capability_individual;  // empty: no hasCapability edge
  std::set<TermId> capabilities;  // classes under the capability root only
  std::set<TermId> components;    // reachable via hasComponent
};

// Resolves the agent's capability individual and collects the capability
// classes it belongs to. Throws KbError when the agent has more than one
// capability individual (the modelling convention allows exactly one).
CapabilityReport capabilities_of(const KnowledgeBase& kb, TermId agent,
                                 const QueryVocab& vocab);

std::set<TermId> instances_of(const KnowledgeBase& kb, TermId cls);

// Reflexive-transitive reachability over stored subClassOf edges.
bool is_subclass_of(const KnowledgeBase& kb, TermId cls, TermId root);

std::set<std::pair<TermId, TermId>> affordances_of(
    const KnowledgeBase& kb, TermId agent,
    const std::set<TermId>& affordance_properties);

struct DerivationNode {
  enum class Kind : std::uint8_t { Asserted, Derived, Truncated };
  Triple fact;
  Kind kind = Kind::Asserted;
  std::string rule;  // derived nodes only
  std::vector<DerivationNode> children;
};

// One derivation tree for `fact`. Derived nodes expand a single support,
// chosen deterministically (smallest rule name, then smallest premise ids)
// among those whose premises predate the fact, so trees are acyclic.
// Depth caps expansion with Truncated markers.
DerivationNode explain(const KnowledgeBase& kb, const Triple& fact,
                       std::size_t max_depth = 16);

std::string format_derivation(const KnowledgeBase& kb,
                              const DerivationNode& node);

struct DotOptions {
  bool show_derived = true;
  std::optional<TermId> focus;
  std::size_t depth = 2;  // neighborhood radius when focus is set
};

// DOT digraph: individuals as ellipses, classes as boxes, asserted edges
// solid, derived edges dashed, type edges labeled isA. Byte-identical
// across runs on equal stores.
std::string export_dot(const KnowledgeBase& kb, const DotOptions& opts = {});

}  // namespace capakb
