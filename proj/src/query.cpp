#include "capakb/query.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "capakb/errors.hpp"

namespace capakb {

namespace {

constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";
constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";

bool in_ns(const std::string& iri, std::string_view ns) {
  return iri.size() > ns.size() &&
         std::string_view(iri).substr(0, ns.size()) == ns;
}

// Reflexive-transitive subclass reachability over stored subClassOf edges.
class SubclassReach {
public:
  SubclassReach(const TripleStore& store, TermId sub_class_of, TermId root)
      : store_(store), sub_class_of_(sub_class_of), root_(root) {}

  bool under_root(TermId cls) {
    if (auto it = memo_.find(cls); it != memo_.end()) return it->second;
    std::set<TermId> visited;
    bool found = walk(cls, visited);
    memo_[cls] = found;
    return found;
  }

private:
  bool walk(TermId cls, std::set<TermId>& visited) {
    if (cls == root_) return true;
    if (!visited.insert(cls).second) return false;
    bool found = false;
    store_.for_each_match(TriplePattern{cls, sub_class_of_, std::nullopt},
                          [&](const Triple& t) {
                            if (!found && walk(t.o, visited)) found = true;
                          });
    return found;
  }

  const TripleStore& store_;
  TermId sub_class_of_;
  TermId root_;
  std::map<TermId, bool> memo_;
};

}  // namespace

CapabilityReport capabilities_of(const KnowledgeBase& kb, TermId agent,
                                 const QueryVocab& vocab) {
  CapabilityReport report;
  report.agent = agent;

  std::set<TermId> individuals;
  kb.store().for_each_match(
      TriplePattern{agent, vocab.has_capability, std::nullopt},
      [&](const Triple& t) { individuals.insert(t.o); });
  if (individuals.empty()) return report;  // "no capability individual"
  if (individuals.size() > 1)
    throw KbError("agent has multiple capability individuals");
  report.capability_individual = *individuals.begin();

  SubclassReach reach(kb.store(), kb.vocab().rdfs_sub_class_of,
                      vocab.capability_root);
  kb.store().for_each_match(
      TriplePattern{*report.capability_individual, kb.vocab().rdf_type,
                    std::nullopt},
      [&](const Triple& t) {
        if (reach.under_root(t.o)) report.capabilities.insert(t.o);
      });

  kb.store().for_each_match(
      TriplePattern{agent, vocab.has_component, std::nullopt},
      [&](const Triple& t) { report.components.insert(t.o); });
  return report;
}

std::set<TermId> instances_of(const KnowledgeBase& kb, TermId cls) {
  std::set<TermId> out;
  kb.store().for_each_match(
      TriplePattern{std::nullopt, kb.vocab().rdf_type, cls},
      [&](const Triple& t) { out.insert(t.s); });
  return out;
}

bool is_subclass_of(const KnowledgeBase& kb, TermId cls, TermId root) {
  SubclassReach reach(kb.store(), kb.vocab().rdfs_sub_class_of, root);
  return reach.under_root(cls);
}

std::set<std::pair<TermId, TermId>> affordances_of(
    const KnowledgeBase& kb, TermId agent,
    const std::set<TermId>& affordance_properties) {
  std::set<std::pair<TermId, TermId>> out;
  for (TermId p : affordance_properties) {
    kb.store().for_each_match(TriplePattern{agent, p, std::nullopt},
                              [&](const Triple& t) { out.emplace(p, t.o); });
  }
  return out;
}

namespace {

DerivationNode build_node(const KnowledgeBase& kb, const Triple& fact,
                          std::size_t depth) {
  auto flag = kb.store().flag_of(fact);
  if (!flag) throw KbError("fact not in store");

  DerivationNode node;
  node.fact = fact;
  if (*flag == TripleFlag::Asserted) {
    node.kind = DerivationNode::Kind::Asserted;
    return node;
  }
  if (depth == 0) {
    node.kind = DerivationNode::Kind::Truncated;
    return node;
  }

  // Candidates: supports whose premises all predate the fact. Following
  // such supports strictly decreases the insertion sequence, so the tree
  // cannot loop back through the same fact.
  const ProvenanceIndex& prov = kb.provenance();
  std::uint64_t fact_seq = prov.sequence_of(fact);
  std::vector<const Support*> candidates;
  for (auto sid : prov.supports_of(fact)) {
    const Support& s = prov.get(sid);
    bool well_founded = true;
    for (const Triple& premise : s.premises) {
      if (!kb.store().contains(premise) ||
          prov.sequence_of(premise) >= fact_seq) {
        well_founded = false;
        break;
      }
    }
    if (well_founded) candidates.push_back(&s);
  }
  if (candidates.empty())
    throw KbError("no well-founded support recorded for derived fact");

  std::sort(candidates.begin(), candidates.end(),
            [&](const Support* a, const Support* b) {
              const std::string an = kb.rule_name(a->rule);
              const std::string bn = kb.rule_name(b->rule);
              if (an != bn) return an < bn;
              return a->premises < b->premises;
            });
  const Support* chosen = candidates.front();

  node.kind = DerivationNode::Kind::Derived;
  node.rule = kb.rule_name(chosen->rule);
  for (const Triple& premise : chosen->premises)
    node.children.push_back(build_node(kb, premise, depth - 1));
  return node;
}

void format_node(const KnowledgeBase& kb, const DerivationNode& node,
                 std::size_t indent, std::ostringstream& out) {
  const auto& terms = kb.terms();
  out << std::string(indent * 2, ' ');
  out << render_term(terms.resolve(node.fact.s), kb.prefixes()) << " "
      << render_term(terms.resolve(node.fact.p), kb.prefixes()) << " "
      << render_term(terms.resolve(node.fact.o), kb.prefixes());
  switch (node.kind) {
    case DerivationNode::Kind::Asserted:
      out << "   [asserted]";
      break;
    case DerivationNode::Kind::Derived:
      out << "   [derived by " << node.rule << "]";
      break;
    case DerivationNode::Kind::Truncated:
      out << "   [derived; truncated at depth limit]";
      break;
  }
  out << "\n";
  for (const auto& child : node.children)
    format_node(kb, child, indent + 1, out);
}

}  // namespace

DerivationNode explain(const KnowledgeBase& kb, const Triple& fact,
                       std::size_t max_depth) {
  return build_node(kb, fact, max_depth);
}

std::string format_derivation(const KnowledgeBase& kb,
                              const DerivationNode& node) {
  std::ostringstream out;
  format_node(kb, node, 0, out);
  return out.str();
}

namespace {

struct DotEdge {
  std::string from;
  std::string to;
  std::string label;
  bool derived;

  bool operator<(const DotEdge& other) const {
    return std::tie(from, label, to, derived) <
           std::tie(other.from, other.label, other.to, other.derived);
  }
};

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string export_dot(const KnowledgeBase& kb, const DotOptions& opts) {
  const TermInterner& terms = kb.terms();
  const Vocab& vocab = kb.vocab();
  const PrefixMap& prefixes = kb.prefixes();

  auto structural_pred = [&](TermId p) {
    return p == vocab.owl_on_property || p == vocab.owl_some_values_from ||
           p == vocab.owl_intersection_of || p == vocab.owl_equivalent_class ||
           p == vocab.owl_property_chain_axiom || p == vocab.owl_inverse_of ||
           p == vocab.rdfs_sub_property_of || p == vocab.rdf_first ||
           p == vocab.rdf_rest;
  };
  auto hidden_node = [&](TermId id) {
    const Term& t = terms.resolve(id);
    if (t.kind != TermKind::Iri) return false;
    return is_skolem_iri(t.lexical) || in_ns(t.lexical, kOwlNs) ||
           in_ns(t.lexical, kRdfNs) || in_ns(t.lexical, kRdfsNs);
  };

  // Classes draw as boxes: objects of type triples plus subClassOf operands.
  std::set<TermId> class_terms;
  std::vector<std::tuple<Triple, bool>> edges_raw;
  for (const auto& [t, flag] : kb.store().entries()) {
    bool derived = flag == TripleFlag::Derived;
    if (derived && !opts.show_derived) continue;
    if (structural_pred(t.p)) continue;
    if (hidden_node(t.s) || hidden_node(t.o)) continue;
    if (t.p == vocab.rdf_type) class_terms.insert(t.o);
    if (t.p == vocab.rdfs_sub_class_of) {
      class_terms.insert(t.s);
      class_terms.insert(t.o);
    }
    edges_raw.emplace_back(t, derived);
  }

  // Optional neighborhood restriction around the focus term.
  std::set<TermId> allowed;
  if (opts.focus) {
    std::set<TermId> frontier{*opts.focus};
    allowed = frontier;
    for (std::size_t hop = 0; hop < opts.depth; ++hop) {
      std::set<TermId> next;
      for (const auto& [t, derived] : edges_raw) {
        if (frontier.count(t.s) && !allowed.count(t.o)) next.insert(t.o);
        if (frontier.count(t.o) && !allowed.count(t.s)) next.insert(t.s);
      }
      if (next.empty()) break;
      allowed.insert(next.begin(), next.end());
      frontier = std::move(next);
    }
  }

  auto node_id = [&](TermId id) {
    const Term& t = terms.resolve(id);
    if (t.kind == TermKind::Literal) return "lit:" + t.lexical;
    return compact_iri(t.lexical, prefixes);
  };

  std::map<std::string, TermId> nodes;  // sorted by display name
  std::set<DotEdge> edges;
  for (const auto& [t, derived] : edges_raw) {
    if (opts.focus && (!allowed.count(t.s) || !allowed.count(t.o))) continue;
    std::string label;
    if (t.p == vocab.rdf_type)
      label = "isA";
    else if (t.p == vocab.rdfs_sub_class_of)
      label = "subClassOf";
    else
      label = local_name(terms, t.p);
    nodes.emplace(node_id(t.s), t.s);
    nodes.emplace(node_id(t.o), t.o);
    edges.insert(DotEdge{node_id(t.s), node_id(t.o), label, derived});
  }

  std::ostringstream out;
  out << "// capability knowledge base export\n";
  if (nodes.empty()) {
    out << "digraph capakb {}\n";
    return out.str();
  }
  out << "digraph capakb {\n";
  out << "  rankdir=LR;\n";
  for (const auto& [name, id] : nodes) {
    const Term& t = terms.resolve(id);
    const char* shape = "ellipse";
    if (t.kind == TermKind::Literal)
      shape = "note";
    else if (class_terms.count(id))
      shape = "box";
    out << "  \"" << dot_escape(name) << "\" [shape=" << shape;
    if (t.kind == TermKind::Literal)
      out << ", label=\"" << dot_escape(t.lexical) << "\"";
    out << "];\n";
  }
  for (const auto& e : edges) {
    out << "  \"" << dot_escape(e.from) << "\" -> \"" << dot_escape(e.to)
        << "\" [label=\"" << dot_escape(e.label) << "\", style="
        << (e.derived ? "dashed" : "solid") << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace capakb
