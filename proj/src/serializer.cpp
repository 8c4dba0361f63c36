#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "capakb/parser.hpp"

namespace capakb {

namespace {

struct ObjectEntry {
  std::string rendered;
  TermKind kind;
  std::string lexical;
  bool derived;

  bool operator<(const ObjectEntry& other) const {
    if (kind != other.kind) return kind < other.kind;
    return lexical < other.lexical;
  }
};

}  // namespace

std::string serialize_turtle(const TripleStore& store, const TermInterner& terms,
                             const PrefixMap& prefixes, const Vocab& vocab,
                             const SerializeOptions& opts) {
  std::ostringstream out;
  for (const auto& [prefix, iri] : prefixes)
    out << "@prefix " << prefix << ": <" << iri << "> .\n";

  // subject iri -> predicate -> objects; rdf:type first within a subject.
  const std::string& type_iri = terms.resolve(vocab.rdf_type).lexical;
  std::map<std::string, std::map<std::string, std::vector<ObjectEntry>>> groups;
  for (const auto& [t, flag] : store.entries()) {
    if (flag == TripleFlag::Derived && !opts.include_derived) continue;
    const Term& s = terms.resolve(t.s);
    const Term& p = terms.resolve(t.p);
    const Term& o = terms.resolve(t.o);
    std::string pred_key = p.lexical == type_iri ? "" : p.lexical;
    groups[s.lexical][pred_key].push_back(ObjectEntry{
        render_term(o, prefixes), o.kind, o.lexical,
        flag == TripleFlag::Derived});
  }

  bool first_subject = true;
  for (auto& [subject_iri, preds] : groups) {
    out << "\n";
    first_subject = false;
    std::string subject = compact_iri(subject_iri, prefixes);
    out << subject;
    std::size_t pred_index = 0;
    for (auto& [pred_key, objects] : preds) {
      std::sort(objects.begin(), objects.end());
      std::string pred =
          pred_key.empty() ? "a" : compact_iri(pred_key, prefixes);
      bool last_pred = ++pred_index == preds.size();
      if (pred_index == 1)
        out << " " << pred << " ";
      else
        out << "    " << pred << " ";
      for (std::size_t i = 0; i < objects.size(); ++i) {
        bool last_obj = i + 1 == objects.size();
        if (i > 0) out << "        ";
        out << objects[i].rendered;
        if (!last_obj)
          out << " ,";
        else if (!last_pred)
          out << " ;";
        else
          out << " .";
        if (objects[i].derived) out << "  # derived";
        out << "\n";
      }
    }
  }
  (void)first_subject;
  return out.str();
}

}  // namespace capakb
