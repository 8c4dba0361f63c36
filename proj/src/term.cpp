#include "capakb/term.hpp"

#include <cctype>

#include "capakb/errors.hpp"

namespace capakb {

bool is_skolem_iri(std::string_view iri) {
  return iri.substr(0, kSkolemNamespace.size()) == kSkolemNamespace;
}

bool has_iri_scheme(std::string_view iri) {
  auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = iri[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      return false;
  }
  return true;
}

TermId TermInterner::intern(Term term) {
  if (term.lexical.empty()) throw KbError("cannot intern empty term");
  if (term.kind == TermKind::Iri && !has_iri_scheme(term.lexical))
    throw KbError("malformed IRI (missing scheme): '" + term.lexical + "'");

  Key key{term.kind, term.lexical};
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;

  TermId id = static_cast<TermId>(terms_.size());
  terms_.push_back(std::move(term));
  ids_.emplace(std::move(key), id);
  return id;
}

TermId TermInterner::intern_iri(std::string iri) {
  return intern(Term{TermKind::Iri, std::move(iri)});
}

TermId TermInterner::intern_literal(std::string lexical) {
  return intern(Term{TermKind::Literal, std::move(lexical)});
}

std::optional<TermId> TermInterner::find(const Term& term) const {
  auto it = ids_.find(Key{term.kind, term.lexical});
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> TermInterner::find_iri(std::string_view iri) const {
  return find(Term{TermKind::Iri, std::string(iri)});
}

const Term& TermInterner::resolve(TermId id) const {
  if (id >= terms_.size())
    throw KbError("unknown term id " + std::to_string(id));
  return terms_[id];
}

}  // namespace capakb
