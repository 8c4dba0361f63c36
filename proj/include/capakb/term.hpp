#pragma once
// Dictionary-encoded terms. Every IRI, skolemized blank node and literal is
// interned once and handled by a dense integer id from then on; rule
// evaluation joins on ids, never on strings.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace capakb {

using TermId = std::uint32_t;

enum class TermKind : std::uint8_t { Iri, BlankNode, Literal };

struct Term {
  TermKind kind = TermKind::Iri;
  std::string lexical;  // absolute IRI, blank-node label, or literal form

  bool operator==(const Term&) const = default;
};

// Blank nodes are skolemized into this namespace at load time so the
// reasoner never has to treat them specially.
inline constexpr std::string_view kSkolemNamespace = "urn:capakb:bnode:";

bool is_skolem_iri(std::string_view iri);

// True when `iri` starts with an RFC 3986 scheme ("scheme:").
bool has_iri_scheme(std::string_view iri);

class TermInterner {
public:
  // Returns a stable id; equal terms always map to the same id.
  // Throws KbError for empty lexical forms and for IRIs without a scheme.
  TermId intern(Term term);
  TermId intern_iri(std::string iri);
  TermId intern_literal(std::string lexical);

  std::optional<TermId> find(const Term& term) const;
  std::optional<TermId> find_iri(std::string_view iri) const;

  const Term& resolve(TermId id) const;  // throws KbError on unknown id
  bool is_iri(TermId id) const { return resolve(id).kind == TermKind::Iri; }

  std::size_t size() const { return terms_.size(); }

private:
  struct Key {
    TermKind kind;
    std::string lexical;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::string>{}(k.lexical) * 31u +
             static_cast<std::size_t>(k.kind);
    }
  };

  std::vector<Term> terms_;
  std::unordered_map<Key, TermId, KeyHash> ids_;
};

}  // namespace capakb
