#include "capakb/parser.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "capakb/errors.hpp"

namespace capakb {

Vocab Vocab::standard(TermInterner& terms) {
  Vocab v;
  v.rdf_type =
      terms.intern_iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
  v.rdf_first =
      terms.intern_iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#first");
  v.rdf_rest =
      terms.intern_iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#rest");
  v.rdf_nil =
      terms.intern_iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#nil");
  v.rdfs_sub_class_of =
      terms.intern_iri("http://www.w3.org/2000/01/rdf-schema#subClassOf");
  v.rdfs_sub_property_of =
      terms.intern_iri("http://www.w3.org/2000/01/rdf-schema#subPropertyOf");
  v.owl_transitive_property =
      terms.intern_iri("http://www.w3.org/2002/07/owl#TransitiveProperty");
  v.owl_inverse_of = terms.intern_iri("http://www.w3.org/2002/07/owl#inverseOf");
  v.owl_equivalent_class =
      terms.intern_iri("http://www.w3.org/2002/07/owl#equivalentClass");
  v.owl_restriction =
      terms.intern_iri("http://www.w3.org/2002/07/owl#Restriction");
  v.owl_on_property =
      terms.intern_iri("http://www.w3.org/2002/07/owl#onProperty");
  v.owl_some_values_from =
      terms.intern_iri("http://www.w3.org/2002/07/owl#someValuesFrom");
  v.owl_intersection_of =
      terms.intern_iri("http://www.w3.org/2002/07/owl#intersectionOf");
  v.owl_property_chain_axiom =
      terms.intern_iri("http://www.w3.org/2002/07/owl#propertyChainAxiom");
  return v;
}

namespace {

constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";
constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";

bool in_namespace(const std::string& iri, std::string_view ns) {
  return iri.size() > ns.size() && std::string_view(iri).substr(0, ns.size()) == ns;
}

bool pname_local_ok(std::string_view local) {
  for (char c : local)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

// --- lexing ------------------------------------------------------------------

enum class Tok {
  Eof,
  Dot,
  Semicolon,
  Comma,
  Colon,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Arrow,
  PrefixKw,
  BaseKw,
  IriRef,
  PName,
  BlankLabel,
  Var,
  String,
  Number,
  Ident,  // bare word; 'a' in turtle, 'rule' in rule files
  A,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;   // iri / prefix / label / value / lexical
  std::string local;  // pname local part
  SourceSpan span;
};

struct LexError {
  std::string message;
  SourceSpan span;
};

class Lexer {
public:
  Lexer(std::string_view text, bool rules_mode)
      : text_(text), rules_mode_(rules_mode) {
    advance();
  }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  SourceSpan here() const { return span_at(pos_, 1); }

private:
  void advance() { current_ = lex(); }

  SourceSpan span_at(std::size_t start, std::size_t len) const {
    SourceSpan s;
    s.line = 1;
    s.column = 1;
    for (std::size_t i = 0; i < start && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++s.line;
        s.column = 1;
      } else {
        ++s.column;
      }
    }
    s.length = static_cast<int>(len);
    return s;
  }

  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char at(std::size_t off) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }
  bool done() const { return pos_ >= text_.size(); }

  void skip_trivia() {
    while (!done()) {
      char c = cur();
      if (c == '#') {
        while (!done() && cur() != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::size_t start, std::string text = {},
             std::string local = {}) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.local = std::move(local);
    t.span = span_at(start, std::max<std::size_t>(1, pos_ - start));
    return t;
  }

  Token lex() {
    skip_trivia();
    std::size_t start = pos_;
    if (done()) return make(Tok::Eof, start);
    char c = cur();

    switch (c) {
      case '.': ++pos_; return make(Tok::Dot, start);
      case ';': ++pos_; return make(Tok::Semicolon, start);
      case ',': ++pos_; return make(Tok::Comma, start);
      case '[': ++pos_; return make(Tok::LBracket, start);
      case ']': ++pos_; return make(Tok::RBracket, start);
      case '(': ++pos_; return make(Tok::LParen, start);
      case ')': ++pos_; return make(Tok::RParen, start);
      default: break;
    }

    if (c == '-' && at(1) == '>' && rules_mode_) {
      pos_ += 2;
      return make(Tok::Arrow, start);
    }

    if (c == '<') {
      ++pos_;
      std::string iri;
      while (!done() && cur() != '>') {
        if (cur() == '\n')
          throw LexError{"unterminated IRI reference", span_at(start, pos_ - start)};
        iri.push_back(cur());
        ++pos_;
      }
      if (done()) throw LexError{"unterminated IRI reference", span_at(start, 1)};
      ++pos_;  // '>'
      return make(Tok::IriRef, start, std::move(iri));
    }

    if (c == '"') {
      ++pos_;
      std::string value;
      while (!done() && cur() != '"') {
        char d = cur();
        if (d == '\n')
          throw LexError{"unterminated string literal",
                         span_at(start, pos_ - start)};
        if (d == '\\') {
          ++pos_;
          char e = cur();
          switch (e) {
            case '"': value.push_back('"'); break;
            case '\\': value.push_back('\\'); break;
            case 'n': value.push_back('\n'); break;
            case 't': value.push_back('\t'); break;
            case 'r': value.push_back('\r'); break;
            default:
              throw LexError{std::string("unsupported escape '\\") + e + "'",
                             span_at(pos_ - 1, 2)};
          }
          ++pos_;
        } else {
          value.push_back(d);
          ++pos_;
        }
      }
      if (done())
        throw LexError{"unterminated string literal", span_at(start, 1)};
      ++pos_;  // closing quote
      return make(Tok::String, start, std::move(value));
    }

    if (c == '@') {
      ++pos_;
      std::string word;
      while (std::isalpha(static_cast<unsigned char>(cur()))) {
        word.push_back(cur());
        ++pos_;
      }
      if (word == "prefix") return make(Tok::PrefixKw, start);
      if (word == "base") return make(Tok::BaseKw, start);
      throw LexError{"unknown directive '@" + word + "'",
                     span_at(start, pos_ - start)};
    }

    if (c == '_' && at(1) == ':') {
      pos_ += 2;
      std::string label;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_' ||
             cur() == '-') {
        label.push_back(cur());
        ++pos_;
      }
      if (label.empty())
        throw LexError{"blank node label expected after '_:'",
                       span_at(start, pos_ - start)};
      return make(Tok::BlankLabel, start, std::move(label));
    }

    if (c == '?' && rules_mode_) {
      ++pos_;
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        name.push_back(cur());
        ++pos_;
      }
      if (name.empty())
        throw LexError{"variable name expected after '?'",
                       span_at(start, pos_ - start)};
      return make(Tok::Var, start, std::move(name));
    }

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(at(1))))) {
      std::string lex;
      if (c == '+' || c == '-') {
        lex.push_back(c);
        ++pos_;
      }
      while (std::isdigit(static_cast<unsigned char>(cur()))) {
        lex.push_back(cur());
        ++pos_;
      }
      if (cur() == '.' && std::isdigit(static_cast<unsigned char>(at(1)))) {
        lex.push_back('.');
        ++pos_;
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
          lex.push_back(cur());
          ++pos_;
        }
      }
      return make(Tok::Number, start, std::move(lex));
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == ':') {
      std::string prefix;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_' ||
             cur() == '-') {
        prefix.push_back(cur());
        ++pos_;
      }
      if (cur() != ':') {
        if (prefix == "a" && !rules_mode_) return make(Tok::A, start);
        if (rules_mode_) return make(Tok::Ident, start, std::move(prefix));
        throw LexError{"expected ':' after '" + prefix + "'",
                       span_at(start, std::max<std::size_t>(1, pos_ - start))};
      }
      ++pos_;  // ':'
      if (rules_mode_ && prefix.empty() && !std::isalnum(static_cast<unsigned char>(cur())) &&
          cur() != '_') {
        return make(Tok::Colon, start);
      }
      std::string local;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_' ||
             cur() == '-') {
        local.push_back(cur());
        ++pos_;
      }
      return make(Tok::PName, start, std::move(prefix), std::move(local));
    }

    ++pos_;  // make progress so statement resync can continue scanning
    throw LexError{std::string("unexpected character '") + c + "'",
                   span_at(start, 1)};
  }

  std::string_view text_;
  bool rules_mode_;
  std::size_t pos_ = 0;
  Token current_;
};

// --- turtle parsing ----------------------------------------------------------

struct ParseAbort {
  Diagnostic diagnostic;
};

class TurtleParser {
public:
  TurtleParser(std::string_view text, TermInterner& terms, const Vocab& vocab,
               const ParseOptions& opts)
      : lexer_(text, /*rules_mode=*/false),
        terms_(terms),
        vocab_(vocab),
        skolem_counter_(opts.skolem_start) {}

  ParseResult run() {
    ParseResult result;
    while (true) {
      try {
        if (lexer_.peek().kind == Tok::Eof) break;
        statement();
        commit_pending();
      } catch (const ParseAbort& abort) {
        result.diagnostics.push_back(abort.diagnostic);
        pending_.clear();
        pending_spans_.clear();
        resync();
      } catch (const LexError& err) {
        result.diagnostics.push_back(
            Diagnostic{Severity::Error, err.message, err.span});
        pending_.clear();
        pending_spans_.clear();
        resync();
      }
    }

    result.document.prefixes = prefixes_;
    result.document.triples = triples_;
    result.skolem_next = skolem_counter_;

    auto recognized = recognize_axioms(triples_, terms_, vocab_, &spans_);
    result.document.axioms = std::move(recognized.axioms);
    result.document.facts = std::move(recognized.facts);
    for (auto& d : recognized.diagnostics)
      result.diagnostics.push_back(std::move(d));
    return result;
  }

private:
  [[noreturn]] void fail(std::string message, SourceSpan span) {
    throw ParseAbort{Diagnostic{Severity::Error, std::move(message), span}};
  }

  Token expect(Tok kind, const char* what) {
    Token t = lexer_.take();
    if (t.kind != kind) fail(std::string("expected ") + what, t.span);
    return t;
  }

  // Skips to just past the next '.', swallowing further lexer errors.
  void resync() {
    while (true) {
      try {
        Token t = lexer_.take();
        if (t.kind == Tok::Dot || t.kind == Tok::Eof) return;
      } catch (const LexError&) {
        // keep scanning
      }
    }
  }

  void statement() {
    const Token& head = lexer_.peek();
    if (head.kind == Tok::PrefixKw) {
      lexer_.take();
      Token name = lexer_.take();
      std::string prefix;
      if (name.kind == Tok::PName && name.local.empty())
        prefix = name.text;
      else if (name.kind == Tok::Colon)
        prefix = "";
      else
        fail("expected prefix name", name.span);
      Token iri = expect(Tok::IriRef, "IRI");
      expect(Tok::Dot, "'.'");
      prefixes_[prefix] = resolve_iri(iri);
      return;
    }
    if (head.kind == Tok::BaseKw) {
      lexer_.take();
      Token iri = expect(Tok::IriRef, "IRI");
      expect(Tok::Dot, "'.'");
      base_ = resolve_iri(iri);
      return;
    }

    SourceSpan stmt_span = head.span;
    TermId subject = parse_subject();
    if (subject_was_bracket_list_ && lexer_.peek().kind == Tok::Dot) {
      // "[ ... ] ." is a complete statement.
      lexer_.take();
      return;
    }
    predicate_object_list(subject, stmt_span);
    expect(Tok::Dot, "'.'");
  }

  TermId parse_subject() {
    subject_was_bracket_list_ = false;
    const Token& t = lexer_.peek();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName:
        return parse_iri_term();
      case Tok::BlankLabel: {
        Token label = lexer_.take();
        return labeled_skolem(label.text);
      }
      case Tok::LBracket: {
        subject_was_bracket_list_ = true;
        return bracket_list();
      }
      case Tok::LParen:
        return collection();
      default:
        fail("expected subject", t.span);
    }
  }

  void predicate_object_list(TermId subject, SourceSpan stmt_span) {
    while (true) {
      TermId predicate = parse_verb();
      while (true) {
        TermId object = parse_object();
        emit(subject, predicate, object, stmt_span);
        if (lexer_.peek().kind == Tok::Comma) {
          lexer_.take();
          continue;
        }
        break;
      }
      if (lexer_.peek().kind == Tok::Semicolon) {
        lexer_.take();
        // trailing ';' before '.' or ']'
        Tok next = lexer_.peek().kind;
        if (next == Tok::Dot || next == Tok::RBracket || next == Tok::Eof)
          return;
        continue;
      }
      return;
    }
  }

  TermId parse_verb() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::A) {
      lexer_.take();
      return vocab_.rdf_type;
    }
    if (t.kind == Tok::IriRef || t.kind == Tok::PName) return parse_iri_term();
    fail("expected predicate", t.span);
  }

  TermId parse_object() {
    const Token& t = lexer_.peek();
    switch (t.kind) {
      case Tok::IriRef:
      case Tok::PName:
        return parse_iri_term();
      case Tok::BlankLabel: {
        Token label = lexer_.take();
        return labeled_skolem(label.text);
      }
      case Tok::LBracket:
        return bracket_list();
      case Tok::LParen:
        return collection();
      case Tok::String: {
        Token lit = lexer_.take();
        return terms_.intern_literal(lit.text.empty() ? std::string("")
                                                      : lit.text);
      }
      case Tok::Number: {
        Token lit = lexer_.take();
        return terms_.intern_literal(lit.text);
      }
      default:
        fail("expected object", t.span);
    }
  }

  TermId parse_iri_term() {
    Token t = lexer_.take();
    if (t.kind == Tok::IriRef) {
      std::string iri = resolve_iri(t);
      return terms_.intern_iri(std::move(iri));
    }
    auto it = prefixes_.find(t.text);
    if (it == prefixes_.end())
      fail("unknown prefix '" + t.text + ":'", t.span);
    return terms_.intern_iri(it->second + t.local);
  }

  std::string resolve_iri(const Token& t) {
    if (has_iri_scheme(t.text)) return t.text;
    if (base_.empty())
      fail("relative IRI '" + t.text + "' without @base", t.span);
    if (!t.text.empty() && t.text[0] == '#') return base_ + t.text;
    if (!base_.empty() && (base_.back() == '/' || base_.back() == '#'))
      return base_ + t.text;
    auto slash = base_.find_last_of('/');
    if (slash == std::string::npos) return base_ + t.text;
    return base_.substr(0, slash + 1) + t.text;
  }

  TermId fresh_skolem() {
    return terms_.intern_iri(std::string(kSkolemNamespace) +
                             std::to_string(skolem_counter_++));
  }

  TermId labeled_skolem(const std::string& label) {
    auto [it, fresh] = labels_.emplace(label, 0);
    if (fresh) it->second = fresh_skolem();
    return it->second;
  }

  TermId bracket_list() {
    Token open = expect(Tok::LBracket, "'['");
    TermId node = fresh_skolem();
    if (lexer_.peek().kind == Tok::RBracket) {
      lexer_.take();
      return node;
    }
    predicate_object_list(node, open.span);
    expect(Tok::RBracket, "']'");
    return node;
  }

  TermId collection() {
    Token open = expect(Tok::LParen, "'('");
    std::vector<TermId> items;
    while (lexer_.peek().kind != Tok::RParen) {
      if (lexer_.peek().kind == Tok::Eof)
        fail("unterminated collection", open.span);
      items.push_back(parse_object());
    }
    lexer_.take();  // ')'
    if (items.empty()) return vocab_.rdf_nil;
    std::vector<TermId> nodes;
    nodes.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) nodes.push_back(fresh_skolem());
    for (std::size_t i = 0; i < items.size(); ++i) {
      emit(nodes[i], vocab_.rdf_first, items[i], open.span);
      emit(nodes[i], vocab_.rdf_rest,
           i + 1 < items.size() ? nodes[i + 1] : vocab_.rdf_nil, open.span);
    }
    return nodes.front();
  }

  void emit(TermId s, TermId p, TermId o, SourceSpan span) {
    pending_.push_back(Triple{s, p, o});
    pending_spans_.push_back(span);
  }

  void commit_pending() {
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      triples_.push_back(pending_[i]);
      spans_.push_back(pending_spans_[i]);
    }
    pending_.clear();
    pending_spans_.clear();
  }

  Lexer lexer_;
  TermInterner& terms_;
  const Vocab& vocab_;
  PrefixMap prefixes_;
  std::string base_;
  std::unordered_map<std::string, TermId> labels_;
  std::vector<Triple> triples_;
  std::vector<SourceSpan> spans_;
  std::vector<Triple> pending_;
  std::vector<SourceSpan> pending_spans_;
  std::uint64_t skolem_counter_;
  bool subject_was_bracket_list_ = false;
};

// --- axiom recognition ---------------------------------------------------------

class AxiomRecognizer {
public:
  AxiomRecognizer(const std::vector<Triple>& triples, const TermInterner& terms,
                  const Vocab& vocab, const std::vector<SourceSpan>* spans)
      : triples_(triples), terms_(terms), vocab_(vocab), spans_(spans) {
    for (std::size_t i = 0; i < triples_.size(); ++i) {
      index_.insert(triples_[i], TripleFlag::Asserted);
      if (spans_ && !span_of_.count(triples_[i]))
        span_of_[triples_[i]] = (*spans_)[i];
    }
  }

  RecognizeResult run() {
    for (const Triple& t : triples_) {
      if (consumed_.count(t)) continue;
      recognize(t);
    }
    for (const Triple& t : triples_) {
      if (consumed_.count(t)) continue;
      if (seen_as_fact_.count(t)) continue;
      seen_as_fact_.insert(t);
      warn_if_unrecognized_vocab(t);
      result_.facts.push_back(t);
    }
    return std::move(result_);
  }

private:
  std::optional<SourceSpan> span_of(const Triple& t) const {
    auto it = span_of_.find(t);
    if (it == span_of_.end()) return std::nullopt;
    return it->second;
  }

  void error_at(const Triple& t, std::string message) {
    errored_.insert(t);
    result_.diagnostics.push_back(
        Diagnostic{Severity::Error, std::move(message), span_of(t)});
  }

  void warn_at(const Triple& t, std::string message) {
    result_.diagnostics.push_back(
        Diagnostic{Severity::Warning, std::move(message), span_of(t)});
  }

  bool is_named_class_term(TermId id) const {
    const Term& term = terms_.resolve(id);
    return term.kind == TermKind::Iri && !is_skolem_iri(term.lexical);
  }

  std::vector<TermId> objects_of(TermId s, TermId p) const {
    std::vector<TermId> out;
    index_.for_each_match(TriplePattern{s, p, std::nullopt},
                          [&](const Triple& t) { out.push_back(t.o); });
    return out;
  }

  void recognize(const Triple& t) {
    if (t.p == vocab_.rdf_type && t.o == vocab_.owl_transitive_property) {
      consumed_.insert(t);
      result_.axioms.push_back(TransitivePropertyAxiom{t.s});
      return;
    }
    if (t.p == vocab_.owl_inverse_of) {
      if (is_named_class_term(t.s) && is_named_class_term(t.o)) {
        consumed_.insert(t);
        result_.axioms.push_back(InversePropertiesAxiom{t.s, t.o});
      } else {
        warn_at(t, "owl:inverseOf with non-named operand kept as plain fact");
      }
      return;
    }
    if (t.p == vocab_.rdfs_sub_property_of) {
      if (is_named_class_term(t.s) && is_named_class_term(t.o)) {
        consumed_.insert(t);
        result_.axioms.push_back(SubPropertyOfAxiom{t.s, t.o});
      } else {
        warn_at(t,
                "rdfs:subPropertyOf with non-named operand kept as plain fact");
      }
      return;
    }
    if (t.p == vocab_.rdfs_sub_class_of) {
      if (is_named_class_term(t.s) && is_named_class_term(t.o)) {
        consumed_.insert(t);
        result_.axioms.push_back(SubClassOfAxiom{t.s, t.o});
      } else {
        warn_at(t, "rdfs:subClassOf with non-named operand kept as plain fact");
      }
      return;
    }
    if (t.p == vocab_.owl_property_chain_axiom) {
      std::set<Triple> tentative{t};
      auto links = walk_list(t.o, t, tentative);
      if (!links) return;
      if (links->size() < 2) {
        error_at(t, "property chain needs at least two links");
        return;
      }
      for (TermId link : *links) {
        if (!is_named_class_term(link)) {
          error_at(t, "property chain link must be a named property");
          return;
        }
      }
      consumed_.insert(tentative.begin(), tentative.end());
      result_.axioms.push_back(PropertyChainAxiom{*links, t.s});
      return;
    }
    if (t.p == vocab_.owl_equivalent_class) {
      const Term& left = terms_.resolve(t.s);
      if (left.kind != TermKind::Iri || is_skolem_iri(left.lexical)) {
        error_at(t, "owl:equivalentClass with complex left side unsupported");
        return;
      }
      std::set<Triple> tentative{t};
      auto expr = parse_expression(t.o, t, tentative);
      if (!expr) return;
      consumed_.insert(tentative.begin(), tentative.end());
      result_.axioms.push_back(EquivalentToAxiom{t.s, std::move(*expr)});
      return;
    }
  }

  std::optional<std::vector<TermId>> walk_list(TermId head, const Triple& origin,
                                               std::set<Triple>& tentative) {
    std::vector<TermId> items;
    TermId node = head;
    std::set<TermId> visited;
    while (node != vocab_.rdf_nil) {
      if (!visited.insert(node).second) {
        error_at(origin, "malformed RDF collection (cycle)");
        return std::nullopt;
      }
      auto firsts = objects_of(node, vocab_.rdf_first);
      auto rests = objects_of(node, vocab_.rdf_rest);
      if (firsts.size() != 1 || rests.size() != 1) {
        error_at(origin, "malformed RDF collection");
        return std::nullopt;
      }
      items.push_back(firsts[0]);
      tentative.insert(Triple{node, vocab_.rdf_first, firsts[0]});
      tentative.insert(Triple{node, vocab_.rdf_rest, rests[0]});
      node = rests[0];
    }
    return items;
  }

  std::optional<ClassExpression> parse_expression(TermId node,
                                                  const Triple& origin,
                                                  std::set<Triple>& tentative) {
    const Term& term = terms_.resolve(node);
    if (term.kind == TermKind::Literal) {
      error_at(origin, "literal cannot appear as a class expression");
      return std::nullopt;
    }
    if (!is_skolem_iri(term.lexical))
      return ClassExpression::named_class(node);

    auto intersections = objects_of(node, vocab_.owl_intersection_of);
    if (!intersections.empty()) {
      if (intersections.size() != 1) {
        error_at(origin, "multiple owl:intersectionOf lists on one node");
        return std::nullopt;
      }
      tentative.insert(Triple{node, vocab_.owl_intersection_of, intersections[0]});
      auto items = walk_list(intersections[0], origin, tentative);
      if (!items) return std::nullopt;
      if (items->size() < 2) {
        error_at(origin, "intersection needs at least two conjuncts");
        return std::nullopt;
      }
      std::vector<ClassExpression> conjuncts;
      for (TermId item : *items) {
        auto sub = parse_expression(item, origin, tentative);
        if (!sub) return std::nullopt;
        conjuncts.push_back(std::move(*sub));
      }
      return ClassExpression::intersection_of(std::move(conjuncts));
    }

    auto on_props = objects_of(node, vocab_.owl_on_property);
    auto some_values = objects_of(node, vocab_.owl_some_values_from);
    bool typed_restriction = false;
    for (TermId o : objects_of(node, vocab_.rdf_type))
      if (o == vocab_.owl_restriction) typed_restriction = true;
    if (typed_restriction || !on_props.empty() || !some_values.empty()) {
      if (on_props.size() != 1) {
        error_at(origin, "restriction missing owl:onProperty");
        return std::nullopt;
      }
      if (some_values.size() != 1) {
        error_at(origin, "restriction without owl:someValuesFrom unsupported");
        return std::nullopt;
      }
      if (!is_named_class_term(some_values[0])) {
        error_at(origin, "complex filler unsupported");
        return std::nullopt;
      }
      if (typed_restriction)
        tentative.insert(Triple{node, vocab_.rdf_type, vocab_.owl_restriction});
      tentative.insert(Triple{node, vocab_.owl_on_property, on_props[0]});
      tentative.insert(
          Triple{node, vocab_.owl_some_values_from, some_values[0]});
      return ClassExpression::some(on_props[0], some_values[0]);
    }

    error_at(origin, "unsupported class expression");
    return std::nullopt;
  }

  void warn_if_unrecognized_vocab(const Triple& t) {
    if (errored_.count(t)) return;  // reported already
    const Term& p = terms_.resolve(t.p);
    const Term& o = terms_.resolve(t.o);
    bool vocab_pred = in_namespace(p.lexical, kOwlNs) ||
                      in_namespace(p.lexical, kRdfsNs);
    bool owl_object = t.p == vocab_.rdf_type && o.kind == TermKind::Iri &&
                      in_namespace(o.lexical, kOwlNs);
    if (vocab_pred || owl_object)
      warn_at(t, "unrecognized vocabulary triple kept as plain fact: " +
                     p.lexical);
  }

  const std::vector<Triple>& triples_;
  const TermInterner& terms_;
  const Vocab& vocab_;
  const std::vector<SourceSpan>* spans_;
  TripleStore index_;
  std::map<Triple, SourceSpan> span_of_;
  std::set<Triple> consumed_;
  std::set<Triple> seen_as_fact_;
  std::set<Triple> errored_;
  RecognizeResult result_;
};

// --- rule parsing ----------------------------------------------------------------

class RulesParser {
public:
  RulesParser(std::string_view text, TermInterner& terms,
              const PrefixMap& base_prefixes)
      : lexer_(text, /*rules_mode=*/true),
        terms_(terms),
        prefixes_(base_prefixes) {}

  RulesParseResult run() {
    RulesParseResult result;
    while (true) {
      try {
        const Token& head = lexer_.peek();
        if (head.kind == Tok::Eof) break;
        if (head.kind == Tok::PrefixKw) {
          prefix_directive();
          continue;
        }
        HornRule rule = rule_statement();
        auto safety = validate({}, {rule});
        if (!safety.empty()) {
          for (auto& d : safety) {
            d.span = rule_span_;
            result.diagnostics.push_back(std::move(d));
          }
          continue;
        }
        result.rules.push_back(std::move(rule));
      } catch (const ParseAbort& abort) {
        result.diagnostics.push_back(abort.diagnostic);
        resync();
      } catch (const LexError& err) {
        result.diagnostics.push_back(
            Diagnostic{Severity::Error, err.message, err.span});
        resync();
      }
    }
    result.prefixes = prefixes_;
    return result;
  }

private:
  [[noreturn]] void fail(std::string message, SourceSpan span) {
    throw ParseAbort{Diagnostic{Severity::Error, std::move(message), span}};
  }

  Token expect(Tok kind, const char* what) {
    Token t = lexer_.take();
    if (t.kind != kind) fail(std::string("expected ") + what, t.span);
    return t;
  }

  void resync() {
    while (true) {
      try {
        Token t = lexer_.take();
        if (t.kind == Tok::Dot || t.kind == Tok::Eof) return;
      } catch (const LexError&) {
      }
    }
  }

  void prefix_directive() {
    lexer_.take();  // @prefix
    Token name = lexer_.take();
    std::string prefix;
    if (name.kind == Tok::PName && name.local.empty())
      prefix = name.text;
    else if (name.kind == Tok::Colon)
      prefix = "";
    else
      fail("expected prefix name", name.span);
    Token iri = expect(Tok::IriRef, "IRI");
    expect(Tok::Dot, "'.'");
    if (!has_iri_scheme(iri.text))
      fail("prefix IRI must be absolute", iri.span);
    prefixes_[prefix] = iri.text;
  }

  HornRule rule_statement() {
    Token kw = lexer_.take();
    if (kw.kind != Tok::Ident || kw.text != "rule")
      fail("expected 'rule'", kw.span);
    rule_span_ = kw.span;
    Token name = expect(Tok::String, "rule name string");
    expect(Tok::Colon, "':'");

    HornRule rule;
    rule.name = name.text;
    rule.body.push_back(atom());
    while (lexer_.peek().kind == Tok::Comma) {
      lexer_.take();
      rule.body.push_back(atom());
    }
    expect(Tok::Arrow, "'->'");
    rule.head = atom();
    expect(Tok::Dot, "'.'");
    return rule;
  }

  RuleAtom atom() {
    Token pred = lexer_.take();
    TermId predicate = 0;
    if (pred.kind == Tok::PName) {
      auto it = prefixes_.find(pred.text);
      if (it == prefixes_.end())
        fail("unknown prefix '" + pred.text + ":'", pred.span);
      predicate = terms_.intern_iri(it->second + pred.local);
    } else if (pred.kind == Tok::IriRef) {
      if (!has_iri_scheme(pred.text)) fail("IRI must be absolute", pred.span);
      predicate = terms_.intern_iri(pred.text);
    } else {
      fail("expected atom predicate", pred.span);
    }
    expect(Tok::LParen, "'('");
    Token v1 = expect(Tok::Var, "variable");
    RuleAtom out;
    out.predicate = predicate;
    out.var1 = v1.text;
    if (lexer_.peek().kind == Tok::Comma) {
      lexer_.take();
      Token v2 = expect(Tok::Var, "variable");
      out.kind = RuleAtom::Kind::Property;
      out.var2 = v2.text;
    } else {
      out.kind = RuleAtom::Kind::Class;
    }
    expect(Tok::RParen, "')'");
    return out;
  }

  Lexer lexer_;
  TermInterner& terms_;
  PrefixMap prefixes_;
  SourceSpan rule_span_;
};

}  // namespace

ParseResult parse_turtle(std::string_view text, TermInterner& terms,
                         const Vocab& vocab, const ParseOptions& opts) {
  return TurtleParser(text, terms, vocab, opts).run();
}

RecognizeResult recognize_axioms(const std::vector<Triple>& triples,
                                 const TermInterner& terms, const Vocab& vocab,
                                 const std::vector<SourceSpan>* spans) {
  return AxiomRecognizer(triples, terms, vocab, spans).run();
}

RulesParseResult parse_rules(std::string_view text, TermInterner& terms,
                             const PrefixMap& base_prefixes) {
  return RulesParser(text, terms, base_prefixes).run();
}

std::string compact_iri(const std::string& iri, const PrefixMap& prefixes) {
  const std::string* best_prefix = nullptr;
  const std::string* best_ns = nullptr;
  for (const auto& [prefix, ns] : prefixes) {
    if (iri.size() < ns.size() || iri.compare(0, ns.size(), ns) != 0) continue;
    if (best_ns && ns.size() <= best_ns->size()) continue;
    std::string_view local(iri.data() + ns.size(), iri.size() - ns.size());
    if (!pname_local_ok(local)) continue;
    best_prefix = &prefix;
    best_ns = &ns;
  }
  if (!best_prefix) return "<" + iri + ">";
  return *best_prefix + ":" + iri.substr(best_ns->size());
}

std::string render_term(const Term& term, const PrefixMap& prefixes) {
  if (term.kind == TermKind::Literal) {
    std::string out = "\"";
    for (char c : term.lexical) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
      }
    }
    out.push_back('"');
    return out;
  }
  return compact_iri(term.lexical, prefixes);
}

}  // namespace capakb
