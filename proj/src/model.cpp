#include "capakb/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "capakb/errors.hpp"

namespace capakb {

ClassExpression ClassExpression::named_class(TermId cls) {
  ClassExpression e;
  e.kind = Kind::Named;
  e.named = cls;
  return e;
}

ClassExpression ClassExpression::some(TermId property, TermId filler) {
  ClassExpression e;
  e.kind = Kind::SomeValuesFrom;
  e.property = property;
  e.filler = filler;
  return e;
}

ClassExpression ClassExpression::intersection_of(
    std::vector<ClassExpression> conjuncts) {
  ClassExpression e;
  e.kind = Kind::Intersection;
  e.conjuncts = std::move(conjuncts);
  return e;
}

ClassExpression ClassExpression::normalized() const {
  if (kind != Kind::Intersection) return *this;
  ClassExpression out;
  out.kind = Kind::Intersection;
  for (const auto& c : conjuncts) {
    if (c.kind == Kind::Intersection)
      out.conjuncts.insert(out.conjuncts.end(), c.conjuncts.begin(),
                           c.conjuncts.end());
    else
      out.conjuncts.push_back(c);
  }
  return out;
}

std::string local_name(const TermInterner& terms, TermId id) {
  const std::string& iri = terms.resolve(id).lexical;
  auto pos = iri.find_last_of("#/");
  if (pos == std::string::npos || pos + 1 >= iri.size()) return iri;
  return iri.substr(pos + 1);
}

namespace {

Diagnostic error(std::string message) {
  return Diagnostic{Severity::Error, std::move(message), std::nullopt};
}

void validate_expression(const ClassExpression& raw,
                         std::vector<Diagnostic>& out) {
  ClassExpression expr = raw.normalized();
  switch (expr.kind) {
    case ClassExpression::Kind::Named:
      break;
    case ClassExpression::Kind::SomeValuesFrom:
      // Fillers are TermIds by construction; complex fillers are rejected
      // while recognizing triples, so nothing further to check here.
      break;
    case ClassExpression::Kind::Intersection: {
      if (expr.conjuncts.size() < 2)
        out.push_back(error("intersection needs at least two conjuncts"));
      for (const auto& c : expr.conjuncts) {
        if (c.kind == ClassExpression::Kind::Intersection)
          out.push_back(
              error("nested intersections beyond one flattening level"));
      }
      break;
    }
  }
}

void validate_rule(const HornRule& rule, std::vector<Diagnostic>& out) {
  std::set<std::string> body_vars;
  for (const auto& atom : rule.body) {
    body_vars.insert(atom.var1);
    if (atom.kind == RuleAtom::Kind::Property) body_vars.insert(atom.var2);
  }
  auto check = [&](const std::string& v) {
    if (!body_vars.count(v))
      out.push_back(error("unsafe rule '" + rule.name + "': head variable ?" +
                          v + " does not occur in the body"));
  };
  check(rule.head.var1);
  if (rule.head.kind == RuleAtom::Kind::Property) check(rule.head.var2);
}

// --- program assembly -------------------------------------------------------

class ProgramBuilder {
public:
  ProgramBuilder(const CoreVocab& vocab, const TermInterner& terms)
      : vocab_(vocab), terms_(terms) {}

  InferenceProgram take() { return std::move(program_); }

  void add(std::string name, std::vector<AtomPattern> body, AtomPattern head,
           RuleOrigin origin) {
    CompiledRule rule;
    rule.name = unique_name(std::move(name));
    rule.body = std::move(body);
    rule.head = head;
    rule.origin = origin;
    std::uint32_t max_var = 0;
    bool any_var = false;
    auto scan = [&](const AtomPattern& a) {
      for (const PatternTerm* t : {&a.s, &a.p, &a.o})
        if (t->is_var) {
          any_var = true;
          max_var = std::max(max_var, t->var);
        }
    };
    for (const auto& a : rule.body) scan(a);
    scan(rule.head);
    rule.var_count = any_var ? max_var + 1 : 0;
    program_.rules.push_back(std::move(rule));
  }

  void builtins() {
    const auto x = PatternTerm::variable(0);
    const auto c = PatternTerm::variable(1);
    const auto d = PatternTerm::variable(2);
    const auto type = PatternTerm::term(vocab_.rdf_type);
    const auto sub = PatternTerm::term(vocab_.rdfs_sub_class_of);
    add("type-inheritance", {{x, type, c}, {c, sub, d}}, {x, type, d},
        RuleOrigin::Builtin);
    add("subclass-transitivity", {{x, sub, c}, {c, sub, d}}, {x, sub, d},
        RuleOrigin::Builtin);
  }

  void lower(const SubClassOfAxiom& ax) {
    // Ground seed so the hierarchy is visible to the builtin rules even for
    // programmatically staged axioms.
    add("subclass(" + name(ax.sub) + "," + name(ax.sup) + ")", {},
        {PatternTerm::term(ax.sub), PatternTerm::term(vocab_.rdfs_sub_class_of),
         PatternTerm::term(ax.sup)},
        RuleOrigin::Axiom);
  }

  void lower(const TransitivePropertyAxiom& ax) {
    const auto x = PatternTerm::variable(0);
    const auto y = PatternTerm::variable(1);
    const auto z = PatternTerm::variable(2);
    const auto p = PatternTerm::term(ax.property);
    add("transitive(" + name(ax.property) + ")", {{x, p, y}, {y, p, z}},
        {x, p, z}, RuleOrigin::Axiom);
  }

  void lower(const InversePropertiesAxiom& ax) {
    const auto x = PatternTerm::variable(0);
    const auto y = PatternTerm::variable(1);
    const auto p = PatternTerm::term(ax.p);
    const auto q = PatternTerm::term(ax.q);
    add("inverse(" + name(ax.p) + "," + name(ax.q) + ")", {{x, p, y}},
        {y, q, x}, RuleOrigin::Axiom);
    add("inverse(" + name(ax.q) + "," + name(ax.p) + ")", {{x, q, y}},
        {y, p, x}, RuleOrigin::Axiom);
  }

  void lower(const SubPropertyOfAxiom& ax) {
    const auto x = PatternTerm::variable(0);
    const auto y = PatternTerm::variable(1);
    add("subproperty(" + name(ax.sub) + "," + name(ax.sup) + ")",
        {{x, PatternTerm::term(ax.sub), y}}, {x, PatternTerm::term(ax.sup), y},
        RuleOrigin::Axiom);
  }

  void lower(const PropertyChainAxiom& ax) {
    std::vector<AtomPattern> body;
    for (std::size_t i = 0; i < ax.chain.size(); ++i) {
      body.push_back({PatternTerm::variable(static_cast<std::uint32_t>(i)),
                      PatternTerm::term(ax.chain[i]),
                      PatternTerm::variable(static_cast<std::uint32_t>(i + 1))});
    }
    add("chain(" + name(ax.implies) + ")", std::move(body),
        {PatternTerm::variable(0), PatternTerm::term(ax.implies),
         PatternTerm::variable(static_cast<std::uint32_t>(ax.chain.size()))},
        RuleOrigin::Axiom);
  }

  void lower(const EquivalentToAxiom& ax) {
    const ClassExpression expr = ax.expr.normalized();
    const auto type = PatternTerm::term(vocab_.rdf_type);
    const auto sub = PatternTerm::term(vocab_.rdfs_sub_class_of);
    const auto x = PatternTerm::variable(0);

    // Recognition: conjunct tests imply membership in the defined class.
    std::vector<AtomPattern> body;
    std::uint32_t next_var = 1;
    auto add_conjunct = [&](const ClassExpression& c) {
      if (c.kind == ClassExpression::Kind::Named) {
        body.push_back({x, type, PatternTerm::term(c.named)});
      } else {
        auto y = PatternTerm::variable(next_var++);
        body.push_back({x, PatternTerm::term(c.property), y});
        body.push_back({y, type, PatternTerm::term(c.filler)});
      }
    };
    if (expr.kind == ClassExpression::Kind::Intersection)
      for (const auto& c : expr.conjuncts) add_conjunct(c);
    else
      add_conjunct(expr);
    add("recognize(" + name(ax.cls) + ")", std::move(body),
        {x, type, PatternTerm::term(ax.cls)}, RuleOrigin::Axiom);

    // Membership in the defined class implies each named conjunct.
    if (expr.kind == ClassExpression::Kind::Intersection) {
      for (const auto& c : expr.conjuncts) {
        if (c.kind != ClassExpression::Kind::Named) continue;
        add("decompose(" + name(ax.cls) + "," + name(c.named) + ")",
            {{x, type, PatternTerm::term(ax.cls)}},
            {x, type, PatternTerm::term(c.named)}, RuleOrigin::Axiom);
        add("equiv-subclass(" + name(ax.cls) + "," + name(c.named) + ")", {},
            {PatternTerm::term(ax.cls), sub, PatternTerm::term(c.named)},
            RuleOrigin::Axiom);
      }
    } else if (expr.kind == ClassExpression::Kind::Named) {
      add("equiv-subclass(" + name(ax.cls) + "," + name(expr.named) + ")", {},
          {PatternTerm::term(ax.cls), sub, PatternTerm::term(expr.named)},
          RuleOrigin::Axiom);
      add("equiv-subclass(" + name(expr.named) + "," + name(ax.cls) + ")", {},
          {PatternTerm::term(expr.named), sub, PatternTerm::term(ax.cls)},
          RuleOrigin::Axiom);
    }
  }

  void lower(const HornRule& rule) {
    std::map<std::string, std::uint32_t> vars;
    auto var_of = [&](const std::string& v) {
      auto [it, fresh] =
          vars.emplace(v, static_cast<std::uint32_t>(vars.size()));
      (void)fresh;
      return PatternTerm::variable(it->second);
    };
    auto pattern_of = [&](const RuleAtom& atom) {
      if (atom.kind == RuleAtom::Kind::Class)
        return AtomPattern{var_of(atom.var1), PatternTerm::term(vocab_.rdf_type),
                           PatternTerm::term(atom.predicate)};
      return AtomPattern{var_of(atom.var1), PatternTerm::term(atom.predicate),
                         var_of(atom.var2)};
    };
    std::vector<AtomPattern> body;
    for (const auto& atom : rule.body) body.push_back(pattern_of(atom));
    AtomPattern head = pattern_of(rule.head);
    add(rule.name, std::move(body), head, RuleOrigin::UserRule);
  }

private:
  std::string name(TermId id) const { return local_name(terms_, id); }

  std::string unique_name(std::string base) {
    auto [it, fresh] = used_names_.emplace(base, 1);
    if (fresh) return base;
    it->second += 1;
    return base + "/" + std::to_string(it->second);
  }

  const CoreVocab& vocab_;
  const TermInterner& terms_;
  InferenceProgram program_;
  std::map<std::string, int> used_names_;
};

}  // namespace

std::vector<Diagnostic> validate(const std::vector<Axiom>& axioms,
                                 const std::vector<HornRule>& user_rules) {
  std::vector<Diagnostic> out;
  for (const auto& axiom : axioms) {
    if (const auto* eq = std::get_if<EquivalentToAxiom>(&axiom)) {
      validate_expression(eq->expr, out);
    } else if (const auto* chain = std::get_if<PropertyChainAxiom>(&axiom)) {
      if (chain->chain.size() < 2)
        out.push_back(error("property chain needs at least two links"));
      if (std::find(chain->chain.begin(), chain->chain.end(),
                    chain->implies) != chain->chain.end())
        out.push_back(
            error("property chain mentions its own implied property"));
    }
  }
  for (const auto& rule : user_rules) validate_rule(rule, out);
  return out;
}

bool CompileResult::ok() const { return !has_errors(diagnostics); }

CompileResult compile(const std::vector<Axiom>& axioms,
                      const std::vector<HornRule>& user_rules,
                      const CoreVocab& vocab, const TermInterner& terms) {
  CompileResult result;
  result.diagnostics = validate(axioms, user_rules);
  if (has_errors(result.diagnostics)) return result;

  ProgramBuilder builder(vocab, terms);
  builder.builtins();
  for (const auto& axiom : axioms)
    std::visit([&](const auto& ax) { builder.lower(ax); }, axiom);
  for (const auto& rule : user_rules) builder.lower(rule);
  result.program = builder.take();
  return result;
}

}  // namespace capakb
