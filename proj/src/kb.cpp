#include "capakb/kb.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "capakb/errors.hpp"

namespace capakb {

KnowledgeBase::KnowledgeBase() { vocab_ = Vocab::standard(terms_); }

void KnowledgeBase::add_prefixes(const PrefixMap& prefixes) {
  for (const auto& [prefix, iri] : prefixes) prefixes_[prefix] = iri;
}

std::vector<Diagnostic> KnowledgeBase::load_ontology(std::string_view text) {
  ParseOptions opts;
  opts.skolem_start = skolem_counter_;
  ParseResult result = parse_turtle(text, terms_, vocab_, opts);
  skolem_counter_ = result.skolem_next;
  add_prefixes(result.document.prefixes);
  for (const Triple& t : result.document.triples) {
    if (store_.insert(t, TripleFlag::Asserted)) prov_.note_inserted(t);
  }
  for (Axiom& axiom : result.document.axioms)
    axioms_.push_back(std::move(axiom));
  compiled_ = false;
  materialized_ = false;
  return result.diagnostics;
}

std::vector<Diagnostic> KnowledgeBase::load_rules(std::string_view text) {
  RulesParseResult result = parse_rules(text, terms_, prefixes_);
  add_prefixes(result.prefixes);
  for (HornRule& rule : result.rules) rules_.push_back(std::move(rule));
  compiled_ = false;
  materialized_ = false;
  return result.diagnostics;
}

void KnowledgeBase::add_axiom(Axiom axiom) {
  axioms_.push_back(std::move(axiom));
  compiled_ = false;
  materialized_ = false;
}

void KnowledgeBase::add_rule(HornRule rule) {
  rules_.push_back(std::move(rule));
  compiled_ = false;
  materialized_ = false;
}

void KnowledgeBase::add_fact(const Triple& t) {
  if (!terms_.is_iri(t.p))
    throw KbError("triple predicate must be an IRI");
  if (store_.insert(t, TripleFlag::Asserted)) prov_.note_inserted(t);
  materialized_ = false;
}

std::vector<Diagnostic> KnowledgeBase::compile_program() {
  CompileResult result = compile(axioms_, rules_, vocab_.core(), terms_);
  if (result.ok()) {
    program_ = std::move(result.program);
    compiled_ = true;
  }
  return result.diagnostics;
}

MaterializationStats KnowledgeBase::materialize() {
  if (!compiled_) throw KbError("materialize requires a compiled program");
  MaterializationStats stats =
      capakb::materialize(store_, program_, prov_, engine_options_);
  materialized_ = true;
  return stats;
}

void KnowledgeBase::ensure_materialized(const char* op) const {
  if (!materialized_)
    throw KbError(std::string(op) + " requires a materialized knowledge base");
}

DeltaReport KnowledgeBase::assert_fact(const Triple& t) {
  return assert_all({t});
}

DeltaReport KnowledgeBase::assert_all(const std::vector<Triple>& ts) {
  ensure_materialized("assert");
  auto started = std::chrono::steady_clock::now();
  DeltaReport report;

  std::vector<Triple> fresh;
  for (const Triple& t : ts) {
    if (!terms_.is_iri(t.p))
      throw KbError("triple predicate must be an IRI");
    if (auto flag = store_.flag_of(t)) {
      // Present already; asserting a derived fact just upgrades its flag.
      if (*flag == TripleFlag::Derived) store_.insert(t, TripleFlag::Asserted);
      continue;
    }
    store_.insert(t, TripleFlag::Asserted);
    prov_.note_inserted(t);
    fresh.push_back(t);
  }
  if (!fresh.empty()) {
    std::vector<Triple> derived;
    materialize_delta(store_, program_, prov_, fresh, &derived,
                      engine_options_);
    report.added = std::move(fresh);
    report.added.insert(report.added.end(), derived.begin(), derived.end());
    std::sort(report.added.begin(), report.added.end());
    report.added.erase(
        std::unique(report.added.begin(), report.added.end()),
        report.added.end());
  }
  report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  return report;
}

DeltaReport KnowledgeBase::retract_fact(const Triple& t) {
  return retract_batch({t});
}

DeltaReport KnowledgeBase::retract_all(const std::vector<Triple>& ts) {
  return retract_batch(ts);
}

DeltaReport KnowledgeBase::retract_batch(const std::vector<Triple>& ts) {
  ensure_materialized("retract");
  auto started = std::chrono::steady_clock::now();
  DeltaReport report;

  std::vector<Triple> targets;
  for (const Triple& t : ts) {
    auto flag = store_.flag_of(t);
    if (!flag) continue;  // retracting an absent fact is a no-op
    if (*flag == TripleFlag::Derived)
      throw KbError(
          "cannot retract derived fact; retract its asserted supports");
    targets.push_back(t);
  }
  if (targets.empty()) {
    report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - started);
    return report;
  }

  // Overdelete: drop the targets, then transitively every derived fact with
  // an invalidated support. This deletes too much on purpose; the next phase
  // restores whatever the surviving facts still justify.
  std::set<Triple> deleted;
  std::vector<Triple> work;
  for (const Triple& t : targets) {
    store_.erase(t);
    prov_.note_removed(t);
    deleted.insert(t);
    work.push_back(t);
  }
  while (!work.empty()) {
    Triple f = work.back();
    work.pop_back();
    std::vector<ProvenanceIndex::SupportId> uses(prov_.used_by(f).begin(),
                                                 prov_.used_by(f).end());
    for (auto sid : uses) {
      Triple g = prov_.get(sid).fact;
      prov_.remove(sid);
      if (deleted.count(g)) continue;
      auto flag = store_.flag_of(g);
      if (flag && *flag == TripleFlag::Derived) {
        store_.erase(g);
        prov_.note_removed(g);
        deleted.insert(g);
        work.push_back(g);
      }
    }
  }

  // Rederive pass 1: every recorded support whose premises all survived
  // brings its fact straight back (the all-supports index makes this exact
  // for one-step derivations from the border).
  std::set<Triple> rederived;
  std::vector<Triple> seed;
  for (const Triple& f : deleted) {
    if (store_.contains(f)) continue;
    std::vector<ProvenanceIndex::SupportId> ids(prov_.supports_of(f).begin(),
                                                prov_.supports_of(f).end());
    for (auto sid : ids) {
      const Support& s = prov_.get(sid);
      bool alive = true;
      for (const Triple& premise : s.premises) {
        if (!store_.contains(premise)) {
          alive = false;
          break;
        }
      }
      if (alive) {
        store_.insert(f, TripleFlag::Derived);
        prov_.note_inserted(f);
        rederived.insert(f);
        seed.push_back(f);
        break;
      }
    }
  }

  // Rederive pass 2: semi-naive rounds seeded with the restored facts pick
  // up everything reachable through them again.
  if (!seed.empty()) {
    std::vector<Triple> extra;
    materialize_delta(store_, program_, prov_, seed, &extra, engine_options_);
    for (const Triple& t : extra) {
      assert(deleted.count(t));
      rederived.insert(t);
    }
  }

  // Purge supports that still reference retracted facts.
  for (const Triple& f : deleted) {
    bool present = store_.contains(f);
    std::vector<ProvenanceIndex::SupportId> ids(prov_.supports_of(f).begin(),
                                                prov_.supports_of(f).end());
    for (auto sid : ids) {
      if (!present) {
        prov_.remove(sid);
        continue;
      }
      const Support& s = prov_.get(sid);
      for (const Triple& premise : s.premises) {
        if (!store_.contains(premise)) {
          prov_.remove(sid);
          break;
        }
      }
    }
  }

  for (const Triple& f : deleted)
    if (!rederived.count(f)) report.removed.push_back(f);
  report.rederived.assign(rederived.begin(), rederived.end());
  report.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  return report;
}

MaterializationStats KnowledgeBase::rebuild() {
  if (!compiled_) throw KbError("rebuild requires a compiled program");
  for (const Triple& t : store_.triples_with_flag(TripleFlag::Derived))
    store_.erase(t);
  prov_.clear();
  for (const Triple& t : store_.triples()) prov_.note_inserted(t);
  MaterializationStats stats =
      capakb::materialize(store_, program_, prov_, engine_options_);
  materialized_ = true;
  return stats;
}

std::string KnowledgeBase::rule_name(std::uint32_t rule_index) const {
  if (rule_index >= program_.rules.size())
    throw KbError("rule index out of range");
  return program_.rules[rule_index].name;
}

}  // namespace capakb
