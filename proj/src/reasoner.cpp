#include "capakb/reasoner.hpp"

#include <algorithm>

#include "capakb/errors.hpp"

namespace capakb {

namespace {

using Bindings = std::vector<std::optional<TermId>>;

TriplePattern to_pattern(const AtomPattern& atom, const Bindings& binds) {
  auto part = [&](const PatternTerm& t) -> std::optional<TermId> {
    if (!t.is_var) return t.constant;
    return binds[t.var];
  };
  return TriplePattern{part(atom.s), part(atom.p), part(atom.o)};
}

Triple instantiate_head(const AtomPattern& head, const Bindings& binds) {
  auto part = [&](const PatternTerm& t) -> TermId {
    if (!t.is_var) return t.constant;
    return *binds[t.var];  // range restriction guarantees a value
  };
  return Triple{part(head.s), part(head.p), part(head.o)};
}

// At most three variables bind per atom; a stack buffer keeps the hot path
// allocation-free.
struct BoundVars {
  std::uint32_t vars[3];
  std::size_t count = 0;
};

// Binds the atom's variables against a matched triple; repeated variables
// within one atom must agree. Rolls back on mismatch.
bool bind_atom(const AtomPattern& atom, const Triple& t, Bindings& binds,
               BoundVars& bound_here) {
  auto try_bind = [&](const PatternTerm& pt, TermId value) {
    if (!pt.is_var) return pt.constant == value;
    if (binds[pt.var]) return *binds[pt.var] == value;
    binds[pt.var] = value;
    bound_here.vars[bound_here.count++] = pt.var;
    return true;
  };
  if (try_bind(atom.s, t.s) && try_bind(atom.p, t.p) && try_bind(atom.o, t.o))
    return true;
  for (std::size_t i = 0; i < bound_here.count; ++i)
    binds[bound_here.vars[i]].reset();
  bound_here.count = 0;
  return false;
}

struct EvalState {
  TripleStore& store;
  const InferenceProgram& program;
  ProvenanceIndex& prov;
  const TripleStore* delta = nullptr;
  TripleStore* next_delta = nullptr;
  std::vector<Triple>* added_log = nullptr;
  MaterializationStats* stats = nullptr;
};

void derive(EvalState& state, std::uint32_t rule_index, const Bindings& binds,
            const std::vector<Triple>& premises) {
  const CompiledRule& rule = state.program.rules[rule_index];
  Triple head = instantiate_head(rule.head, binds);
  auto [id, fresh] = state.prov.add(Support{head, rule_index, premises});
  (void)id;
  if (fresh) ++state.stats->rule_fire_counts[rule.name];
  if (state.store.insert(head, TripleFlag::Derived)) {
    state.prov.note_inserted(head);
    if (state.next_delta) state.next_delta->insert(head, TripleFlag::Derived);
    if (state.added_log) state.added_log->push_back(head);
  }
}

int bound_slots(const AtomPattern& atom, const Bindings& binds) {
  int n = 0;
  for (const PatternTerm* t : {&atom.s, &atom.p, &atom.o})
    if (!t->is_var || binds[t->var]) ++n;
  return n;
}

// Joins the remaining body atoms against the store, always expanding the
// most-bound atom next (fully bound atoms become constant-time membership
// checks). `premises` is filled at the original body positions; ties break
// toward the lower body index, so evaluation stays deterministic.
void eval_join(EvalState& state, std::uint32_t rule_index,
               std::uint32_t remaining, Bindings& binds,
               std::vector<Triple>& premises) {
  if (remaining == 0) {
    derive(state, rule_index, binds, premises);
    return;
  }
  const CompiledRule& rule = state.program.rules[rule_index];
  std::size_t best = 0;
  int best_score = -1;
  for (std::uint32_t m = remaining; m != 0; m &= m - 1) {
    std::size_t i = static_cast<std::size_t>(__builtin_ctz(m));
    int score = bound_slots(rule.body[i], binds);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  const AtomPattern& atom = rule.body[best];
  std::uint32_t rest = remaining & ~(1u << best);
  state.store.for_each_match(to_pattern(atom, binds), [&](const Triple& t) {
    BoundVars bound_here;
    if (!bind_atom(atom, t, binds, bound_here)) return;
    premises[best] = t;
    eval_join(state, rule_index, rest, binds, premises);
    for (std::size_t i = 0; i < bound_here.count; ++i)
      binds[bound_here.vars[i]].reset();
  });
}

// One evaluation variant: the atom at `delta_pos` ranges over the delta and
// is expanded first; everything else joins against the full store. With
// kNoDelta every atom ranges over the store (the naive engine's mode).
constexpr std::size_t kNoDelta = static_cast<std::size_t>(-1);

void eval_variant(EvalState& state, std::uint32_t rule_index,
                  std::size_t delta_pos) {
  const CompiledRule& rule = state.program.rules[rule_index];
  Bindings binds(rule.var_count);
  std::vector<Triple> premises(rule.body.size());
  std::uint32_t all = (1u << rule.body.size()) - 1;
  if (delta_pos == kNoDelta) {
    eval_join(state, rule_index, all, binds, premises);
    return;
  }
  const AtomPattern& atom = rule.body[delta_pos];
  std::uint32_t rest = all & ~(1u << delta_pos);
  state.delta->for_each_match(to_pattern(atom, binds), [&](const Triple& t) {
    BoundVars bound_here;
    if (!bind_atom(atom, t, binds, bound_here)) return;
    premises[delta_pos] = t;
    eval_join(state, rule_index, rest, binds, premises);
    for (std::size_t i = 0; i < bound_here.count; ++i)
      binds[bound_here.vars[i]].reset();
  });
}

void fire_ground_rule(EvalState& state, std::uint32_t rule_index) {
  Bindings none;
  std::vector<Triple> no_premises;
  derive(state, rule_index, none, no_premises);
}

MaterializationStats run_rounds(TripleStore& store,
                                const InferenceProgram& program,
                                ProvenanceIndex& prov, TripleStore initial_delta,
                                bool fire_ground, std::vector<Triple>* added_log,
                                const EngineOptions& opts) {
  auto started = std::chrono::steady_clock::now();
  MaterializationStats stats;
  EvalState state{store, program, prov};
  state.stats = &stats;
  state.added_log = added_log;

  TripleStore delta = std::move(initial_delta);
  for (std::size_t iteration = 1;; ++iteration) {
    if (iteration > opts.iteration_cap)
      throw IterationLimitError("fixpoint exceeded iteration cap of " +
                                std::to_string(opts.iteration_cap));
    stats.iterations = iteration;
    TripleStore next;
    state.delta = &delta;
    state.next_delta = &next;
    for (std::uint32_t r = 0; r < program.rules.size(); ++r) {
      const CompiledRule& rule = program.rules[r];
      if (rule.body.empty()) {
        if (fire_ground && iteration == 1) fire_ground_rule(state, r);
        continue;
      }
      if (delta.empty()) continue;
      for (std::size_t delta_pos = 0; delta_pos < rule.body.size();
           ++delta_pos) {
        // A delta atom with a constant predicate can only match when the
        // delta holds such triples at all.
        const PatternTerm& p = rule.body[delta_pos].p;
        if (!p.is_var && delta.predicate_count(p.constant) == 0) continue;
        eval_variant(state, r, delta_pos);
      }
    }
    if (next.empty()) break;
    delta = std::move(next);
  }

  stats.derived_count = store.derived_count();
  stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  return stats;
}

}  // namespace

MaterializationStats materialize(TripleStore& store,
                                 const InferenceProgram& program,
                                 ProvenanceIndex& provenance,
                                 const EngineOptions& opts) {
  TripleStore initial;
  for (const auto& [t, flag] : store.entries())
    initial.insert(t, TripleFlag::Asserted);
  return run_rounds(store, program, provenance, std::move(initial),
                    /*fire_ground=*/true, nullptr, opts);
}

MaterializationStats materialize_delta(TripleStore& store,
                                       const InferenceProgram& program,
                                       ProvenanceIndex& provenance,
                                       const std::vector<Triple>& seed,
                                       std::vector<Triple>* added,
                                       const EngineOptions& opts) {
  TripleStore initial;
  for (const Triple& t : seed) initial.insert(t, TripleFlag::Asserted);
  return run_rounds(store, program, provenance, std::move(initial),
                    /*fire_ground=*/false, added, opts);
}

MaterializationStats naive_fixpoint(TripleStore& store,
                                    const InferenceProgram& program,
                                    ProvenanceIndex& provenance,
                                    const EngineOptions& opts) {
  auto started = std::chrono::steady_clock::now();
  MaterializationStats stats;
  EvalState state{store, program, provenance};
  state.stats = &stats;

  for (std::size_t iteration = 1;; ++iteration) {
    if (iteration > opts.iteration_cap)
      throw IterationLimitError("fixpoint exceeded iteration cap of " +
                                std::to_string(opts.iteration_cap));
    stats.iterations = iteration;
    std::size_t before = store.size();
    for (std::uint32_t r = 0; r < program.rules.size(); ++r) {
      const CompiledRule& rule = program.rules[r];
      if (rule.body.empty()) {
        fire_ground_rule(state, r);
        continue;
      }
      eval_variant(state, r, kNoDelta);
    }
    if (store.size() == before) break;
  }

  stats.derived_count = store.derived_count();
  stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - started);
  return stats;
}

bool check_instance(const TripleStore& store, TermId individual,
                    const ClassExpression& expr, TermId rdf_type) {
  switch (expr.kind) {
    case ClassExpression::Kind::Named:
      return store.contains(Triple{individual, rdf_type, expr.named});
    case ClassExpression::Kind::SomeValuesFrom: {
      bool found = false;
      store.for_each_match(
          TriplePattern{individual, expr.property, std::nullopt},
          [&](const Triple& t) {
            if (!found &&
                store.contains(Triple{t.o, rdf_type, expr.filler}))
              found = true;
          });
      return found;
    }
    case ClassExpression::Kind::Intersection: {
      for (const auto& conjunct : expr.conjuncts)
        if (!check_instance(store, individual, conjunct, rdf_type))
          return false;
      return true;
    }
  }
  return false;
}

}  // namespace capakb
