// capakb: load component ontologies, materialize the capability inferences,
// query and maintain them interactively.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capakb/errors.hpp"
#include "capakb/fixtures.hpp"
#include "capakb/query.hpp"
#include "json.hpp"

using namespace capakb;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitIo = 2;
constexpr int kExitIterationCap = 3;
constexpr int kExitAskAbsent = 4;

struct Session {
  std::vector<std::string> ontology_paths;
  std::vector<std::string> rules_paths;
  std::string capability_root = fixtures::pepper_iri("Capability");
  std::string has_capability = fixtures::pepper_iri("hasCapability");
  std::string has_component = fixtures::pepper_iri("hasComponent");
  std::size_t iteration_cap = 10'000;
  std::string format = "text";
  std::string emit_path;

  KnowledgeBase kb;

  bool json_lines() const { return format == "json-lines"; }
};

void add_common_options(CLI::App* cmd, Session& session, bool with_emit) {
  cmd->add_option("ontology", session.ontology_paths, "Ontology files (.ttl)");
  cmd->add_option("--rules", session.rules_paths, "Rule files (.rules)");
  cmd->add_option("--capability-root", session.capability_root,
                  "IRI of the capability root class");
  cmd->add_option("--has-capability", session.has_capability,
                  "IRI of the agent-to-capability-individual property");
  cmd->add_option("--has-component", session.has_component,
                  "IRI of the component ownership property");
  cmd->add_option("--iteration-cap", session.iteration_cap,
                  "Fixpoint iteration limit");
  cmd->add_option("--format", session.format, "Output format")
      ->check(CLI::IsMember({"text", "json-lines"}));
  if (with_emit)
    cmd->add_option("--emit", session.emit_path, "Write the store to a file");
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_diagnostic(const Session& session, const std::string& file,
                      const Diagnostic& d) {
  if (session.json_lines()) {
    json obj{{"type", "diagnostic"},
             {"severity", d.severity == Severity::Error ? "error" : "warning"},
             {"message", d.message},
             {"file", file}};
    if (d.span) {
      obj["line"] = d.span->line;
      obj["column"] = d.span->column;
      obj["length"] = d.span->length;
    }
    std::cout << obj.dump() << "\n";
  } else {
    std::cerr << file << ":" << format_diagnostic(d) << "\n";
  }
}

// Loads ontologies, rules and the CAPAKB_PREFIX_MAP prefixes into the
// session kb. Returns kExitOk when everything parsed without errors.
int load_session(Session& session) {
  bool saw_errors = false;
  for (const std::string& path : session.ontology_paths) {
    auto text = read_file(path);
    if (!text) {
      std::cerr << "cannot read " << path << "\n";
      return kExitIo;
    }
    for (const Diagnostic& d : session.kb.load_ontology(*text)) {
      print_diagnostic(session, path, d);
      saw_errors |= d.severity == Severity::Error;
    }
  }
  for (const std::string& path : session.rules_paths) {
    auto text = read_file(path);
    if (!text) {
      std::cerr << "cannot read " << path << "\n";
      return kExitIo;
    }
    for (const Diagnostic& d : session.kb.load_rules(*text)) {
      print_diagnostic(session, path, d);
      saw_errors |= d.severity == Severity::Error;
    }
  }
  if (const char* env = std::getenv("CAPAKB_PREFIX_MAP")) {
    auto text = read_file(env);
    if (!text) {
      std::cerr << "cannot read CAPAKB_PREFIX_MAP file " << env << "\n";
      return kExitIo;
    }
    TermInterner scratch;
    Vocab scratch_vocab = Vocab::standard(scratch);
    auto result = parse_turtle(*text, scratch, scratch_vocab);
    session.kb.add_prefixes(result.document.prefixes);
  }
  return saw_errors ? kExitDiagnostics : kExitOk;
}

int compile_session(Session& session) {
  session.kb.engine_options().iteration_cap = session.iteration_cap;
  bool saw_errors = false;
  for (const Diagnostic& d : session.kb.compile_program()) {
    print_diagnostic(session, "<axioms>", d);
    saw_errors |= d.severity == Severity::Error;
  }
  return saw_errors ? kExitDiagnostics : kExitOk;
}

// CLI terms use the same syntax as the ontology files: <iri>, prefix:name,
// "literal", or a bare absolute IRI.
std::optional<Term> parse_cli_term(const Session& session,
                                   const std::string& token) {
  if (token.size() >= 2 && token.front() == '<' && token.back() == '>')
    return Term{TermKind::Iri, token.substr(1, token.size() - 2)};
  if (token.size() >= 2 && token.front() == '"' && token.back() == '"')
    return Term{TermKind::Literal, token.substr(1, token.size() - 2)};
  auto colon = token.find(':');
  if (colon != std::string::npos) {
    std::string prefix = token.substr(0, colon);
    auto it = session.kb.prefixes().find(prefix);
    if (it != session.kb.prefixes().end())
      return Term{TermKind::Iri, it->second + token.substr(colon + 1)};
  }
  if (has_iri_scheme(token)) return Term{TermKind::Iri, token};
  return std::nullopt;
}

// Resolves to an already-interned term; unknown terms are query misses.
std::optional<TermId> resolve_cli_term(const Session& session,
                                       const std::string& token) {
  auto term = parse_cli_term(session, token);
  if (!term) return std::nullopt;
  return session.kb.terms().find(*term);
}

std::string render_id(const Session& session, TermId id) {
  return render_term(session.kb.terms().resolve(id), session.kb.prefixes());
}

void print_stats(const Session& session, const MaterializationStats& stats) {
  double ms = stats.elapsed.count() / 1000.0;
  if (session.json_lines()) {
    json fires = json::object();
    for (const auto& [rule, count] : stats.rule_fire_counts)
      fires[rule] = count;
    std::cout << json{{"type", "stats"},
                      {"iterations", stats.iterations},
                      {"derived", stats.derived_count},
                      {"elapsed_ms", ms},
                      {"rule_fires", fires}}
                     .dump()
              << "\n";
  } else {
    std::cout << "iterations: " << stats.iterations << "\n";
    std::cout << "derived: " << stats.derived_count << "\n";
    std::cout << "rule fires:\n";
    for (const auto& [rule, count] : stats.rule_fire_counts)
      std::cout << "  " << rule << ": " << count << "\n";
    std::cout << "elapsed: " << ms << " ms\n";
  }
}

int emit_store(const Session& session) {
  if (session.emit_path.empty()) return kExitOk;
  SerializeOptions opts;
  opts.include_derived = true;
  std::ofstream out(session.emit_path, std::ios::binary);
  if (!out.good()) {
    std::cerr << "cannot write " << session.emit_path << "\n";
    return kExitIo;
  }
  out << serialize_turtle(session.kb.store(), session.kb.terms(),
                          session.kb.prefixes(), session.kb.vocab(), opts);
  return kExitOk;
}

QueryVocab session_query_vocab(Session& session) {
  QueryVocab vocab;
  vocab.has_capability = session.kb.terms().intern_iri(session.has_capability);
  vocab.capability_root = session.kb.terms().intern_iri(session.capability_root);
  vocab.has_component = session.kb.terms().intern_iri(session.has_component);
  return vocab;
}

std::set<TermId> affordance_properties(const Session& session) {
  std::set<TermId> props;
  for (const HornRule& rule : session.kb.rules())
    if (rule.head.kind == RuleAtom::Kind::Property)
      props.insert(rule.head.predicate);
  return props;
}

// --- subcommands -------------------------------------------------------------

int cmd_check(Session& session) {
  int rc = load_session(session);
  if (rc == kExitIo) return rc;
  int compile_rc = compile_session(session);
  return rc != kExitOk ? rc : compile_rc;
}

int cmd_materialize(Session& session) {
  if (int rc = load_session(session); rc != kExitOk) return rc;
  if (int rc = compile_session(session); rc != kExitOk) return rc;
  try {
    print_stats(session, session.kb.materialize());
  } catch (const IterationLimitError& e) {
    std::cerr << e.what() << "\n";
    return kExitIterationCap;
  }
  return emit_store(session);
}

int run_query(Session& session, const std::string& kind,
              const std::vector<std::string>& args) {
  auto resolve_or_complain = [&](const std::string& token) {
    auto id = resolve_cli_term(session, token);
    if (!id) std::cerr << "unknown term: " << token << "\n";
    return id;
  };

  if (kind == "capabilities") {
    if (args.size() != 1) {
      std::cerr << "usage: query ... capabilities <agent>\n";
      return kExitDiagnostics;
    }
    auto agent = resolve_or_complain(args[0]);
    if (!agent) return kExitDiagnostics;
    auto report =
        capabilities_of(session.kb, *agent, session_query_vocab(session));
    if (!report.capability_individual) {
      std::cerr << "no capability individual for " << args[0] << "\n";
      return kExitOk;
    }
    for (TermId cls : report.capabilities) {
      if (session.json_lines())
        std::cout << json{{"type", "capability"},
                          {"agent", session.kb.terms().resolve(*agent).lexical},
                          {"class", session.kb.terms().resolve(cls).lexical}}
                         .dump()
                  << "\n";
      else
        std::cout << render_id(session, cls) << "\n";
    }
    return kExitOk;
  }

  if (kind == "instances") {
    if (args.size() != 1) {
      std::cerr << "usage: query ... instances <class>\n";
      return kExitDiagnostics;
    }
    auto cls = resolve_or_complain(args[0]);
    if (!cls) return kExitDiagnostics;
    for (TermId individual : instances_of(session.kb, *cls)) {
      if (session.json_lines())
        std::cout << json{{"type", "instance"},
                          {"class", session.kb.terms().resolve(*cls).lexical},
                          {"individual",
                           session.kb.terms().resolve(individual).lexical}}
                         .dump()
                  << "\n";
      else
        std::cout << render_id(session, individual) << "\n";
    }
    return kExitOk;
  }

  if (kind == "affordances") {
    if (args.size() != 1) {
      std::cerr << "usage: query ... affordances <agent>\n";
      return kExitDiagnostics;
    }
    auto agent = resolve_or_complain(args[0]);
    if (!agent) return kExitDiagnostics;
    for (const auto& [prop, object] :
         affordances_of(session.kb, *agent, affordance_properties(session))) {
      if (session.json_lines())
        std::cout << json{{"type", "affordance"},
                          {"agent", session.kb.terms().resolve(*agent).lexical},
                          {"property", session.kb.terms().resolve(prop).lexical},
                          {"object",
                           session.kb.terms().resolve(object).lexical}}
                         .dump()
                  << "\n";
      else
        std::cout << render_id(session, prop) << " "
                  << render_id(session, object) << "\n";
    }
    return kExitOk;
  }

  if (kind == "ask") {
    if (args.size() != 3) {
      std::cerr << "usage: query ... ask <s> <p> <o>\n";
      return kExitDiagnostics;
    }
    auto s = resolve_or_complain(args[0]);
    auto p = resolve_or_complain(args[1]);
    auto o = resolve_or_complain(args[2]);
    if (!s || !p || !o) return kExitDiagnostics;
    bool present = session.kb.store().contains(Triple{*s, *p, *o});
    if (session.json_lines())
      std::cout << json{{"type", "ask"}, {"present", present}}.dump() << "\n";
    else
      std::cout << (present ? "present" : "absent") << "\n";
    return present ? kExitOk : kExitAskAbsent;
  }

  std::cerr << "unknown query kind '" << kind
            << "' (expected capabilities|instances|affordances|ask)\n";
  return kExitDiagnostics;
}

int cmd_query(Session& session, std::vector<std::string> positionals) {
  // Positionals mix ontology paths and the query; the first keyword splits.
  const std::set<std::string> kinds = {"capabilities", "instances",
                                       "affordances", "ask"};
  std::size_t split = positionals.size();
  for (std::size_t i = 0; i < positionals.size(); ++i) {
    if (kinds.count(positionals[i])) {
      split = i;
      break;
    }
  }
  if (split == positionals.size()) {
    std::cerr << "missing query (capabilities|instances|affordances|ask)\n";
    return kExitDiagnostics;
  }
  session.ontology_paths.assign(positionals.begin(),
                                positionals.begin() + split);
  std::string kind = positionals[split];
  std::vector<std::string> args(positionals.begin() + split + 1,
                                positionals.end());

  if (int rc = load_session(session); rc != kExitOk) return rc;
  if (int rc = compile_session(session); rc != kExitOk) return rc;
  try {
    session.kb.materialize();
  } catch (const IterationLimitError& e) {
    std::cerr << e.what() << "\n";
    return kExitIterationCap;
  }
  try {
    return run_query(session, kind, args);
  } catch (const KbError& e) {
    std::cerr << e.what() << "\n";
    return kExitDiagnostics;
  }
}

int cmd_dot(Session& session, DotOptions opts, const std::string& focus_token) {
  if (int rc = load_session(session); rc != kExitOk) return rc;
  if (int rc = compile_session(session); rc != kExitOk) return rc;
  try {
    session.kb.materialize();
  } catch (const IterationLimitError& e) {
    std::cerr << e.what() << "\n";
    return kExitIterationCap;
  }
  if (!focus_token.empty()) {
    auto id = resolve_cli_term(session, focus_token);
    if (!id) {
      std::cerr << "unknown term: " << focus_token << "\n";
      return kExitDiagnostics;
    }
    opts.focus = *id;
  }
  std::string dot = export_dot(session.kb, opts);
  if (session.emit_path.empty()) {
    std::cout << dot;
    return kExitOk;
  }
  std::ofstream out(session.emit_path, std::ios::binary);
  if (!out.good()) {
    std::cerr << "cannot write " << session.emit_path << "\n";
    return kExitIo;
  }
  out << dot;
  return kExitOk;
}

// --- repl ---------------------------------------------------------------------

std::vector<std::string> split_command(const std::string& line) {
  std::vector<std::string> out;
  std::string current;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      current.push_back(c);
    } else if (!quoted && std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        out.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

void print_capability_changes(Session& session, const QueryVocab& vocab,
                              const std::vector<Triple>& facts,
                              const char* action, char marker) {
  for (const Triple& t : facts) {
    if (t.p != session.kb.vocab().rdf_type) continue;
    if (!is_subclass_of(session.kb, t.o, vocab.capability_root)) continue;
    if (session.json_lines())
      std::cout << json{{"type", "capability-change"},
                        {"action", action},
                        {"individual", session.kb.terms().resolve(t.s).lexical},
                        {"class", session.kb.terms().resolve(t.o).lexical}}
                       .dump()
                << "\n";
    else
      std::cout << " " << marker << " " << render_id(session, t.s) << " isA "
                << render_id(session, t.o) << "\n";
  }
}

void print_delta(Session& session, const QueryVocab& vocab,
                 const DeltaReport& report) {
  if (session.json_lines())
    std::cout << json{{"type", "delta"},
                      {"added", report.added.size()},
                      {"removed", report.removed.size()},
                      {"rederived", report.rederived.size()}}
                     .dump()
              << "\n";
  else
    std::cout << "added: " << report.added.size()
              << "  removed: " << report.removed.size()
              << "  rederived: " << report.rederived.size() << "\n";
  print_capability_changes(session, vocab, report.added, "added", '+');
  print_capability_changes(session, vocab, report.removed, "removed", '-');
  print_capability_changes(session, vocab, report.rederived, "rederived", '~');
}

int cmd_repl(Session& session) {
  if (int rc = load_session(session); rc == kExitIo) return rc;
  if (int rc = compile_session(session); rc != kExitOk) return rc;
  try {
    session.kb.materialize();
  } catch (const IterationLimitError& e) {
    std::cerr << e.what() << "\n";
    return kExitIterationCap;
  }
  QueryVocab vocab = session_query_vocab(session);

  auto intern_term = [&](const std::string& token) -> std::optional<TermId> {
    auto term = parse_cli_term(session, token);
    if (!term) {
      std::cerr << "cannot parse term: " << token << "\n";
      return std::nullopt;
    }
    try {
      return session.kb.terms().intern(*term);
    } catch (const KbError& e) {
      std::cerr << e.what() << "\n";
      return std::nullopt;
    }
  };

  std::string line;
  while (std::getline(std::cin, line)) {
    auto words = split_command(line);
    if (words.empty()) continue;
    const std::string& cmd = words[0];
    try {
      if (cmd == "quit" || cmd == "exit") break;
      if (cmd == "help") {
        std::cout << "commands: assert <s> <p> <o> | retract <s> <p> <o> | "
                     "query capabilities|instances|affordances|ask ... | "
                     "explain <s> <p> <o> | dot <path> | save <path> "
                     "[--with-derived] | quit\n";
        continue;
      }
      if ((cmd == "assert" || cmd == "retract") && words.size() == 4) {
        auto s = intern_term(words[1]);
        auto p = intern_term(words[2]);
        auto o = intern_term(words[3]);
        if (!s || !p || !o) continue;
        DeltaReport report = cmd == "assert"
                                 ? session.kb.assert_fact(Triple{*s, *p, *o})
                                 : session.kb.retract_fact(Triple{*s, *p, *o});
        print_delta(session, vocab, report);
        continue;
      }
      if (cmd == "query" && words.size() >= 2) {
        std::vector<std::string> args(words.begin() + 2, words.end());
        run_query(session, words[1], args);
        continue;
      }
      if (cmd == "explain" && words.size() == 4) {
        auto s = resolve_cli_term(session, words[1]);
        auto p = resolve_cli_term(session, words[2]);
        auto o = resolve_cli_term(session, words[3]);
        if (!s || !p || !o) {
          std::cerr << "unknown term in fact\n";
          continue;
        }
        auto node = explain(session.kb, Triple{*s, *p, *o});
        std::cout << format_derivation(session.kb, node);
        continue;
      }
      if (cmd == "dot" && words.size() == 2) {
        std::ofstream out(words[1], std::ios::binary);
        if (!out.good()) {
          std::cerr << "cannot write " << words[1] << "\n";
          continue;
        }
        out << export_dot(session.kb);
        continue;
      }
      if (cmd == "save" && (words.size() == 2 || words.size() == 3)) {
        SerializeOptions opts;
        opts.include_derived =
            words.size() == 3 && words[2] == "--with-derived";
        std::ofstream out(words[1], std::ios::binary);
        if (!out.good()) {
          std::cerr << "cannot write " << words[1] << "\n";
          continue;
        }
        out << serialize_turtle(session.kb.store(), session.kb.terms(),
                                session.kb.prefixes(), session.kb.vocab(),
                                opts);
        continue;
      }
      std::cerr << "unrecognized command; try 'help'\n";
    } catch (const KbError& e) {
      // Echo and keep the session alive.
      std::cerr << e.what() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capability knowledge base"};
  app.require_subcommand(1);

  Session session;

  CLI::App* check = app.add_subcommand("check", "Parse and validate only");
  add_common_options(check, session, /*with_emit=*/false);

  CLI::App* materialize =
      app.add_subcommand("materialize", "Compute and report the fixpoint");
  add_common_options(materialize, session, /*with_emit=*/true);

  CLI::App* query = app.add_subcommand(
      "query", "Answer capabilities|instances|affordances|ask");
  std::vector<std::string> query_positionals;
  query->add_option("args", query_positionals,
                    "Ontology files, then the query");
  query->add_option("--rules", session.rules_paths, "Rule files (.rules)");
  query->add_option("--capability-root", session.capability_root,
                    "IRI of the capability root class");
  query->add_option("--has-capability", session.has_capability,
                    "IRI of the agent-to-capability-individual property");
  query->add_option("--has-component", session.has_component,
                    "IRI of the component ownership property");
  query->add_option("--iteration-cap", session.iteration_cap,
                    "Fixpoint iteration limit");
  query->add_option("--format", session.format, "Output format")
      ->check(CLI::IsMember({"text", "json-lines"}));

  CLI::App* repl = app.add_subcommand("repl", "Interactive session");
  add_common_options(repl, session, /*with_emit=*/false);

  CLI::App* dot = app.add_subcommand("dot", "Export the graph as DOT");
  add_common_options(dot, session, /*with_emit=*/true);
  DotOptions dot_opts;
  std::string focus_token;
  dot->add_option("--focus", focus_token, "Restrict to a term's neighborhood");
  dot->add_option("--depth", dot_opts.depth, "Neighborhood radius");
  bool hide_derived = false;
  dot->add_flag("--hide-derived", hide_derived, "Leave out inferred edges");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(session);
    if (materialize->parsed()) return cmd_materialize(session);
    if (query->parsed()) return cmd_query(session, query_positionals);
    if (repl->parsed()) return cmd_repl(session);
    if (dot->parsed()) {
      dot_opts.show_derived = !hide_derived;
      return cmd_dot(session, dot_opts, focus_token);
    }
  } catch (const KbError& e) {
    std::cerr << e.what() << "\n";
    return kExitDiagnostics;
  }
  return kExitOk;
}
