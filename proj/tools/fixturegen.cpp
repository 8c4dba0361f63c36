// Regenerates the committed fixture files from the in-code builders. The
// golden materialization is produced by the naive reference engine, not the
// production one, so the two can be compared honestly in tests.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "capakb/fixtures.hpp"
#include "capakb/reasoner.hpp"

using namespace capakb;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    std::cerr << "failed to write " << path << "\n";
    std::exit(2);
  }
  std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: capakb_fixturegen <fixtures-dir>\n";
    return 2;
  }
  std::filesystem::path dir = argv[1];

  write_file(dir / "pepper.ttl", fixtures::pepper_turtle());
  write_file(dir / "pepper.rules", fixtures::pepper_rules());

  KnowledgeBase kb = fixtures::build_pepper();
  TripleStore store = kb.store();
  ProvenanceIndex prov;
  naive_fixpoint(store, kb.program(), prov);

  SerializeOptions opts;
  opts.include_derived = true;
  write_file(dir / "golden" / "pepper_materialized.ttl",
             serialize_turtle(store, kb.terms(), kb.prefixes(), kb.vocab(), opts));
  return 0;
}
