#pragma once
// Which rule instantiations support which facts. Retraction walks used_by,
// explanation walks supports_of. All supports are kept, not just the first:
// a fact stays alive exactly while some recorded derivation survives.

#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "capakb/triple_store.hpp"

namespace capakb {

struct Support {
  Triple fact;
  std::uint32_t rule = 0;         // index into the program's rule list
  std::vector<Triple> premises;   // ordered to match the rule body

  friend auto operator<=>(const Support&, const Support&) = default;
};

class ProvenanceIndex {
public:
  using SupportId = std::uint64_t;

  // Records a support unless an identical (fact, rule, premises) entry
  // already exists. Returns the id and whether it was new.
  std::pair<SupportId, bool> add(Support support);
  void remove(SupportId id);

  const Support& get(SupportId id) const;

  // Ids are handed out monotonically, so these sets iterate in recording
  // order, which is deterministic run-to-run.
  const std::set<SupportId>& supports_of(const Triple& fact) const;
  const std::set<SupportId>& used_by(const Triple& premise) const;

  std::size_t support_count() const { return supports_.size(); }

  // Insertion sequence per fact; explanation uses it to pick supports whose
  // premises predate the fact, which cuts derivation cycles.
  void note_inserted(const Triple& fact);
  void note_removed(const Triple& fact);
  std::uint64_t sequence_of(const Triple& fact) const;  // 0 when unknown

  void clear();

private:
  std::unordered_map<SupportId, Support> supports_;
  std::unordered_map<Triple, std::set<SupportId>, TripleHash> supports_of_;
  std::unordered_map<Triple, std::set<SupportId>, TripleHash> used_by_;
  std::unordered_map<Triple, std::uint64_t, TripleHash> sequence_;
  SupportId next_id_ = 1;
  std::uint64_t next_sequence_ = 1;
};

}  // namespace capakb
