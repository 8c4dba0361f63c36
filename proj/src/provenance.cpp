#include "capakb/provenance.hpp"

#include "capakb/errors.hpp"

namespace capakb {

namespace {
const std::set<ProvenanceIndex::SupportId> kEmpty;
}

std::pair<ProvenanceIndex::SupportId, bool> ProvenanceIndex::add(
    Support support) {
  // Suppress duplicates: identical (fact, rule, premises) is recorded once.
  auto of = supports_of_.find(support.fact);
  if (of != supports_of_.end()) {
    for (SupportId id : of->second) {
      const Support& existing = supports_.find(id)->second;
      if (existing.rule == support.rule && existing.premises == support.premises)
        return {id, false};
    }
  }
  SupportId id = next_id_++;
  if (of != supports_of_.end())
    of->second.insert(id);
  else
    supports_of_[support.fact].insert(id);
  for (const Triple& premise : support.premises) used_by_[premise].insert(id);
  supports_.emplace(id, std::move(support));
  return {id, true};
}

void ProvenanceIndex::remove(SupportId id) {
  auto it = supports_.find(id);
  if (it == supports_.end()) return;
  const Support& s = it->second;
  if (auto of = supports_of_.find(s.fact); of != supports_of_.end()) {
    of->second.erase(id);
    if (of->second.empty()) supports_of_.erase(of);
  }
  for (const Triple& premise : s.premises) {
    if (auto ub = used_by_.find(premise); ub != used_by_.end()) {
      ub->second.erase(id);
      if (ub->second.empty()) used_by_.erase(ub);
    }
  }
  supports_.erase(it);
}

const Support& ProvenanceIndex::get(SupportId id) const {
  auto it = supports_.find(id);
  if (it == supports_.end())
    throw KbError("unknown support id " + std::to_string(id));
  return it->second;
}

const std::set<ProvenanceIndex::SupportId>& ProvenanceIndex::supports_of(
    const Triple& fact) const {
  auto it = supports_of_.find(fact);
  return it == supports_of_.end() ? kEmpty : it->second;
}

const std::set<ProvenanceIndex::SupportId>& ProvenanceIndex::used_by(
    const Triple& premise) const {
  auto it = used_by_.find(premise);
  return it == used_by_.end() ? kEmpty : it->second;
}

void ProvenanceIndex::note_inserted(const Triple& fact) {
  sequence_[fact] = next_sequence_++;
}

void ProvenanceIndex::note_removed(const Triple& fact) {
  sequence_.erase(fact);
}

std::uint64_t ProvenanceIndex::sequence_of(const Triple& fact) const {
  auto it = sequence_.find(fact);
  return it == sequence_.end() ? 0 : it->second;
}

void ProvenanceIndex::clear() {
  supports_.clear();
  supports_of_.clear();
  used_by_.clear();
  sequence_.clear();
  // Ids and sequence numbers keep counting; only relative order matters.
}

}  // namespace capakb
