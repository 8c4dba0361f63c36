#include "capakb/triple_store.hpp"

namespace capakb {

bool TripleStore::insert(const Triple& t, TripleFlag flag) {
  auto [it, inserted] = spo_.emplace(t, flag);
  if (!inserted) {
    // Present already: asserted wins, derived never downgrades.
    if (flag == TripleFlag::Asserted && it->second == TripleFlag::Derived) {
      it->second = TripleFlag::Asserted;
      ++asserted_count_;
    }
    return false;
  }
  if (flag == TripleFlag::Asserted) ++asserted_count_;
  pos_.insert({t.p, t.o, t.s});
  osp_.insert({t.o, t.s, t.p});
  members_.insert(t);
  ++predicate_counts_[t.p];
  return true;
}

bool TripleStore::erase(const Triple& t) {
  auto it = spo_.find(t);
  if (it == spo_.end()) return false;
  if (it->second == TripleFlag::Asserted) --asserted_count_;
  spo_.erase(it);
  pos_.erase({t.p, t.o, t.s});
  osp_.erase({t.o, t.s, t.p});
  members_.erase(t);
  if (auto pc = predicate_counts_.find(t.p); pc != predicate_counts_.end()) {
    if (--pc->second == 0) predicate_counts_.erase(pc);
  }
  return true;
}

std::optional<TripleFlag> TripleStore::flag_of(const Triple& t) const {
  auto it = spo_.find(t);
  if (it == spo_.end()) return std::nullopt;
  return it->second;
}

std::vector<Triple> TripleStore::match(const TriplePattern& q) const {
  std::vector<Triple> out;
  for_each_match(q, [&](const Triple& t) { out.push_back(t); });
  return out;
}

std::vector<Triple> TripleStore::triples() const {
  std::vector<Triple> out;
  out.reserve(spo_.size());
  for (const auto& [t, flag] : spo_) out.push_back(t);
  return out;
}

std::vector<Triple> TripleStore::triples_with_flag(TripleFlag flag) const {
  std::vector<Triple> out;
  for (const auto& [t, f] : spo_)
    if (f == flag) out.push_back(t);
  return out;
}

}  // namespace capakb
