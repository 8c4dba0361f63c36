#pragma once
// Triple store with three access-path orderings (spo, pos, osp). All rule
// bodies in the supported fragment resolve to one of these three prefixes,
// so the remaining orderings are never built.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "capakb/term.hpp"

namespace capakb {

struct Triple {
  TermId s = 0;
  TermId p = 0;
  TermId o = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    std::size_t h = t.s;
    h = h * 1000003u + t.p;
    h = h * 1000003u + t.o;
    return h;
  }
};

enum class TripleFlag : std::uint8_t { Asserted, Derived };

// Each position is either bound to a term or a wildcard.
struct TriplePattern {
  std::optional<TermId> s;
  std::optional<TermId> p;
  std::optional<TermId> o;

  bool matches(const Triple& t) const {
    return (!s || *s == t.s) && (!p || *p == t.p) && (!o || *o == t.o);
  }
};

class TripleStore {
public:
  // Returns true iff the triple was absent. Re-inserting a derived triple
  // as asserted upgrades the flag; the reverse never downgrades.
  bool insert(const Triple& t, TripleFlag flag);
  bool erase(const Triple& t);

  bool contains(const Triple& t) const { return members_.count(t) != 0; }
  std::optional<TripleFlag> flag_of(const Triple& t) const;

  // Number of stored triples with this predicate; rule evaluation uses it
  // to skip delta variants that cannot match.
  std::size_t predicate_count(TermId p) const {
    auto it = predicate_counts_.find(p);
    return it == predicate_counts_.end() ? 0 : it->second;
  }

  std::size_t size() const { return spo_.size(); }
  bool empty() const { return spo_.empty(); }
  std::size_t asserted_count() const { return asserted_count_; }
  std::size_t derived_count() const { return spo_.size() - asserted_count_; }

  // Yields every matching triple exactly once, ascending in the order of
  // the chosen index: bound s -> spo, bound p -> pos, bound o only -> osp,
  // nothing bound -> full spo scan.
  template <typename F>
  void for_each_match(const TriplePattern& q, F&& fn) const {
    if (q.s && q.p && q.o) {
      Triple t{*q.s, *q.p, *q.o};
      if (members_.count(t)) fn(t);
      return;
    }
    if (q.s) {
      auto it = spo_.lower_bound(Triple{*q.s, q.p.value_or(0), q.o.value_or(0)});
      for (; it != spo_.end() && it->first.s == *q.s; ++it) {
        if (q.p && it->first.p != *q.p) {
          if (it->first.p > *q.p) break;
          continue;
        }
        if (q.o && it->first.o != *q.o) {
          if (q.p && it->first.o > *q.o) break;
          continue;
        }
        fn(it->first);
      }
    } else if (q.p) {
      auto it = pos_.lower_bound(std::array<TermId, 3>{*q.p, q.o.value_or(0), 0});
      for (; it != pos_.end() && (*it)[0] == *q.p; ++it) {
        if (q.o && (*it)[1] != *q.o) {
          if ((*it)[1] > *q.o) break;
          continue;
        }
        fn(Triple{(*it)[2], (*it)[0], (*it)[1]});
      }
    } else if (q.o) {
      auto it = osp_.lower_bound(std::array<TermId, 3>{*q.o, 0, 0});
      for (; it != osp_.end() && (*it)[0] == *q.o; ++it) {
        fn(Triple{(*it)[1], (*it)[2], (*it)[0]});
      }
    } else {
      for (const auto& [t, flag] : spo_) fn(t);
    }
  }

  std::vector<Triple> match(const TriplePattern& q) const;

  // Full contents in spo order, with flags.
  const std::map<Triple, TripleFlag>& entries() const { return spo_; }

  std::vector<Triple> triples() const;
  std::vector<Triple> triples_with_flag(TripleFlag flag) const;

  bool operator==(const TripleStore& other) const { return spo_ == other.spo_; }

private:
  std::map<Triple, TripleFlag> spo_;
  std::set<std::array<TermId, 3>> pos_;  // {p, o, s}
  std::set<std::array<TermId, 3>> osp_;  // {o, s, p}
  std::unordered_set<Triple, TripleHash> members_;
  std::unordered_map<TermId, std::size_t> predicate_counts_;
  std::size_t asserted_count_ = 0;
};

}  // namespace capakb
