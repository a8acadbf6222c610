#pragma once

// Suffix-item recognition: production recognition runs forward with no
// record of left positions, and left positions are recovered backward
// only for fully recognized right-hand sides.
//
// Items are bare rhs suffixes shared across productions. The forward
// array U holds, per position j, every suffix still to be recognized by
// some production whose consumed prefix ends at j. The backward table T
// holds, per span (i,j), every suffix that has been collected backwards
// over that span after its production completed. The least (U, T) pair
// is closed under seeding [alpha] in U[0] for every start production
// and
//
//   1. [gamma] in U[j]         if [A beta] in U[j], (A -> gamma) in P;
//   2. [beta] in U[j]          if [a beta] in U[j-1], a the j-th symbol;
//   3. [beta] in U[j]          if [B beta] in U[k], (B -> gamma) in P,
//                                 [gamma] in T[k,j];
//   4. [eps] in T[m,m]         if [eps] in U[m];
//   5. [a beta] in T[j-1,m]    if [a beta] in U[j-1], a the j-th symbol,
//                                 [beta] in T[j,m];
//   6. [B beta] in T[k,m]      if [B beta] in U[k], (B -> gamma) in P,
//                                 [gamma] in T[k,j], [beta] in T[j,m].
//
// Counters count distinct antecedent tuples exactly once, with the same
// semi-naive worklist scheme as the classic engine. Forward and
// backward rules share one agenda: step 3 consumes T entries, so the
// fixpoint is joint.

#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "earleykit/earley.hpp"
#include "earleykit/grammar.hpp"

namespace earleykit {

// One counted rule application; step 0 reports a seed. For a U
// consequent, i == j == the entry position; for a T consequent, (i, j)
// is the span.
struct VariantEvent {
  int step;
  SuffixId item;
  std::size_t i;
  std::size_t j;
};

struct VariantOptions {
  Agenda agenda = Agenda::Fifo;
  std::function<void(const VariantEvent&)> observer;
};

struct VariantStats {
  std::uint64_t steps1 = 0;
  std::uint64_t steps2 = 0;
  std::uint64_t steps3 = 0;
  std::uint64_t steps4 = 0;
  std::uint64_t steps5 = 0;
  std::uint64_t steps6 = 0;
  std::uint64_t seed = 0;
  std::uint64_t total = 0;
  std::uint64_t uCount = 0;
  std::uint64_t tCount = 0;
  bool accepted = false;

  std::string to_json() const {
    std::string out = "{";
    out += "\"steps1\":" + std::to_string(steps1);
    out += ",\"steps2\":" + std::to_string(steps2);
    out += ",\"steps3\":" + std::to_string(steps3);
    out += ",\"steps4\":" + std::to_string(steps4);
    out += ",\"steps5\":" + std::to_string(steps5);
    out += ",\"steps6\":" + std::to_string(steps6);
    out += ",\"seed\":" + std::to_string(seed);
    out += ",\"total\":" + std::to_string(total);
    out += ",\"uItems\":" + std::to_string(uCount);
    out += ",\"tItems\":" + std::to_string(tCount);
    out += std::string(",\"accepted\":") + (accepted ? "true" : "false");
    out += "}";
    return out;
  }

  friend bool operator==(const VariantStats&, const VariantStats&) = default;
};

// U: per-position suffix-item sets.
class ForwardArray {
 public:
  explicit ForwardArray(std::size_t n) : n_(n), cells_(n + 1) {}

  std::size_t length() const { return n_; }

  const std::set<SuffixId>& at(std::size_t j) const {
    check(j);
    return cells_[j];
  }

  bool contains(SuffixId s, std::size_t j) const { return at(j).count(s) > 0; }

  bool insert(SuffixId s, std::size_t j) {
    check(j);
    bool fresh = cells_[j].insert(s).second;
    if (fresh) ++count_;
    return fresh;
  }

  bool erase(SuffixId s, std::size_t j) {
    check(j);
    bool gone = cells_[j].erase(s) > 0;
    if (gone) --count_;
    return gone;
  }

  std::size_t item_count() const { return count_; }

  // One line per entry, `j . beta`, sorted lexicographically.
  std::string dump(const SuffixSet& sx) const {
    std::vector<std::string> lines;
    for (std::size_t j = 0; j <= n_; ++j)
      for (SuffixId s : cells_[j]) {
        std::string line = std::to_string(j) + " .";
        std::string beta = sx.to_string(s);
        if (!beta.empty()) line += " " + beta;
        lines.push_back(std::move(line));
      }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }

  friend bool operator==(const ForwardArray&, const ForwardArray&) = default;

 private:
  void check(std::size_t j) const {
    if (j > n_) throw std::out_of_range("forward array position out of range");
  }

  std::size_t n_;
  std::vector<std::set<SuffixId>> cells_;
  std::size_t count_ = 0;
};

// T: square table of suffix-item sets; only cells with i <= j are ever
// populated.
class BackwardTable {
 public:
  explicit BackwardTable(std::size_t n) : n_(n), cells_((n + 1) * (n + 1)) {}

  std::size_t length() const { return n_; }

  const std::set<SuffixId>& at(std::size_t i, std::size_t j) const {
    check(i, j);
    return cells_[i * (n_ + 1) + j];
  }

  bool contains(SuffixId s, std::size_t i, std::size_t j) const { return at(i, j).count(s) > 0; }

  bool insert(SuffixId s, std::size_t i, std::size_t j) {
    check(i, j);
    bool fresh = cells_[i * (n_ + 1) + j].insert(s).second;
    if (fresh) ++count_;
    return fresh;
  }

  bool erase(SuffixId s, std::size_t i, std::size_t j) {
    check(i, j);
    bool gone = cells_[i * (n_ + 1) + j].erase(s) > 0;
    if (gone) --count_;
    return gone;
  }

  std::size_t item_count() const { return count_; }

  // One line per entry, `i j . beta`, sorted lexicographically.
  std::string dump(const SuffixSet& sx) const {
    std::vector<std::string> lines;
    for (std::size_t i = 0; i <= n_; ++i)
      for (std::size_t j = i; j <= n_; ++j)
        for (SuffixId s : cells_[i * (n_ + 1) + j]) {
          std::string line = std::to_string(i) + " " + std::to_string(j) + " .";
          std::string beta = sx.to_string(s);
          if (!beta.empty()) line += " " + beta;
          lines.push_back(std::move(line));
        }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }

  friend bool operator==(const BackwardTable&, const BackwardTable&) = default;

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i > j || j > n_) throw std::out_of_range("backward table coordinates out of range");
  }

  std::size_t n_;
  std::vector<std::set<SuffixId>> cells_;
  std::size_t count_ = 0;
};

inline const std::set<SuffixId>& forward_query(const ForwardArray& u, std::size_t j) {
  return u.at(j);
}
inline const std::set<SuffixId>& backward_query(const BackwardTable& t, std::size_t i,
                                                std::size_t j) {
  return t.at(i, j);
}

struct VariantResult {
  SuffixSet suffixes;
  ForwardArray u;
  BackwardTable t;
  VariantStats stats;
};

inline VariantResult recognize_variant(const Grammar& g, std::span<const SymbolId> input,
                                       const VariantOptions& opt = {}) {
  for (SymbolId s : input) {
    if (s >= g.symbol_count() || !g.is_terminal(s))
      throw TokenError("input symbol '" + g.name_of(s) + "' is not a terminal of the grammar");
  }

  const std::size_t n = input.size();
  VariantResult res{SuffixSet(g), ForwardArray(n), BackwardTable(n), {}};
  const SuffixSet& sx = res.suffixes;
  ForwardArray& u = res.u;
  BackwardTable& t = res.t;
  VariantStats& st = res.stats;

  struct Entry {
    bool inT;
    SuffixId s;
    std::uint32_t i;  // U: the position; T: left end
    std::uint32_t j;  // U: unused (== i); T: right end
  };
  std::deque<Entry> agenda;

  auto emit = [&](int step, SuffixId s, std::size_t i, std::size_t j) {
    if (opt.observer) opt.observer({step, s, i, j});
  };
  auto sowU = [&](SuffixId s, std::uint32_t j) {
    if (u.insert(s, j)) agenda.push_back({false, s, j, j});
  };
  auto sowT = [&](SuffixId s, std::uint32_t i, std::uint32_t j) {
    if (t.insert(s, i, j)) agenda.push_back({true, s, i, j});
  };

  // Indexes over processed entries only; the popped entry joins against
  // these and is indexed afterwards.
  auto posItemKey = [&](std::uint32_t pos, std::uint64_t id) {
    return static_cast<std::uint64_t>(pos) * sx.size() + id;
  };
  auto posSymKey = [&](std::uint32_t pos, SymbolId sym) {
    return static_cast<std::uint64_t>(pos) * g.symbol_count() + sym;
  };
  // Processed [B beta] in U[k] with nonterminal head B, by (k, B).
  std::unordered_map<std::uint64_t, std::vector<SuffixId>> uByHead;
  // All processed U entries, as (position, item).
  std::unordered_set<std::uint64_t> uDone;
  // Processed [beta] in T[i,j], right ends by (i, beta).
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> tByLeftItem;
  // Processed full-rhs entries [gamma] in T[k,j], (gamma, k) by right end j.
  std::unordered_map<std::uint32_t, std::vector<std::pair<SuffixId, std::uint32_t>>> tFullByRight;

  for (ProductionId p : g.start_productions()) {
    detail::bump(st.seed);
    emit(0, sx.full_rhs(p), 0, 0);
    sowU(sx.full_rhs(p), 0);
  }

  while (!agenda.empty()) {
    Entry e;
    if (opt.agenda == Agenda::Fifo) {
      e = agenda.front();
      agenda.pop_front();
    } else {
      e = agenda.back();
      agenda.pop_back();
    }

    if (!e.inT) {
      const std::uint32_t k = e.i;
      if (e.s == sx.empty_id()) {
        // Step 4: start the backward pass where the forward pass ran a
        // whole rhs to the end.
        detail::bump(st.steps4);
        emit(4, e.s, k, k);
        sowT(e.s, k, k);
      } else {
        SymbolId head = sx.head(e.s);
        SuffixId rest = sx.tail(e.s);
        if (g.is_nonterminal(head)) {
          for (ProductionId p : g.productions_of(head)) {
            SuffixId gamma = sx.full_rhs(p);
            // Step 1: predict.
            detail::bump(st.steps1);
            emit(1, gamma, k, k);
            sowU(gamma, k);
            // Steps 3 and 6, joining as the U antecedent.
            for (std::uint32_t j : tByLeftItem[posItemKey(k, gamma)]) {
              detail::bump(st.steps3);
              emit(3, rest, j, j);
              sowU(rest, j);
              for (std::uint32_t m : tByLeftItem[posItemKey(j, rest)]) {
                detail::bump(st.steps6);
                emit(6, e.s, k, m);
                sowT(e.s, k, m);
              }
            }
          }
          uByHead[posSymKey(k, head)].push_back(e.s);
        } else if (k < n && input[k] == head) {
          // Step 2: forward scan.
          detail::bump(st.steps2);
          emit(2, rest, k + 1, k + 1);
          sowU(rest, k + 1);
          // Step 5, joining as the U antecedent.
          for (std::uint32_t m : tByLeftItem[posItemKey(k + 1, rest)]) {
            detail::bump(st.steps5);
            emit(5, e.s, k, m);
            sowT(e.s, k, m);
          }
        }
      }
      uDone.insert(posItemKey(k, e.s));
    } else {
      // T entry [e.s] spanning (e.i, e.j).
      if (sx.is_full_rhs(e.s)) {
        // Joining as the [gamma] antecedent of steps 3 and 6.
        for (ProductionId p : sx.productions_with_rhs(e.s)) {
          SymbolId lhs = g.production(p).lhs;
          for (SuffixId q : uByHead[posSymKey(e.i, lhs)]) {
            SuffixId rest = sx.tail(q);
            detail::bump(st.steps3);
            emit(3, rest, e.j, e.j);
            sowU(rest, e.j);
            for (std::uint32_t m : tByLeftItem[posItemKey(e.j, rest)]) {
              detail::bump(st.steps6);
              emit(6, q, e.i, m);
              sowT(q, e.i, m);
            }
            // This entry may fill both T slots of step 6 at once.
            if (rest == e.s && e.i == e.j) {
              detail::bump(st.steps6);
              emit(6, q, e.i, e.j);
              sowT(q, e.i, e.j);
            }
          }
        }
      }
      // Joining as the [beta] antecedent of step 6; the [gamma] partner
      // must end where this span starts.
      for (const auto& [gamma, k] : tFullByRight[e.i]) {
        for (ProductionId p : sx.productions_with_rhs(gamma)) {
          auto q = sx.extend(g.production(p).lhs, e.s);
          if (q && uDone.count(posItemKey(k, *q))) {
            detail::bump(st.steps6);
            emit(6, *q, k, e.j);
            sowT(*q, k, e.j);
          }
        }
      }
      // Joining as the [beta] antecedent of step 5.
      if (e.i >= 1) {
        auto q = sx.extend(input[e.i - 1], e.s);
        if (q && uDone.count(posItemKey(e.i - 1, *q))) {
          detail::bump(st.steps5);
          emit(5, *q, e.i - 1, e.j);
          sowT(*q, e.i - 1, e.j);
        }
      }
      tByLeftItem[posItemKey(e.i, e.s)].push_back(e.j);
      if (sx.is_full_rhs(e.s)) tFullByRight[e.j].emplace_back(e.s, e.i);
    }
  }

  for (ProductionId p : g.start_productions()) {
    if (t.contains(sx.full_rhs(p), 0, n)) {
      st.accepted = true;
      break;
    }
  }
  st.uCount = u.item_count();
  st.tCount = t.item_count();
  std::uint64_t steps = 0;
  for (std::uint64_t s :
       {st.steps1, st.steps2, st.steps3, st.steps4, st.steps5, st.steps6, st.seed})
    steps = detail::checked_add(steps, s);
  st.total = steps;
  return res;
}

}  // namespace earleykit
