#pragma once

// Classic Earley recognition over a square item table, with exact
// elementary-step counters.
//
// The table E is the least one closed under seeding [S -> . alpha] in
// E[0,0] for every start production and
//
//   1. [A -> . gamma] in E[j,j]      if [B -> alpha . A beta] in E[i,j],
//                                       (A -> gamma) in P;
//   2. [A -> alpha a . beta] in E[i,j] if [A -> alpha . a beta] in E[i,j-1]
//                                       and a is the j-th input symbol;
//   3. [A -> alpha B . beta] in E[i,j] if [A -> alpha . B beta] in E[i,k],
//                                       [B -> gamma .] in E[k,j].
//
// Each counter counts distinct antecedent tuples, table coordinates
// included, exactly once. The agenda is semi-naive: a rule fires when
// the last of its item antecedents is taken off the worklist and joined
// against the already-processed partners, so every combination fires
// exactly once and the final table and counters are independent of the
// worklist discipline.

#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "earleykit/grammar.hpp"

namespace earleykit {

class CounterOverflowError : public GrammarError {
 public:
  using GrammarError::GrammarError;
};

namespace detail {
inline void bump(std::uint64_t& counter) {
  if (++counter == 0) throw CounterOverflowError("step counter overflow");
}
inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r < a) throw CounterOverflowError("step counter overflow");
  return r;
}
}  // namespace detail

enum class Agenda { Fifo, Lifo };

// One counted rule application; step 0 reports a seed insertion. (i, j)
// are the consequent's coordinates.
struct EarleyEvent {
  int step;
  DottedItem item;
  std::size_t i;
  std::size_t j;
};

struct EarleyOptions {
  Agenda agenda = Agenda::Fifo;
  std::function<void(const EarleyEvent&)> observer;
};

struct EarleyStats {
  std::uint64_t steps1 = 0;
  std::uint64_t steps2 = 0;
  std::uint64_t steps3 = 0;
  std::uint64_t seed = 0;
  std::uint64_t total = 0;
  std::uint64_t itemCount = 0;
  bool accepted = false;

  std::string to_json() const {
    std::string out = "{";
    out += "\"steps1\":" + std::to_string(steps1);
    out += ",\"steps2\":" + std::to_string(steps2);
    out += ",\"steps3\":" + std::to_string(steps3);
    out += ",\"seed\":" + std::to_string(seed);
    out += ",\"total\":" + std::to_string(total);
    out += ",\"items\":" + std::to_string(itemCount);
    out += std::string(",\"accepted\":") + (accepted ? "true" : "false");
    out += "}";
    return out;
  }

  friend bool operator==(const EarleyStats&, const EarleyStats&) = default;
};

// Square table of dotted-item sets; only cells with i <= j are ever
// populated.
class EarleyChart {
 public:
  explicit EarleyChart(std::size_t n) : n_(n), cells_((n + 1) * (n + 1)) {}

  std::size_t length() const { return n_; }

  const std::set<DottedItem>& at(std::size_t i, std::size_t j) const {
    check(i, j);
    return cells_[i * (n_ + 1) + j];
  }

  bool contains(const DottedItem& it, std::size_t i, std::size_t j) const {
    return at(i, j).count(it) > 0;
  }

  bool insert(const DottedItem& it, std::size_t i, std::size_t j) {
    check(i, j);
    bool fresh = cells_[i * (n_ + 1) + j].insert(it).second;
    if (fresh) ++count_;
    return fresh;
  }

  bool erase(const DottedItem& it, std::size_t i, std::size_t j) {
    check(i, j);
    bool gone = cells_[i * (n_ + 1) + j].erase(it) > 0;
    if (gone) --count_;
    return gone;
  }

  // |E| = sum of all cell cardinalities.
  std::size_t item_count() const { return count_; }

  // One line per item, `i j A -> alpha . beta`, sorted lexicographically.
  std::string dump(const Grammar& g) const {
    std::vector<std::string> lines;
    for (std::size_t i = 0; i <= n_; ++i)
      for (std::size_t j = i; j <= n_; ++j)
        for (const auto& it : cells_[i * (n_ + 1) + j])
          lines.push_back(std::to_string(i) + " " + std::to_string(j) + " " +
                          dotted_item_to_string(g, it));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }

  friend bool operator==(const EarleyChart&, const EarleyChart&) = default;

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i > j || j > n_) throw std::out_of_range("chart coordinates out of range");
  }

  std::size_t n_;
  std::vector<std::set<DottedItem>> cells_;
  std::size_t count_ = 0;
};

inline const std::set<DottedItem>& chart_query(const EarleyChart& chart, std::size_t i,
                                               std::size_t j) {
  return chart.at(i, j);
}

struct EarleyResult {
  EarleyChart chart;
  EarleyStats stats;
};

inline EarleyResult recognize_earley(const Grammar& g, std::span<const SymbolId> input,
                                     const EarleyOptions& opt = {}) {
  for (SymbolId s : input) {
    if (s >= g.symbol_count() || !g.is_terminal(s))
      throw TokenError("input symbol '" + g.name_of(s) + "' is not a terminal of the grammar");
  }

  const std::size_t n = input.size();
  EarleyResult res{EarleyChart(n), {}};
  EarleyChart& chart = res.chart;
  EarleyStats& st = res.stats;

  struct Entry {
    ProductionId p;
    std::uint32_t dot;
    std::uint32_t i;
    std::uint32_t j;
  };
  std::deque<Entry> agenda;

  auto emit = [&](int step, DottedItem it, std::size_t i, std::size_t j) {
    if (opt.observer) opt.observer({step, it, i, j});
  };
  auto sow = [&](ProductionId p, std::uint32_t dot, std::uint32_t i, std::uint32_t j) {
    if (chart.insert({p, dot}, i, j)) agenda.push_back({p, dot, i, j});
  };

  // Processed items [A -> alpha . B beta] in E[i,k], indexed by (k, B).
  struct ActiveRec {
    ProductionId p;
    std::uint32_t dot;
    std::uint32_t i;
  };
  std::unordered_map<std::uint64_t, std::vector<ActiveRec>> active;
  // Processed items [B -> gamma .] in E[k,j], indexed by (k, B).
  struct CompleteRec {
    ProductionId p;
    std::uint32_t j;
  };
  std::unordered_map<std::uint64_t, std::vector<CompleteRec>> complete;
  auto key = [&](std::uint32_t pos, SymbolId sym) {
    return static_cast<std::uint64_t>(pos) * g.symbol_count() + sym;
  };

  for (ProductionId p : g.start_productions()) {
    detail::bump(st.seed);
    emit(0, {p, 0}, 0, 0);
    sow(p, 0, 0, 0);
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

    const auto& rhs = g.production(e.p).rhs;
    if (e.dot < rhs.size()) {
      SymbolId next = rhs[e.dot];
      if (g.is_nonterminal(next)) {
        // Step 1: predict.
        for (ProductionId q : g.productions_of(next)) {
          detail::bump(st.steps1);
          emit(1, {q, 0}, e.j, e.j);
          sow(q, 0, e.j, e.j);
        }
        // Step 3, joining as the active item.
        for (const auto& c : complete[key(e.j, next)]) {
          detail::bump(st.steps3);
          emit(3, {e.p, e.dot + 1}, e.i, c.j);
          sow(e.p, e.dot + 1, e.i, c.j);
        }
        active[key(e.j, next)].push_back({e.p, e.dot, e.i});
      } else {
        // Step 2: scan.
        if (e.j < n && input[e.j] == next) {
          detail::bump(st.steps2);
          emit(2, {e.p, e.dot + 1}, e.i, e.j + 1);
          sow(e.p, e.dot + 1, e.i, e.j + 1);
        }
      }
    } else {
      // Step 3, joining as the complete item.
      SymbolId lhs = g.production(e.p).lhs;
      for (const auto& a : active[key(e.i, lhs)]) {
        detail::bump(st.steps3);
        emit(3, {a.p, a.dot + 1}, a.i, e.j);
        sow(a.p, a.dot + 1, a.i, e.j);
      }
      complete[key(e.i, lhs)].push_back({e.p, e.j});
    }
  }

  for (ProductionId p : g.start_productions()) {
    if (chart.contains({p, static_cast<std::uint32_t>(g.production(p).rhs.size())}, 0, n)) {
      st.accepted = true;
      break;
    }
  }
  st.itemCount = chart.item_count();
  st.total = detail::checked_add(detail::checked_add(st.steps1, st.steps2),
                                 detail::checked_add(st.steps3, st.seed));
  return res;
}

}  // namespace earleykit
