#pragma once

// Brute-force ground truth, independent of the recognizers: derivability
// decisions by memoized span splitting, bounded language enumeration,
// derivation-tree counting with cyclic subderivations excluded, and the
// table characterizations the recognizers are audited against.
//
// Everything here is capped and intentionally naive; it exists to check
// the engines, not to be fast.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "earleykit/earley.hpp"
#include "earleykit/grammar.hpp"
#include "earleykit/variant.hpp"

namespace earleykit {

using ParseCount = boost::multiprecision::cpp_int;

class CapError : public GrammarError {
 public:
  using GrammarError::GrammarError;
};

struct OracleLimits {
  std::size_t maxTarget = 12;         // derivability targets
  std::size_t maxLanguageLength = 8;  // enumerate_language
  std::size_t maxCountTarget = 64;    // parse counting
  std::size_t maxGrammarSize = 512;   // |G|
};

// Decides origin =>* w[i..j) for one fixed (grammar, target) pair.
//
// Nonterminal queries are memoized span-splitting recursion. Re-entering
// a nonterminal while it is being evaluated on the same span is cut off:
// a derivation with a same-span repeat along an ancestor chain always
// has a smaller repeat-free witness, so the cut never loses answers.
// Negative results are only memoized when no other evaluation was in
// progress on that span, since a cut below an in-progress ancestor is
// path-dependent.
class DerivabilityTable {
 public:
  DerivabilityTable(const Grammar& g, std::span<const SymbolId> target,
                    const OracleLimits& limits = {})
      : g_(&g), w_(target.begin(), target.end()) {
    if (g.size() > limits.maxGrammarSize) throw CapError("grammar size exceeds oracle cap");
    if (w_.size() > limits.maxTarget) throw CapError("target length exceeds oracle cap");
    for (SymbolId s : w_)
      if (s >= g.symbol_count() || !g.is_terminal(s))
        throw TokenError("target symbol '" + g.name_of(s) + "' is not a terminal");
    n_ = w_.size();
    memo_.assign(g.symbol_count() * (n_ + 1) * (n_ + 1), Unknown);
  }

  std::size_t length() const { return n_; }

  bool nonterminal(SymbolId a, std::size_t i, std::size_t j) {
    std::size_t c = cell(a, i, j);
    if (memo_[c] != Unknown) return memo_[c] == True;
    if (on_stack_.count(c)) return false;  // same-span ancestor cut

    std::uint64_t span = i * (n_ + 1) + j;
    bool top = span_active_[span] == 0;
    ++span_active_[span];
    on_stack_.insert(c);

    bool result = false;
    for (ProductionId p : g_->productions_of(a)) {
      if (sequence(g_->production(p).rhs, i, j)) {
        result = true;
        break;
      }
    }

    on_stack_.erase(c);
    --span_active_[span];
    if (result)
      memo_[c] = True;
    else if (top)
      memo_[c] = False;
    return result;
  }

  bool sequence(std::span<const SymbolId> origin, std::size_t i, std::size_t j) {
    if (i > j || j > n_) return false;
    std::vector<char> ends = ends_within(origin, i, j);
    return ends[j] != 0;
  }

  // All positions e with origin =>* w[i..e); e ranges up to n.
  std::vector<char> reachable_ends(std::span<const SymbolId> origin, std::size_t i) {
    return ends_within(origin, i, n_);
  }

 private:
  enum State : std::int8_t { Unknown = 0, True = 1, False = 2 };

  std::size_t cell(SymbolId a, std::size_t i, std::size_t j) const {
    return (a * (n_ + 1) + i) * (n_ + 1) + j;
  }

  std::vector<char> ends_within(std::span<const SymbolId> origin, std::size_t i,
                                std::size_t bound) {
    std::vector<char> cur(n_ + 1, 0);
    if (i > bound) return cur;
    cur[i] = 1;
    for (SymbolId x : origin) {
      std::vector<char> next(n_ + 1, 0);
      bool any = false;
      for (std::size_t p = i; p <= bound; ++p) {
        if (!cur[p]) continue;
        if (g_->is_terminal(x)) {
          if (p < bound && w_[p] == x) {
            next[p + 1] = 1;
            any = true;
          }
        } else {
          for (std::size_t q = p; q <= bound; ++q) {
            if (!next[q] && nonterminal(x, p, q)) {
              next[q] = 1;
              any = true;
            }
          }
        }
      }
      cur.swap(next);
      if (!any) return cur;
    }
    return cur;
  }

  const Grammar* g_;
  std::vector<SymbolId> w_;
  std::size_t n_ = 0;
  std::vector<std::int8_t> memo_;
  std::unordered_set<std::uint64_t> on_stack_;
  std::unordered_map<std::uint64_t, int> span_active_;
};

// origin =>* target.
inline bool derives(const Grammar& g, std::span<const SymbolId> origin,
                    std::span<const SymbolId> target, const OracleLimits& limits = {}) {
  DerivabilityTable tbl(g, target, limits);
  return tbl.sequence(origin, 0, target.size());
}

// Exactly { w | S =>* w, |w| <= max_len }, as space-joined terminal
// names (the empty sentence is the empty string). Computed as a least
// fixpoint of length-bounded string sets per nonterminal, which
// terminates on cyclic and fully nullable grammars.
inline std::set<std::string> enumerate_language(const Grammar& g, std::size_t max_len,
                                                const OracleLimits& limits = {}) {
  if (max_len > limits.maxLanguageLength) throw CapError("length bound exceeds oracle cap");
  if (g.size() > limits.maxGrammarSize) throw CapError("grammar size exceeds oracle cap");

  std::vector<std::set<std::vector<SymbolId>>> lang(g.symbol_count());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      std::set<std::vector<SymbolId>> partial;
      partial.emplace();
      for (SymbolId x : p.rhs) {
        std::set<std::vector<SymbolId>> next;
        for (const auto& s : partial) {
          if (g.is_terminal(x)) {
            if (s.size() + 1 <= max_len) {
              auto t = s;
              t.push_back(x);
              next.insert(std::move(t));
            }
          } else {
            for (const auto& piece : lang[x]) {
              if (s.size() + piece.size() <= max_len) {
                auto t = s;
                t.insert(t.end(), piece.begin(), piece.end());
                next.insert(std::move(t));
              }
            }
          }
        }
        partial.swap(next);
        if (partial.empty()) break;
      }
      for (const auto& s : partial)
        if (lang[p.lhs].insert(s).second) changed = true;
    }
  }

  std::set<std::string> out;
  for (const auto& s : lang[g.start()]) out.insert(g.untokenize(s));
  return out;
}

// True iff some A =>+ A. Computed from the nullable set and the
// same-span unit-reachability graph.
inline bool has_cyclic_derivations(const Grammar& g) {
  std::vector<char> nullable(g.symbol_count(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (nullable[p.lhs]) continue;
      bool all = true;
      for (SymbolId x : p.rhs)
        if (!(g.is_nonterminal(x) && nullable[x])) {
          all = false;
          break;
        }
      if (all) {
        nullable[p.lhs] = 1;
        changed = true;
      }
    }
  }

  // edges A -> B where A => alpha B beta with alpha, beta nullable
  std::vector<std::vector<SymbolId>> adj(g.symbol_count());
  for (const auto& p : g.productions()) {
    for (std::size_t t = 0; t < p.rhs.size(); ++t) {
      SymbolId b = p.rhs[t];
      if (!g.is_nonterminal(b)) continue;
      bool rest_nullable = true;
      for (std::size_t u = 0; u < p.rhs.size(); ++u) {
        if (u == t) continue;
        if (!(g.is_nonterminal(p.rhs[u]) && nullable[p.rhs[u]])) {
          rest_nullable = false;
          break;
        }
      }
      if (rest_nullable) adj[p.lhs].push_back(b);
    }
  }

  std::vector<int> color(g.symbol_count(), 0);  // 0 new, 1 active, 2 done
  std::vector<std::pair<SymbolId, std::size_t>> stack;
  for (SymbolId s = 0; s < g.symbol_count(); ++s) {
    if (!g.is_nonterminal(s) || color[s]) continue;
    stack.push_back({s, 0});
    color[s] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[v].size()) {
        SymbolId w = adj[v][idx++];
        if (color[w] == 1) return true;
        if (color[w] == 0) {
          color[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

// Number of derivation trees for S =>* w containing no node that has a
// proper descendant with the same nonterminal over the same span (the
// tree form of A =>+ A). Arbitrary precision.
inline ParseCount count_acyclic_parses(const Grammar& g, std::span<const SymbolId> w,
                                       const OracleLimits& limits = {}) {
  if (g.size() > limits.maxGrammarSize) throw CapError("grammar size exceeds oracle cap");
  if (w.size() > limits.maxCountTarget) throw CapError("input length exceeds oracle cap");
  for (SymbolId s : w)
    if (s >= g.symbol_count() || !g.is_terminal(s))
      throw TokenError("input symbol '" + g.name_of(s) + "' is not a terminal");
  if (g.nonterminal_count() > 64) throw CapError("too many nonterminals for parse counting");

  const std::size_t n = w.size();
  std::vector<int> ord(g.symbol_count(), -1);
  int next_ord = 0;
  for (const auto& s : g.symbols())
    if (s.kind == SymbolKind::Nonterminal) ord[s.id] = next_ord++;

  // Counts depend on the set of same-span evaluations in progress (the
  // excluded ancestor chain), so the memo key carries that mask.
  std::map<std::tuple<SymbolId, std::size_t, std::size_t, std::uint64_t>, ParseCount> memo;
  std::unordered_map<std::uint64_t, std::uint64_t> active_mask;

  std::function<ParseCount(SymbolId, std::size_t, std::size_t)> count_nt =
      [&](SymbolId a, std::size_t i, std::size_t j) -> ParseCount {
    std::uint64_t span = i * (n + 1) + j;
    std::uint64_t mask = active_mask[span];
    std::uint64_t bit = std::uint64_t{1} << ord[a];
    if (mask & bit) return 0;
    auto key = std::make_tuple(a, i, j, mask);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    active_mask[span] |= bit;
    ParseCount total = 0;
    for (ProductionId p : g.productions_of(a)) {
      const auto& rhs = g.production(p).rhs;
      // ways[t][q] = trees for rhs[t..] over w[q..j)
      std::vector<std::vector<std::optional<ParseCount>>> ways(
          rhs.size() + 1, std::vector<std::optional<ParseCount>>(n + 1));
      std::function<ParseCount(std::size_t, std::size_t)> seq =
          [&](std::size_t t, std::size_t q) -> ParseCount {
        if (t == rhs.size()) return q == j ? 1 : 0;
        if (ways[t][q]) return *ways[t][q];
        ParseCount sum = 0;
        SymbolId x = rhs[t];
        if (g.is_terminal(x)) {
          if (q < j && w[q] == x) sum = seq(t + 1, q + 1);
        } else {
          for (std::size_t r = q; r <= j; ++r) {
            ParseCount first = count_nt(x, q, r);
            if (first != 0) sum += first * seq(t + 1, r);
          }
        }
        ways[t][q] = sum;
        return sum;
      };
      total += seq(0, i);
    }
    active_mask[span] &= ~bit;
    memo.emplace(key, total);
    return total;
  };

  return count_nt(g.start(), 0, n);
}

// Positions where each nonterminal is predictable: pred[A][i] is true
// iff S =>* a_1..a_i A gamma for some gamma. Least fixpoint over
// (nonterminal, position) pairs, with prefix derivability decided by
// the span oracle.
inline std::vector<std::vector<char>> predictable_positions(const Grammar& g,
                                                            std::span<const SymbolId> w,
                                                            DerivabilityTable& tbl) {
  const std::size_t n = w.size();
  std::vector<std::vector<char>> pred(g.symbol_count(), std::vector<char>(n + 1, 0));
  std::vector<std::pair<SymbolId, std::size_t>> work;
  auto mark = [&](SymbolId a, std::size_t i) {
    if (!pred[a][i]) {
      pred[a][i] = 1;
      work.push_back({a, i});
    }
  };
  mark(g.start(), 0);
  while (!work.empty()) {
    auto [b, k] = work.back();
    work.pop_back();
    for (ProductionId p : g.productions_of(b)) {
      const auto& rhs = g.production(p).rhs;
      std::vector<char> ends(n + 1, 0);
      ends[k] = 1;
      for (std::size_t t = 0; t < rhs.size(); ++t) {
        SymbolId x = rhs[t];
        if (g.is_nonterminal(x))
          for (std::size_t e = k; e <= n; ++e)
            if (ends[e]) mark(x, e);
        // advance the reachable prefix ends over x
        std::vector<char> next(n + 1, 0);
        bool any = false;
        for (std::size_t e = k; e <= n; ++e) {
          if (!ends[e]) continue;
          if (g.is_terminal(x)) {
            if (e < n && w[e] == x) {
              next[e + 1] = 1;
              any = true;
            }
          } else {
            for (std::size_t q = e; q <= n; ++q)
              if (!next[q] && tbl.nonterminal(x, e, q)) {
                next[q] = 1;
                any = true;
              }
          }
        }
        ends.swap(next);
        if (!any) break;
      }
    }
  }
  return pred;
}

// Audits a chart against the item characterization: [A -> alpha . beta]
// belongs in E[i,j] iff A is predictable at i and alpha =>* a_{i+1}..a_j.
// Returns one message per mismatch; empty means the chart is exact.
inline std::vector<std::string> audit_earley_chart(const Grammar& g, std::span<const SymbolId> w,
                                                  const EarleyChart& chart,
                                                  const OracleLimits& limits = {}) {
  const std::size_t n = w.size();
  std::vector<std::string> violations;
  if (chart.length() != n) {
    violations.push_back("chart length does not match input length");
    return violations;
  }
  DerivabilityTable tbl(g, w, limits);
  auto pred = predictable_positions(g, w, tbl);

  for (const auto& p : g.productions()) {
    for (std::size_t i = 0; i <= n; ++i) {
      std::vector<char> ends(n + 1, 0);
      ends[i] = 1;
      for (std::uint32_t d = 0; d <= p.rhs.size(); ++d) {
        for (std::size_t j = i; j <= n; ++j) {
          bool expected = pred[p.lhs][i] && ends[j];
          bool actual = chart.contains({p.id, d}, i, j);
          if (expected != actual) {
            violations.push_back("E[" + std::to_string(i) + "," + std::to_string(j) + "] " +
                                 (expected ? "missing: " : "spurious: ") +
                                 dotted_item_to_string(g, {p.id, d}));
          }
        }
        if (d < p.rhs.size()) {
          SymbolId x = p.rhs[d];
          std::vector<char> next(n + 1, 0);
          for (std::size_t e = i; e <= n; ++e) {
            if (!ends[e]) continue;
            if (g.is_terminal(x)) {
              if (e < n && w[e] == x) next[e + 1] = 1;
            } else {
              for (std::size_t q = e; q <= n; ++q)
                if (!next[q] && tbl.nonterminal(x, e, q)) next[q] = 1;
            }
          }
          ends.swap(next);
        }
      }
    }
  }
  return violations;
}

// Audits U and T against the supplied Earley chart: U[j] must hold
// exactly the post-dot suffixes of items anywhere in column j of E, and
// T[j,k] exactly those of them that derive a_{j+1}..a_k.
inline std::vector<std::string> audit_variant_tables(const Grammar& g, std::span<const SymbolId> w,
                                                   const EarleyChart& chart, const ForwardArray& u,
                                                   const BackwardTable& t,
                                                   const OracleLimits& limits = {}) {
  const std::size_t n = w.size();
  std::vector<std::string> violations;
  if (chart.length() != n || u.length() != n || t.length() != n) {
    violations.push_back("table lengths do not match input length");
    return violations;
  }
  SuffixSet sx(g);
  DerivabilityTable tbl(g, w, limits);

  std::vector<std::set<SuffixId>> expected_u(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j)
      for (const auto& it : chart.at(i, j)) expected_u[j].insert(sx.after_dot(it.production, it.dot));

  for (std::size_t j = 0; j <= n; ++j) {
    for (SuffixId s : expected_u[j])
      if (!u.contains(s, j))
        violations.push_back("U[" + std::to_string(j) + "] missing: . " + sx.to_string(s));
    for (SuffixId s : u.at(j))
      if (!expected_u[j].count(s))
        violations.push_back("U[" + std::to_string(j) + "] spurious: . " + sx.to_string(s));
  }

  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t k = j; k <= n; ++k) {
      std::set<SuffixId> expected;
      for (SuffixId s : expected_u[j])
        if (tbl.sequence(sx.symbols(s), j, k)) expected.insert(s);
      for (SuffixId s : expected)
        if (!t.contains(s, j, k))
          violations.push_back("T[" + std::to_string(j) + "," + std::to_string(k) +
                               "] missing: . " + sx.to_string(s));
      for (SuffixId s : t.at(j, k))
        if (!expected.count(s))
          violations.push_back("T[" + std::to_string(j) + "," + std::to_string(k) +
                               "] spurious: . " + sx.to_string(s));
    }
  }
  return violations;
}

}  // namespace earleykit
