#pragma once

// Shared test fixtures: the random grammar corpus, exhaustive string
// generation, and two independent derivation-tree counters used to
// cross-check the library's parse counting.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "earleykit/earley.hpp"
#include "earleykit/grammar.hpp"
#include "earleykit/oracle.hpp"
#include "earleykit/sentgen.hpp"
#include "earleykit/variant.hpp"

namespace testsupport {

using earleykit::Grammar;
using earleykit::ParseCount;
using earleykit::SymbolId;

inline Grammar make_grammar(const std::string& text) { return Grammar::parse(text); }

inline std::vector<SymbolId> tok(const Grammar& g, const std::string& s) { return g.tokenize(s); }

// Small random grammars: up to 6 nonterminals, up to 12 productions,
// rhs length up to 4, terminals {a, b}; epsilon productions and cycles
// arise freely. Every nonterminal gets at least one production so the
// lhs-derived symbol kinds match the intent.
inline Grammar random_grammar(earleykit::SplitMix64& rng) {
  static const std::vector<std::string> nt_pool = {"S", "A", "B", "C", "D", "E"};
  static const std::vector<std::string> term_pool = {"a", "b"};

  std::size_t n_nt = 1 + rng.bounded(6);
  std::size_t n_prods = n_nt + rng.bounded(12 - n_nt + 1);

  earleykit::GrammarBuilder builder;
  for (std::size_t p = 0; p < n_prods; ++p) {
    const std::string& lhs = p < n_nt ? nt_pool[p] : nt_pool[rng.bounded(n_nt)];
    std::size_t len_draw = rng.bounded(11);  // weights 2,3,3,2,1 over lengths 0..4
    std::size_t len = len_draw < 2 ? 0 : len_draw < 5 ? 1 : len_draw < 8 ? 2 : len_draw < 10 ? 3 : 4;
    std::vector<std::string> rhs;
    for (std::size_t k = 0; k < len; ++k) {
      if (rng.bounded(100) < 45)
        rhs.push_back(term_pool[rng.bounded(term_pool.size())]);
      else
        rhs.push_back(nt_pool[rng.bounded(n_nt)]);
    }
    builder.production(lhs, std::move(rhs));
  }
  builder.start("S");
  return builder.build();
}

// All strings over {a, b} of length <= max_len, as space-joined token
// text; index 0 is the empty sentence.
inline std::vector<std::string> all_ab_strings(std::size_t max_len) {
  std::vector<std::string> out = {""};
  std::vector<std::string> layer = {""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& s : layer)
      for (const char* t : {"a", "b"}) {
        std::string w = s.empty() ? t : s + " " + t;
        next.push_back(w);
        out.push_back(w);
      }
    layer.swap(next);
  }
  return out;
}

// Exhaustive tree enumeration with the same-span ancestor exclusion,
// capped: the result is exact whenever it is below the cap. No
// memoization; termination comes from the ancestor set alone. Returns
// the cap once the exploration budget runs out.
inline std::uint64_t enumerate_acyclic_trees(const Grammar& g, std::span<const SymbolId> w,
                                             std::uint64_t cap,
                                             std::uint64_t budget = 4'000'000) {
  std::set<std::tuple<SymbolId, std::size_t, std::size_t>> ancestors;

  // cap is small, so capped inputs never overflow the products
  auto add_capped = [cap](std::uint64_t a, std::uint64_t b) {
    return a >= cap || b >= cap || a + b >= cap ? cap : a + b;
  };
  auto mul_capped = [cap](std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return std::uint64_t{0};
    if (a >= cap || b >= cap) return cap;
    return a * b >= cap ? cap : a * b;
  };

  std::function<std::uint64_t(SymbolId, std::size_t, std::size_t)> count_sym;
  std::function<std::uint64_t(std::span<const SymbolId>, std::size_t, std::size_t)> count_seq =
      [&](std::span<const SymbolId> rhs, std::size_t i, std::size_t j) -> std::uint64_t {
    if (budget == 0) return cap;
    --budget;
    if (rhs.empty()) return i == j ? 1 : 0;
    SymbolId x = rhs.front();
    std::uint64_t total = 0;
    if (g.is_terminal(x)) {
      if (i < j && w[i] == x) total = count_seq(rhs.subspan(1), i + 1, j);
    } else {
      for (std::size_t k = i; k <= j; ++k) {
        std::uint64_t first = count_sym(x, i, k);
        if (first) total = add_capped(total, mul_capped(first, count_seq(rhs.subspan(1), k, j)));
      }
    }
    return total;
  };
  count_sym = [&](SymbolId a, std::size_t i, std::size_t j) -> std::uint64_t {
    auto key = std::make_tuple(a, i, j);
    if (ancestors.count(key)) return 0;
    ancestors.insert(key);
    std::uint64_t total = 0;
    for (earleykit::ProductionId p : g.productions_of(a))
      total = add_capped(total, count_seq(g.production(p).rhs, i, j));
    ancestors.erase(key);
    return total;
  };
  return count_sym(g.start(), 0, w.size());
}

// Reference step counts for the classic engine: build the least table
// by naive round iteration, then count each rule's distinct antecedent
// tuples by direct enumeration over the final table. Combinations fire
// exactly once in the worklist engines, so the numbers must match.
inline earleykit::EarleyStats reference_earley_stats(const Grammar& g,
                                                     std::span<const SymbolId> w) {
  using earleykit::DottedItem;
  const std::size_t n = w.size();
  std::set<std::tuple<earleykit::ProductionId, std::uint32_t, std::size_t, std::size_t>> table;

  for (earleykit::ProductionId p : g.start_productions()) table.insert({p, 0, 0, 0});
  bool changed = true;
  while (changed) {
    changed = false;
    auto snapshot = table;
    for (const auto& [p, d, i, j] : snapshot) {
      const auto& rhs = g.production(p).rhs;
      if (d < rhs.size()) {
        SymbolId x = rhs[d];
        if (g.is_nonterminal(x)) {
          for (earleykit::ProductionId q : g.productions_of(x))
            changed |= table.insert({q, 0, j, j}).second;
          for (const auto& [p2, d2, i2, j2] : snapshot) {
            const auto& rhs2 = g.production(p2).rhs;
            if (d2 == rhs2.size() && g.production(p2).lhs == x && i2 == j)
              changed |= table.insert({p, d + 1, i, j2}).second;
          }
        } else if (j < n && w[j] == x) {
          changed |= table.insert({p, d + 1, i, j + 1}).second;
        }
      }
    }
  }

  earleykit::EarleyStats st;
  st.seed = g.start_productions().size();
  for (const auto& [p, d, i, j] : table) {
    const auto& rhs = g.production(p).rhs;
    if (d >= rhs.size()) continue;
    SymbolId x = rhs[d];
    if (g.is_nonterminal(x)) {
      st.steps1 += g.productions_of(x).size();
      for (const auto& [p2, d2, i2, j2] : table) {
        const auto& rhs2 = g.production(p2).rhs;
        if (d2 == rhs2.size() && g.production(p2).lhs == x && i2 == j) ++st.steps3;
      }
    } else if (j < n && w[j] == x) {
      ++st.steps2;
    }
  }
  st.itemCount = table.size();
  st.total = st.steps1 + st.steps2 + st.steps3 + st.seed;
  for (earleykit::ProductionId p : g.start_productions())
    if (table.count({p, static_cast<std::uint32_t>(g.production(p).rhs.size()), 0, n}))
      st.accepted = true;
  return st;
}

// Same idea for the suffix-item engine.
inline earleykit::VariantStats reference_variant_stats(const Grammar& g,
                                                       std::span<const SymbolId> w) {
  const std::size_t n = w.size();
  earleykit::SuffixSet sx(g);
  std::set<std::pair<earleykit::SuffixId, std::size_t>> u;
  std::set<std::tuple<earleykit::SuffixId, std::size_t, std::size_t>> t;

  for (earleykit::ProductionId p : g.start_productions()) u.insert({sx.full_rhs(p), 0});
  bool changed = true;
  while (changed) {
    changed = false;
    auto us = u;
    auto ts = t;
    for (const auto& [s, j] : us) {
      if (s == sx.empty_id()) {
        changed |= t.insert({s, j, j}).second;
        continue;
      }
      SymbolId head = sx.head(s);
      earleykit::SuffixId rest = sx.tail(s);
      if (g.is_nonterminal(head)) {
        for (earleykit::ProductionId p : g.productions_of(head)) {
          changed |= u.insert({sx.full_rhs(p), j}).second;
          for (const auto& [s2, i2, j2] : ts) {
            if (s2 != sx.full_rhs(p) || i2 != j) continue;
            changed |= u.insert({rest, j2}).second;
            for (const auto& [s3, i3, j3] : ts)
              if (s3 == rest && i3 == j2) changed |= t.insert({s, j, j3}).second;
          }
        }
      } else if (j < n && w[j] == head) {
        changed |= u.insert({rest, j + 1}).second;
        for (const auto& [s2, i2, j2] : ts)
          if (s2 == rest && i2 == j + 1) changed |= t.insert({s, j, j2}).second;
      }
    }
  }

  earleykit::VariantStats st;
  st.seed = g.start_productions().size();
  for (const auto& [s, j] : u) {
    if (s == sx.empty_id()) {
      ++st.steps4;
      continue;
    }
    SymbolId head = sx.head(s);
    earleykit::SuffixId rest = sx.tail(s);
    if (g.is_nonterminal(head)) {
      for (earleykit::ProductionId p : g.productions_of(head)) {
        st.steps1 += 1;
        for (const auto& [s2, i2, j2] : t) {
          if (s2 != sx.full_rhs(p) || i2 != j) continue;
          ++st.steps3;
          for (const auto& [s3, i3, j3] : t)
            if (s3 == rest && i3 == j2) ++st.steps6;
        }
      }
    } else if (j < n && w[j] == head) {
      ++st.steps2;
      for (const auto& [s2, i2, j2] : t)
        if (s2 == rest && i2 == j + 1) ++st.steps5;
    }
  }
  st.uCount = u.size();
  st.tCount = t.size();
  st.total =
      st.steps1 + st.steps2 + st.steps3 + st.steps4 + st.steps5 + st.steps6 + st.seed;
  for (earleykit::ProductionId p : g.start_productions())
    if (t.count({sx.full_rhs(p), 0, n})) st.accepted = true;
  return st;
}

// Unrestricted tree counting for grammars without cyclic derivations.
// Splits are pruned by the derivability oracle, which keeps the
// same-span recursion inside the (acyclic) nullable unit-reach graph.
inline ParseCount count_all_trees(const Grammar& g, std::span<const SymbolId> w) {
  earleykit::OracleLimits limits;
  earleykit::DerivabilityTable tbl(g, w, limits);
  std::map<std::tuple<SymbolId, std::size_t, std::size_t>, ParseCount> memo;

  std::function<ParseCount(SymbolId, std::size_t, std::size_t)> count_sym;
  std::function<ParseCount(std::span<const SymbolId>, std::size_t, std::size_t)> count_seq =
      [&](std::span<const SymbolId> rhs, std::size_t i, std::size_t j) -> ParseCount {
    if (rhs.empty()) return i == j ? 1 : 0;
    SymbolId x = rhs.front();
    ParseCount total = 0;
    if (g.is_terminal(x)) {
      if (i < j && w[i] == x) total = count_seq(rhs.subspan(1), i + 1, j);
    } else {
      for (std::size_t k = i; k <= j; ++k) {
        if (!tbl.nonterminal(x, i, k)) continue;
        if (!tbl.sequence(rhs.subspan(1), k, j)) continue;
        total += count_sym(x, i, k) * count_seq(rhs.subspan(1), k, j);
      }
    }
    return total;
  };
  count_sym = [&](SymbolId a, std::size_t i, std::size_t j) -> ParseCount {
    auto key = std::make_tuple(a, i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    ParseCount total = 0;
    for (earleykit::ProductionId p : g.productions_of(a))
      total += count_seq(g.production(p).rhs, i, j);
    memo.emplace(key, total);
    return total;
  };
  return count_sym(g.start(), 0, w.size());
}

}  // namespace testsupport
