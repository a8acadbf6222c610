#pragma once

// Seeded random sentence generation: repeatedly expand the leftmost
// nonterminal with a production drawn uniformly from its alternatives,
// abandoning and redrawing whenever the expansion depth or the sentence
// length runs over its limit. Output is a pure function of (grammar,
// config) and identical across platforms.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "earleykit/grammar.hpp"

namespace earleykit {

class GenerationError : public GrammarError {
 public:
  using GrammarError::GrammarError;
};

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::size_t maxDepth = 64;
  std::size_t maxLen = 40;
  std::size_t maxAttempts = 1000;  // per sentence
};

// splitmix64 (Steele, Lea, Flood / Vigna): the state advances by the
// 64-bit golden-ratio constant and each output is a finalizing mix of
// it. Chosen because it is trivially portable and has published
// known-answer vectors.
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, n) by rejection: redraw while the raw value
  // falls in the final partial bucket of size 2^64 mod n.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded(0)");
    std::uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    std::uint64_t r = next();
    if (rem != 0) {
      std::uint64_t limit = std::uint64_t{0} - rem;  // 2^64 - rem
      while (r >= limit) r = next();
    }
    return r % n;
  }

 private:
  std::uint64_t state_;
};

// Nonterminals that derive at least one terminal string.
inline std::vector<char> productive_symbols(const Grammar& g) {
  std::vector<char> productive(g.symbol_count(), 0);
  for (const auto& s : g.symbols())
    if (s.kind == SymbolKind::Terminal) productive[s.id] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (productive[p.lhs]) continue;
      bool all = true;
      for (SymbolId x : p.rhs)
        if (!productive[x]) {
          all = false;
          break;
        }
      if (all) {
        productive[p.lhs] = 1;
        changed = true;
      }
    }
  }
  return productive;
}

inline std::vector<std::vector<SymbolId>> generate_sentences(const Grammar& g,
                                                             const GenConfig& cfg) {
  if (cfg.count < 1) throw std::invalid_argument("count must be at least 1");
  if (cfg.maxAttempts < 1) throw std::invalid_argument("maxAttempts must be at least 1");
  if (!productive_symbols(g)[g.start()])
    throw GenerationError("start symbol derives no terminal string");

  SplitMix64 rng(cfg.seed);
  std::vector<std::vector<SymbolId>> out;
  out.reserve(cfg.count);

  for (std::size_t k = 0; k < cfg.count; ++k) {
    std::size_t attempts = 0;
    while (true) {
      if (attempts == cfg.maxAttempts)
        throw GenerationError("attempts exhausted after " + std::to_string(cfg.maxAttempts) +
                              " tries for sentence " + std::to_string(k + 1));
      ++attempts;

      // pending symbols, rightmost on top so the leftmost pops first
      std::vector<std::pair<SymbolId, std::size_t>> pending;
      pending.push_back({g.start(), 0});
      std::vector<SymbolId> sentence;
      bool ok = true;
      while (!pending.empty()) {
        auto [x, depth] = pending.back();
        pending.pop_back();
        if (g.is_terminal(x)) {
          sentence.push_back(x);
          if (sentence.size() > cfg.maxLen) {
            ok = false;
            break;
          }
        } else {
          if (depth >= cfg.maxDepth) {
            ok = false;
            break;
          }
          auto prods = g.productions_of(x);
          ProductionId p = prods[rng.bounded(prods.size())];
          const auto& rhs = g.production(p).rhs;
          for (auto it = rhs.rbegin(); it != rhs.rend(); ++it)
            pending.push_back({*it, depth + 1});
        }
      }
      if (ok) {
        out.push_back(std::move(sentence));
        break;
      }
    }
  }
  return out;
}

}  // namespace earleykit
