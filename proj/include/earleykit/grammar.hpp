#pragma once

// Context-free grammar model: interned symbols, productions, the text
// format, item enumeration, and the two-normal-form suffix cover
// transform.
//
// A Grammar is immutable once built and safe to share across threads.
// Symbols are interned per grammar; ids are dense and assigned in first
// appearance order (left-hand side first, then right-hand side symbols,
// production by production), so all downstream iteration is
// deterministic.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace earleykit {

using SymbolId = std::uint32_t;
using ProductionId = std::uint32_t;
using SuffixId = std::uint32_t;

enum class SymbolKind : unsigned char { Terminal, Nonterminal };

struct Symbol {
  SymbolId id;
  SymbolKind kind;
  std::string name;
};

// rhs of length 0 encodes an epsilon production.
struct Production {
  ProductionId id;
  SymbolId lhs;
  std::vector<SymbolId> rhs;
};

class GrammarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text-format error carrying a 1-based line number.
class GrammarParseError : public GrammarError {
 public:
  GrammarParseError(std::size_t line, const std::string& msg)
      : GrammarError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input token that is not a terminal of the grammar at hand.
class TokenError : public GrammarError {
 public:
  using GrammarError::GrammarError;
};

class GrammarBuilder;

class Grammar {
 public:
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  const std::string& name_of(SymbolId id) const { return symbols_.at(id).name; }
  std::size_t symbol_count() const { return symbols_.size(); }

  std::optional<SymbolId> find_symbol(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  bool is_nonterminal(SymbolId id) const {
    return symbols_.at(id).kind == SymbolKind::Nonterminal;
  }
  bool is_terminal(SymbolId id) const { return !is_nonterminal(id); }

  const std::vector<Production>& productions() const { return productions_; }
  const Production& production(ProductionId p) const { return productions_.at(p); }

  // Productions with the given left-hand side, in id order. Empty for
  // terminals.
  std::span<const ProductionId> productions_of(SymbolId lhs) const {
    static const std::vector<ProductionId> kNone;
    if (lhs >= productions_of_.size()) return kNone;
    return productions_of_[lhs];
  }

  SymbolId start() const { return start_; }
  std::span<const ProductionId> start_productions() const { return productions_of(start_); }

  // |G| = sum over productions of (1 + rhs length).
  std::size_t size() const { return size_; }

  std::size_t terminal_count() const { return terminal_count_; }
  std::size_t nonterminal_count() const { return symbols_.size() - terminal_count_; }

  // Maps whitespace-separated terminal names to symbol ids. Unknown
  // names raise TokenError; known nonterminal names pass through here
  // and are rejected by the recognizers.
  std::vector<SymbolId> tokenize(std::string_view sentence) const {
    std::vector<SymbolId> out;
    std::size_t pos = 0;
    while (pos < sentence.size()) {
      while (pos < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[pos]))) ++pos;
      std::size_t begin = pos;
      while (pos < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[pos]))) ++pos;
      if (pos == begin) break;
      auto name = sentence.substr(begin, pos - begin);
      auto id = find_symbol(name);
      if (!id) throw TokenError("unknown terminal '" + std::string(name) + "'");
      out.push_back(*id);
    }
    return out;
  }

  std::string untokenize(std::span<const SymbolId> sentence) const {
    std::string out;
    for (std::size_t k = 0; k < sentence.size(); ++k) {
      if (k) out += ' ';
      out += name_of(sentence[k]);
    }
    return out;
  }

  // Canonical text form: %start line, then one production per line in
  // id order. parse(serialize()) is isomorphic to *this.
  std::string serialize() const {
    std::string out = "%start " + name_of(start_) + "\n";
    for (const auto& p : productions_) {
      out += name_of(p.lhs) + " ->";
      for (SymbolId s : p.rhs) {
        out += ' ';
        out += name_of(s);
      }
      out += '\n';
    }
    return out;
  }

  static Grammar parse(std::string_view text);

 private:
  friend class GrammarBuilder;
  Grammar() = default;

  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::vector<Production> productions_;
  std::vector<std::vector<ProductionId>> productions_of_;
  SymbolId start_ = 0;
  std::size_t size_ = 0;
  std::size_t terminal_count_ = 0;
};

// Assembles a Grammar from (lhs, rhs) name pairs. Nonterminals are
// exactly the names that occur on a left-hand side; duplicate
// productions (same lhs, same rhs) collapse to one; the start symbol
// defaults to the first production's lhs.
class GrammarBuilder {
 public:
  GrammarBuilder& production(std::string lhs, std::vector<std::string> rhs) {
    raw_.push_back({std::move(lhs), std::move(rhs)});
    return *this;
  }

  GrammarBuilder& start(std::string name) {
    start_ = std::move(name);
    return *this;
  }

  Grammar build() const {
    if (raw_.empty()) throw GrammarError("grammar has no productions");

    std::unordered_map<std::string, bool> on_lhs;
    for (const auto& rp : raw_) on_lhs[rp.lhs] = true;

    Grammar g;
    auto intern = [&](const std::string& name) -> SymbolId {
      auto it = g.by_name_.find(name);
      if (it != g.by_name_.end()) return it->second;
      validate_name(name);
      SymbolId id = static_cast<SymbolId>(g.symbols_.size());
      SymbolKind kind = on_lhs.count(name) ? SymbolKind::Nonterminal : SymbolKind::Terminal;
      g.symbols_.push_back({id, kind, name});
      g.by_name_.emplace(name, id);
      return id;
    };

    std::map<std::pair<SymbolId, std::vector<SymbolId>>, bool> seen;
    for (const auto& rp : raw_) {
      SymbolId lhs = intern(rp.lhs);
      std::vector<SymbolId> rhs;
      rhs.reserve(rp.rhs.size());
      for (const auto& name : rp.rhs) rhs.push_back(intern(name));
      auto key = std::make_pair(lhs, rhs);
      if (seen.count(key)) continue;
      seen.emplace(std::move(key), true);
      ProductionId pid = static_cast<ProductionId>(g.productions_.size());
      g.productions_.push_back({pid, lhs, std::move(rhs)});
    }

    g.productions_of_.resize(g.symbols_.size());
    g.size_ = 0;
    for (const auto& p : g.productions_) {
      g.productions_of_[p.lhs].push_back(p.id);
      g.size_ += 1 + p.rhs.size();
    }
    g.terminal_count_ = 0;
    for (const auto& s : g.symbols_)
      if (s.kind == SymbolKind::Terminal) ++g.terminal_count_;

    if (start_) {
      auto id = g.find_symbol(*start_);
      if (!id || !g.is_nonterminal(*id))
        throw GrammarError("start symbol '" + *start_ + "' never occurs on a left-hand side");
      g.start_ = *id;
    } else {
      g.start_ = g.productions_.front().lhs;
    }
    return g;
  }

 private:
  // A name the text format could not round-trip is rejected outright.
  static void validate_name(const std::string& name) {
    if (name.empty()) throw GrammarError("empty symbol name");
    if (name == "->" || name == "|" || name == "%start")
      throw GrammarError("'" + name + "' is reserved and cannot name a symbol");
    for (char c : name)
      if (std::isspace(static_cast<unsigned char>(c)) || c == '#')
        throw GrammarError("symbol name '" + name + "' contains whitespace or '#'");
  }

  struct RawProduction {
    std::string lhs;
    std::vector<std::string> rhs;
  };
  std::vector<RawProduction> raw_;
  std::optional<std::string> start_;
};

// Grammar file format: one production per line, `LHS -> rhs-symbols`
// whitespace-separated, `|` alternation, `#` comments, empty rhs for
// epsilon, optional `%start NAME`. LF or CRLF both accepted.
inline Grammar Grammar::parse(std::string_view text) {
  GrammarBuilder builder;
  std::optional<std::string> start_name;
  std::size_t start_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string> tokens;
    {
      std::size_t t = 0;
      while (t < line.size()) {
        while (t < line.size() && std::isspace(static_cast<unsigned char>(line[t]))) ++t;
        std::size_t b = t;
        while (t < line.size() && !std::isspace(static_cast<unsigned char>(line[t]))) ++t;
        if (t > b) tokens.emplace_back(line.substr(b, t - b));
      }
    }

    if (!tokens.empty()) {
      if (tokens[0] == "%start") {
        if (tokens.size() != 2) throw GrammarParseError(line_no, "%start expects exactly one symbol name");
        if (start_name) throw GrammarParseError(line_no, "duplicate %start directive");
        start_name = tokens[1];
        start_line = line_no;
      } else {
        if (tokens.size() < 2 || tokens[1] != "->")
          throw GrammarParseError(line_no, "expected 'LHS -> ...'");
        if (tokens[0] == "->" || tokens[0] == "|")
          throw GrammarParseError(line_no, "missing left-hand side");
        std::vector<std::string> rhs;
        auto flush = [&] {
          builder.production(tokens[0], rhs);
          rhs.clear();
        };
        for (std::size_t t = 2; t < tokens.size(); ++t) {
          if (tokens[t] == "->") throw GrammarParseError(line_no, "unexpected '->'");
          if (tokens[t] == "|") {
            flush();
          } else {
            rhs.push_back(tokens[t]);
          }
        }
        flush();
      }
    }

    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  if (start_name) builder.start(*start_name);
  try {
    return builder.build();
  } catch (const GrammarError& e) {
    if (start_name) {
      // Re-attach the %start line if that is what failed.
      std::string msg = e.what();
      if (msg.find("start symbol") != std::string::npos)
        throw GrammarParseError(start_line, msg);
    }
    throw;
  }
}

// A production with a dot marking how much of the rhs has been
// recognized.
struct DottedItem {
  ProductionId production;
  std::uint32_t dot;

  friend bool operator==(const DottedItem&, const DottedItem&) = default;
  friend auto operator<=>(const DottedItem&, const DottedItem&) = default;
};

// All (production, dot) pairs, 0 <= dot <= |rhs|, in (production, dot)
// order.
inline std::vector<DottedItem> dotted_items(const Grammar& g) {
  std::vector<DottedItem> out;
  for (const auto& p : g.productions())
    for (std::uint32_t d = 0; d <= p.rhs.size(); ++d) out.push_back({p.id, d});
  return out;
}

inline std::string dotted_item_to_string(const Grammar& g, const DottedItem& it) {
  const auto& p = g.production(it.production);
  std::string out = g.name_of(p.lhs) + " ->";
  for (std::uint32_t k = 0; k < p.rhs.size(); ++k) {
    if (k == it.dot) out += " .";
    out += ' ';
    out += g.name_of(p.rhs[k]);
  }
  if (it.dot == p.rhs.size()) out += " .";
  return out;
}

struct SuffixItem {
  SuffixId id;
  std::vector<SymbolId> symbols;
};

// Every distinct suffix of every production rhs, interned by content.
// A suffix arising from several productions is one item; that sharing
// is what the recognizer variant and the cover transform exploit.
//
// Id 0 is the empty suffix. Nonempty suffixes carry a head symbol and
// a tail link to the suffix one symbol shorter, and head*tail
// extension is invertible through extend().
class SuffixSet {
 public:
  explicit SuffixSet(const Grammar& g) : grammar_(&g) {
    intern({});  // id 0 = epsilon
    full_rhs_.resize(g.productions().size());
    for (const auto& p : g.productions()) {
      // Shortest suffix first so tail links always resolve.
      SuffixId id = 0;
      for (std::size_t len = 1; len <= p.rhs.size(); ++len) {
        std::vector<SymbolId> syms(p.rhs.end() - len, p.rhs.end());
        id = intern(std::move(syms));
      }
      full_rhs_[p.id] = id;
      if (productions_with_rhs_.size() <= id) productions_with_rhs_.resize(id + 1);
      productions_with_rhs_[id].push_back(p.id);
    }
    productions_with_rhs_.resize(symbols_.size());
  }

  std::size_t size() const { return symbols_.size(); }
  SuffixId empty_id() const { return 0; }

  std::span<const SymbolId> symbols(SuffixId id) const { return symbols_.at(id); }
  std::size_t length(SuffixId id) const { return symbols_.at(id).size(); }

  // First symbol / rest of a nonempty suffix.
  SymbolId head(SuffixId id) const { return head_.at(id); }
  SuffixId tail(SuffixId id) const { return tail_.at(id); }

  // Id of [X beta] given X and [beta], when that string is itself a
  // suffix item.
  std::optional<SuffixId> extend(SymbolId sym, SuffixId tail) const {
    auto it = extend_.find(extend_key(sym, tail));
    if (it == extend_.end()) return std::nullopt;
    return it->second;
  }

  SuffixId full_rhs(ProductionId p) const { return full_rhs_.at(p); }
  bool is_full_rhs(SuffixId id) const { return !productions_with_rhs_.at(id).empty(); }
  std::span<const ProductionId> productions_with_rhs(SuffixId id) const {
    return productions_with_rhs_.at(id);
  }

  // Suffix of production p's rhs starting at the given dot position.
  SuffixId after_dot(ProductionId p, std::uint32_t dot) const {
    SuffixId id = full_rhs_.at(p);
    for (std::uint32_t k = 0; k < dot; ++k) id = tail(id);
    return id;
  }

  std::optional<SuffixId> find(std::span<const SymbolId> syms) const {
    auto it = index_.find(std::vector<SymbolId>(syms.begin(), syms.end()));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<SuffixItem> items() const {
    std::vector<SuffixItem> out;
    for (SuffixId id = 0; id < symbols_.size(); ++id) out.push_back({id, symbols_[id]});
    return out;
  }

  std::string to_string(SuffixId id) const {
    std::string out;
    for (SymbolId s : symbols_.at(id)) {
      if (!out.empty()) out += ' ';
      out += grammar_->name_of(s);
    }
    return out;
  }

 private:
  static std::uint64_t extend_key(SymbolId sym, SuffixId tail) {
    return (static_cast<std::uint64_t>(sym) << 32) | tail;
  }

  SuffixId intern(std::vector<SymbolId> syms) {
    auto it = index_.find(syms);
    if (it != index_.end()) return it->second;
    SuffixId id = static_cast<SuffixId>(symbols_.size());
    if (!syms.empty()) {
      SymbolId h = syms.front();
      std::vector<SymbolId> rest(syms.begin() + 1, syms.end());
      SuffixId t = index_.at(rest);  // interned earlier (shorter)
      head_.push_back(h);
      tail_.push_back(t);
      extend_.emplace(extend_key(h, t), id);
    } else {
      head_.push_back(0);
      tail_.push_back(0);
    }
    index_.emplace(syms, id);
    symbols_.push_back(std::move(syms));
    return id;
  }

  const Grammar* grammar_;
  std::vector<std::vector<SymbolId>> symbols_;
  std::map<std::vector<SymbolId>, SuffixId> index_;
  std::vector<SymbolId> head_;
  std::vector<SuffixId> tail_;
  std::unordered_map<std::uint64_t, SuffixId> extend_;
  std::vector<SuffixId> full_rhs_;
  std::vector<std::vector<ProductionId>> productions_with_rhs_;
};

inline SuffixSet suffix_items(const Grammar& g) { return SuffixSet(g); }

// Two-normal-form cover transform. Right-hand sides longer than two are
// folded into chains through fresh bracket nonterminals, one per shared
// rhs suffix of length >= 2, so productions ending alike share their
// tails:
//
//   A -> X alpha   becomes  A -> X [alpha]        (|alpha| > 1)
//   A -> alpha     stays    A -> alpha            (|alpha| <= 2)
//   [X alpha]      defines  [X alpha] -> X [alpha] (|alpha| > 1)
//   [X Y]          defines  [X Y] -> X Y
//
// Bracket nonterminals are named `[X.Y.Z]` from their member names; a
// quote is appended until the name is fresh in the source grammar.
inline Grammar tau2_transform(const Grammar& g) {
  GrammarBuilder builder;

  std::unordered_map<std::string, bool> used;
  for (const auto& s : g.symbols()) used[s.name] = true;

  std::map<std::vector<SymbolId>, std::string> bracket_names;
  std::vector<std::vector<SymbolId>> pending;

  auto bracket = [&](std::vector<SymbolId> syms) -> std::string {
    auto it = bracket_names.find(syms);
    if (it != bracket_names.end()) return it->second;
    std::string name = "[";
    for (std::size_t k = 0; k < syms.size(); ++k) {
      if (k) name += '.';
      name += g.name_of(syms[k]);
    }
    name += ']';
    while (used.count(name)) name += '\'';
    used[name] = true;
    bracket_names.emplace(syms, name);
    pending.push_back(std::move(syms));
    return name;
  };

  for (const auto& p : g.productions()) {
    if (p.rhs.size() <= 2) {
      std::vector<std::string> rhs;
      for (SymbolId s : p.rhs) rhs.push_back(g.name_of(s));
      builder.production(g.name_of(p.lhs), std::move(rhs));
    } else {
      std::vector<SymbolId> rest(p.rhs.begin() + 1, p.rhs.end());
      builder.production(g.name_of(p.lhs), {g.name_of(p.rhs.front()), bracket(std::move(rest))});
    }
  }

  for (std::size_t q = 0; q < pending.size(); ++q) {
    std::vector<SymbolId> syms = pending[q];  // copy: pending may grow
    std::string lhs = bracket_names.at(syms);
    if (syms.size() == 2) {
      builder.production(std::move(lhs), {g.name_of(syms[0]), g.name_of(syms[1])});
    } else {
      std::vector<SymbolId> rest(syms.begin() + 1, syms.end());
      builder.production(std::move(lhs), {g.name_of(syms[0]), bracket(std::move(rest))});
    }
  }

  builder.start(g.name_of(g.start()));
  return builder.build();
}

inline std::string serialize_grammar(const Grammar& g) { return g.serialize(); }
inline Grammar parse_grammar(std::string_view text) { return Grammar::parse(text); }

}  // namespace earleykit
