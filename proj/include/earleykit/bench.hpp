#pragma once

// Runs the classic engine, the suffix-item variant, and the classic
// engine over the two-normal-form cover on a common sentence set, and
// assembles a per-grammar comparison row of mean step and table-size
// measurements. Means are exact big rationals rendered to one decimal;
// no floating point is accumulated anywhere.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "earleykit/earley.hpp"
#include "earleykit/grammar.hpp"
#include "earleykit/variant.hpp"

namespace earleykit {

using BigInt = boost::multiprecision::cpp_int;

// Per-sentence run that broke the cross-engine acceptance agreement.
class EngineMismatchError : public GrammarError {
 public:
  using GrammarError::GrammarError;
};

// A run violated one of the step or table-size bounds that are supposed
// to hold on every input.
class InvariantError : public GrammarError {
 public:
  using GrammarError::GrammarError;
};

// Exact mean: a sum and a count, rendered round-half-up to one decimal.
struct MeanValue {
  BigInt sum = 0;
  std::uint64_t count = 0;

  void add(const BigInt& v) {
    sum += v;
    ++count;
  }

  std::string render() const {
    if (count == 0) return "0.0";
    BigInt tenths = (20 * sum + count) / (2 * BigInt(count));
    std::string digits = tenths.str();
    if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
    return digits.substr(0, digits.size() - 1) + "." + digits.back();
  }
};

struct ComparisonRow {
  std::string grammarName;
  std::uint64_t sentenceCount = 0;
  MeanValue meanLen;
  MeanValue earleySteps;   // mean total elementary steps, classic
  MeanValue earleyItems;   // mean |E|
  MeanValue variantSteps;  // mean total elementary steps, variant
  MeanValue uItems;        // mean |U|
  MeanValue tItems;        // mean |T|
  MeanValue utItems;       // mean |U| + |T|
  MeanValue tau2Steps;     // mean total steps, classic over the cover
  MeanValue tau2Items;     // mean |E| over the cover
};

struct RunRecord {
  std::vector<SymbolId> sentence;
  bool accepted = false;
  EarleyStats earley;
  VariantStats variant;
  EarleyStats tau2;
};

struct CompareResult {
  ComparisonRow row;
  std::vector<RunRecord> records;
};

inline CompareResult compare(const Grammar& g, std::span<const std::vector<SymbolId>> sentences,
                             std::string grammarName = "grammar") {
  if (sentences.empty()) throw GrammarError("no sentences to compare");

  Grammar cover = tau2_transform(g);
  std::vector<SymbolId> to_cover(g.symbol_count());
  for (const auto& s : g.symbols())
    if (s.kind == SymbolKind::Terminal) to_cover[s.id] = *cover.find_symbol(s.name);

  CompareResult res;
  res.row.grammarName = std::move(grammarName);

  for (const auto& w : sentences) {
    const std::size_t n = w.size();
    auto er = recognize_earley(g, w);
    auto vr = recognize_variant(g, w);
    std::vector<SymbolId> w2(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) w2[k] = to_cover[w[k]];
    auto tr = recognize_earley(cover, w2);

    if (er.stats.accepted != vr.stats.accepted || er.stats.accepted != tr.stats.accepted)
      throw EngineMismatchError("engines disagree on '" + g.untokenize(w) + "'");

    auto check = [&](bool ok, const char* what) {
      if (!ok) throw InvariantError(std::string(what) + " violated on '" + g.untokenize(w) + "'");
    };
    check(vr.stats.steps1 <= er.stats.steps1, "V1 <= E1");
    check(vr.stats.steps2 <= er.stats.steps2, "V2 <= E2");
    check(vr.stats.steps3 <= er.stats.steps3, "V3 <= E3");
    check(BigInt(vr.stats.total) <= BigInt(n + 2) * er.stats.total, "V <= (n+2)E");
    check(vr.stats.uCount <= er.stats.itemCount, "|U| <= |E|");
    if (n >= 1) check(BigInt(vr.stats.tCount) <= BigInt(n) * er.stats.itemCount, "|T| <= n|E|");

    res.row.meanLen.add(n);
    res.row.earleySteps.add(er.stats.total);
    res.row.earleyItems.add(er.stats.itemCount);
    res.row.variantSteps.add(vr.stats.total);
    res.row.uItems.add(vr.stats.uCount);
    res.row.tItems.add(vr.stats.tCount);
    res.row.utItems.add(BigInt(vr.stats.uCount) + vr.stats.tCount);
    res.row.tau2Steps.add(tr.stats.total);
    res.row.tau2Items.add(tr.stats.itemCount);

    res.records.push_back({w, er.stats.accepted, er.stats, vr.stats, tr.stats});
  }
  res.row.sentenceCount = sentences.size();
  return res;
}

enum class ReportFormat { Csv, Json, Markdown };

inline const char* kReportColumns[] = {"grammar",       "sentences",     "mean_len",
                                       "earley_steps",  "earley_items",  "variant_steps",
                                       "u_items",       "t_items",       "ut_items",
                                       "tau2_steps",    "tau2_items"};

inline std::string render_report(std::span<const ComparisonRow> rows, ReportFormat format) {
  auto cells = [](const ComparisonRow& r) {
    return std::vector<std::string>{r.meanLen.render(),      r.earleySteps.render(),
                                    r.earleyItems.render(),  r.variantSteps.render(),
                                    r.uItems.render(),       r.tItems.render(),
                                    r.utItems.render(),      r.tau2Steps.render(),
                                    r.tau2Items.render()};
  };

  std::string out;
  switch (format) {
    case ReportFormat::Csv: {
      for (std::size_t c = 0; c < 11; ++c) {
        if (c) out += ',';
        out += kReportColumns[c];
      }
      out += '\n';
      for (const auto& r : rows) {
        out += r.grammarName + "," + std::to_string(r.sentenceCount);
        for (const auto& v : cells(r)) out += "," + v;
        out += '\n';
      }
      break;
    }
    case ReportFormat::Json: {
      auto escape = [](const std::string& s) {
        std::string e;
        for (char c : s) {
          if (c == '"' || c == '\\') e += '\\';
          e += c;
        }
        return e;
      };
      out += "[";
      bool first_row = true;
      for (const auto& r : rows) {
        if (!first_row) out += ",";
        first_row = false;
        out += "\n  {\"grammar\":\"" + escape(r.grammarName) + "\"";
        out += ",\"sentences\":" + std::to_string(r.sentenceCount);
        auto vals = cells(r);
        for (std::size_t c = 0; c < vals.size(); ++c)
          out += std::string(",\"") + kReportColumns[c + 2] + "\":" + vals[c];
        out += "}";
      }
      out += "\n]\n";
      break;
    }
    case ReportFormat::Markdown: {
      out += "|";
      for (std::size_t c = 0; c < 11; ++c) out += std::string(" ") + kReportColumns[c] + " |";
      out += "\n|";
      for (std::size_t c = 0; c < 11; ++c) out += " --- |";
      out += '\n';
      for (const auto& r : rows) {
        out += "| " + r.grammarName + " | " + std::to_string(r.sentenceCount) + " |";
        for (const auto& v : cells(r)) out += " " + v + " |";
        out += '\n';
      }
      break;
    }
  }
  return out;
}

}  // namespace earleykit
