// Command-line front door: parse/compare/transform/generate/count-parses
// over grammar files and sentence files.
//
// Exit codes: 0 success (parse: accepted), 1 rejected input sentence,
// 2 usage or input error, 3 cross-engine disagreement in compare,
// 4 sentence generation gave up.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "earleykit/bench.hpp"
#include "earleykit/earley.hpp"
#include "earleykit/grammar.hpp"
#include "earleykit/oracle.hpp"
#include "earleykit/sentgen.hpp"
#include "earleykit/variant.hpp"

namespace {

constexpr int kExitReject = 1;
constexpr int kExitError = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitGaveUp = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.value() + "'");
  out << text;
}

// One sentence per line, terminals whitespace-separated, blank line for
// the empty sentence.
std::vector<std::vector<earleykit::SymbolId>> parse_sentence_file(const earleykit::Grammar& g,
                                                                  const std::string& text) {
  std::vector<std::vector<earleykit::SymbolId>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? text.size() - pos : eol - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(g.tokenize(line));
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return out;
}

std::string grammar_display_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

int run_parse(const std::string& grammarPath, const std::string& algorithm,
              const std::optional<std::string>& input,
              const std::optional<std::string>& inputFile, bool dumpChart, bool stats) {
  auto g = earleykit::Grammar::parse(read_file(grammarPath));
  std::string sentence_text = input ? *input : read_file(*inputFile);
  auto w = g.tokenize(sentence_text);
  for (earleykit::SymbolId s : w)
    if (!g.is_terminal(s))
      throw earleykit::TokenError("input symbol '" + g.name_of(s) +
                                  "' is not a terminal of the grammar");

  bool accepted = false;
  std::string stats_json;
  std::string dump;

  if (algorithm == "variant") {
    auto res = earleykit::recognize_variant(g, w);
    accepted = res.stats.accepted;
    stats_json = res.stats.to_json();
    if (dumpChart) dump = res.u.dump(res.suffixes) + res.t.dump(res.suffixes);
  } else {
    const earleykit::Grammar* engine_grammar = &g;
    earleykit::Grammar cover = g;  // replaced below for the cover path
    std::vector<earleykit::SymbolId> w2 = w;
    if (algorithm == "tau2-earley") {
      cover = earleykit::tau2_transform(g);
      for (auto& s : w2) s = *cover.find_symbol(g.name_of(s));
      engine_grammar = &cover;
    }
    auto res = earleykit::recognize_earley(*engine_grammar, w2);
    accepted = res.stats.accepted;
    stats_json = res.stats.to_json();
    if (dumpChart) dump = res.chart.dump(*engine_grammar);
  }

  std::cout << (accepted ? "accept" : "reject") << "\n";
  if (stats) std::cout << stats_json << "\n";
  if (dumpChart) std::cout << dump;
  return accepted ? 0 : kExitReject;
}

int run_compare(const std::string& grammarPath, const std::string& sentencesPath,
                const std::string& format, const std::optional<std::string>& outPath) {
  auto g = earleykit::Grammar::parse(read_file(grammarPath));
  auto sentences = parse_sentence_file(g, read_file(sentencesPath));
  auto result = earleykit::compare(g, sentences, grammar_display_name(grammarPath));

  earleykit::ReportFormat fmt = earleykit::ReportFormat::Csv;
  if (format == "json") fmt = earleykit::ReportFormat::Json;
  if (format == "md") fmt = earleykit::ReportFormat::Markdown;
  earleykit::ComparisonRow rows[] = {result.row};
  write_output(outPath, earleykit::render_report(rows, fmt));
  return 0;
}

int run_transform(const std::string& grammarPath, const std::optional<std::string>& outPath) {
  auto g = earleykit::Grammar::parse(read_file(grammarPath));
  write_output(outPath, earleykit::tau2_transform(g).serialize());
  return 0;
}

int run_generate(const std::string& grammarPath, std::uint64_t seed, std::size_t count,
                 std::size_t maxDepth, std::size_t maxLen,
                 const std::optional<std::string>& outPath) {
  auto g = earleykit::Grammar::parse(read_file(grammarPath));
  earleykit::GenConfig cfg;
  cfg.seed = seed;
  cfg.count = count;
  cfg.maxDepth = maxDepth;
  cfg.maxLen = maxLen;
  std::string text;
  for (const auto& w : earleykit::generate_sentences(g, cfg)) text += g.untokenize(w) + "\n";
  write_output(outPath, text);
  return 0;
}

int run_count_parses(const std::string& grammarPath, const std::string& input) {
  auto g = earleykit::Grammar::parse(read_file(grammarPath));
  try {
    auto w = g.tokenize(input);
    std::cout << earleykit::count_acyclic_parses(g, w).str() << "\n";
  } catch (const earleykit::TokenError&) {
    // a sentence with symbols outside the terminal set has no parses
    std::cout << "0\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-free recognition toolkit: classic Earley, the suffix-item "
               "variant, and the two-normal-form cover, with step counting"};
  app.require_subcommand(1);

  std::string grammarPath;
  std::string algorithm = "earley";
  std::optional<std::string> input;
  std::optional<std::string> inputFile;
  bool dumpChart = false;
  bool stats = false;
  auto* parse = app.add_subcommand("parse", "Recognize one sentence");
  parse->add_option("grammar", grammarPath, "grammar file")->required();
  parse->add_option("--algorithm", algorithm, "earley, variant, or tau2-earley")
      ->check(CLI::IsMember({"earley", "variant", "tau2-earley"}));
  auto* inputOpt = parse->add_option("--input", input, "sentence, terminals space-separated");
  parse->add_option("--input-file", inputFile, "file holding the sentence")->excludes(inputOpt);
  parse->add_flag("--dump-chart", dumpChart, "print the table contents");
  parse->add_flag("--stats", stats, "print step counters as JSON");

  std::string sentencesPath;
  std::string format = "csv";
  std::optional<std::string> outPath;
  auto* cmp = app.add_subcommand("compare", "Run all three engines over a sentence file");
  cmp->add_option("grammar", grammarPath, "grammar file")->required();
  cmp->add_option("sentences", sentencesPath, "sentence file, one per line")->required();
  cmp->add_option("--format", format, "csv, json, or md")
      ->check(CLI::IsMember({"csv", "json", "md"}));
  cmp->add_option("--out", outPath, "write the report here instead of stdout");

  auto* tf = app.add_subcommand("transform", "Write the two-normal-form cover grammar");
  tf->add_option("grammar", grammarPath, "grammar file")->required();
  tf->add_option("--out", outPath, "write the grammar here instead of stdout");

  std::uint64_t seed = 1;
  std::size_t count = 10;
  std::size_t maxDepth = 64;
  std::size_t maxLen = 40;
  auto* gen = app.add_subcommand("generate", "Generate random sentences from the grammar");
  gen->add_option("grammar", grammarPath, "grammar file")->required();
  gen->add_option("--count", count, "number of sentences");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--max-depth", maxDepth, "abandon expansions deeper than this");
  gen->add_option("--max-len", maxLen, "abandon sentences longer than this");
  gen->add_option("--out", outPath, "write sentences here instead of stdout");

  std::string countInput;
  auto* cp = app.add_subcommand("count-parses", "Count derivation trees, cyclic ones excluded");
  cp->add_option("grammar", grammarPath, "grammar file")->required();
  cp->add_option("--input", countInput, "sentence, terminals space-separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (parse->parsed()) {
      if (!input && !inputFile) {
        std::cerr << "error: one of --input or --input-file is required\n";
        return kExitError;
      }
      return run_parse(grammarPath, algorithm, input, inputFile, dumpChart, stats);
    }
    if (cmp->parsed()) return run_compare(grammarPath, sentencesPath, format, outPath);
    if (tf->parsed()) return run_transform(grammarPath, outPath);
    if (gen->parsed()) return run_generate(grammarPath, seed, count, maxDepth, maxLen, outPath);
    if (cp->parsed()) return run_count_parses(grammarPath, countInput);
  } catch (const earleykit::EngineMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const earleykit::GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGaveUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
