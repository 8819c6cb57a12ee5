#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexshift/corpus.hpp"
#include "lexshift/lexicon.hpp"

namespace lexshift {

enum class ReplaceMode {
  // One variant per (original, class), the candidate picked by seeded draw.
  per_class,
  // One variant per candidate replacement lemma, so that every r in rho(w) is
  // applied to the same sentences. Random-class candidates are `random_count`
  // pool words drawn once per target lemma.
  all,
};

struct ReplaceOptions {
  std::vector<ReplacementClass> classes;
  std::string synthetic_token = "[SYNT]";
  std::uint64_t seed = 0;
  ReplaceMode mode = ReplaceMode::per_class;
  std::size_t random_count = 1;
};

struct ReplaceSummary {
  std::size_t originals = 0;
  std::map<std::pair<ReplacementClass, Pos>, std::size_t> emitted;
  // Requested but unavailable: no lexicon entry, or hypernym on adjective/adverb.
  std::map<std::pair<ReplacementClass, Pos>, std::size_t> skipped;

  std::size_t total_emitted() const;
  std::size_t total_skipped() const;
};

struct ReplaceResult {
  Corpus corpus;  // originals, each followed by its derived instances
  ReplaceSummary summary;
};

ReplaceResult apply_replacements(const Corpus& corpus, const ReplacementLexicon& lexicon,
                                 const ReplaceOptions& options);

// Copy of `origin` with its target span replaced by `word`. A capitalized
// sentence-initial target gets a capitalized replacement unless `verbatim`.
UsageInstance substitute_target(const UsageInstance& origin, std::string_view word, bool verbatim);

void write_summary(const ReplaceSummary& summary, std::ostream& out);

struct InjectionSpec {
  std::string lemma;
  Pos pos = Pos::noun;
  double rate = 0.0;  // requested injected proportion relative to genuine C2 usages
};

struct GradedGold {
  std::string lemma;
  Pos pos = Pos::noun;
  double gold_change = 0.0;  // injected / (injected + genuine in C2)
  std::size_t injected = 0;
  std::size_t genuine_c2 = 0;
};

struct InjectionResult {
  Corpus c1;  // genuine usages, relabelled T1
  Corpus c2;  // genuine usages plus manufactured ones, labelled T2
  std::vector<GradedGold> gold;
};

// Builds two artificial periods out of one (T2) pool and injects graded change
// by writing each target into other targets' C2 sentences.
InjectionResult inject_graded_change(const Corpus& pool, std::span<const InjectionSpec> specs,
                                     std::uint64_t split_seed);

// Number of usages injected for a target with `genuine` C2 usages.
std::size_t injected_count(double rate, std::size_t genuine);

void write_gold(std::span<const GradedGold> gold, std::ostream& out);
void write_gold(std::span<const GradedGold> gold, const std::filesystem::path& path);

}  // namespace lexshift
