#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexshift/corpus.hpp"

namespace lexshift {

struct LexiconEntry {
  std::string lemma;
  Pos pos = Pos::noun;
  std::string sense_id;  // empty: applies to every sense of (lemma, pos)
  ReplacementClass cls = ReplacementClass::synonym;
  std::string replacement_lemma;

  friend auto operator<=>(const LexiconEntry&, const LexiconEntry&) = default;
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Replacement candidates keyed by (lemma, pos, sense, class). Entries are kept
// sorted by all key fields and deduplicated.
class ReplacementLexicon {
 public:
  ReplacementLexicon() = default;

  // Throws DataError on an entry that violates the lexicon invariants.
  static ReplacementLexicon from_entries(std::vector<LexiconEntry> entries);

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Entries for (lemma, pos, cls) whose sense matches `sense_id` or is empty.
  // With no sense given, every entry for (lemma, pos, cls) matches.
  std::vector<const LexiconEntry*> lookup(std::string_view lemma, Pos pos, ReplacementClass cls,
                                          const std::optional<std::string>& sense_id) const;

  // Distinct replacement lemmas for (lemma, pos) across all classes and senses,
  // sorted ascending.
  std::vector<std::string> replacements_for(std::string_view lemma, Pos pos) const;

  // Every lemma (target or replacement) seen with `pos`, sorted ascending.
  const std::vector<std::string>& vocabulary(Pos pos) const;

 private:
  std::vector<LexiconEntry> entries_;
  std::vector<std::string> vocabulary_[4];
};

ReplacementLexicon parse_lexicon(std::istream& in);
ReplacementLexicon load_lexicon(const std::filesystem::path& path);

// Keeps at most `max_per_synset` original instances per sense_id, chosen
// uniformly without replacement; replaced instances follow their origin.
// Output preserves input order. Throws DataError if an original lacks a sense.
Corpus sample_per_synset(const Corpus& corpus, std::size_t max_per_synset, std::uint64_t seed);

}  // namespace lexshift
