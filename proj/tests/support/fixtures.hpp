#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <map>
#include <vector>

#include "lexshift/corpus.hpp"
#include "lexshift/embedstore.hpp"
#include "lexshift/lexicon.hpp"
#include "lexshift/replacer.hpp"
#include "lexshift/wic.hpp"

namespace lexshift::fixtures {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Originals only, all four PoS, sense ids, alternating periods. Some targets
// are sentence-initial and some sentences carry non-ASCII text.
Corpus sentence_corpus(std::size_t n, std::uint64_t seed);

// Synonym/antonym/hypernym entries for the lemmas of sentence_corpus.
ReplacementLexicon sentence_lexicon();
std::string sentence_lexicon_tsv();

// Gaussian vectors for every uid of `corpus` at layers 1..num_layers.
EmbeddingStore random_store(const Corpus& corpus, int num_layers, int dim, std::uint64_t seed);

// Graded-change benchmark: a T2 pool with `targets` lemmas and
// `usages_per_target` usages each, split and injected with rates evenly spaced
// in [0, max_rate]. Genuine usages of lemma t are N(mu_t, variance * I),
// usages injected into t's C2 are N(nu_t, variance * I); the means lie on a
// sphere of radius `radius`. One layer.
struct SyntheticLsc {
  Corpus pool;
  std::vector<InjectionSpec> specs;
  InjectionResult injection;
  EmbeddingStore store;
};

struct SyntheticLscOptions {
  std::size_t targets = 20;
  std::size_t usages_per_target = 60;
  double max_rate = 0.9;
  int dim = 16;
  double variance = 0.05;
  double radius = 4.0;
  std::uint64_t seed = 1;
};

SyntheticLsc synthetic_lsc(const SyntheticLscOptions& options);

// Replacement-LSC fixture with exact distances. Every original vector lies on
// the first axis; each variant is a scaled Pythagorean direction so that its
// cosine distance to the original is a known fraction. Replacement `shifted`
// has distance 1 - 24/25 in T1 and 1 - 3/5 in T2 (delta = 0.36); every other
// replacement cycles through the same distances in both periods.
struct ShiftFixture {
  Corpus corpus;
  EmbeddingStore store;
  std::string lemma = "anchor";
  Pos pos = Pos::noun;
  std::vector<std::string> replacements;
  std::string shifted;
  double delta = 0.0;
};

ShiftFixture shift_fixture(std::size_t sentences_per_period, std::size_t replacements);

// Random-label WiC pairs over the uids of `store`: `per_split` noun and verb
// pairs in each of the dev and test splits.
std::vector<WicPair> wic_pairs(const EmbeddingStore& store, std::size_t per_split, std::uint64_t seed);

}  // namespace lexshift::fixtures
