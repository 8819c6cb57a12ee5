#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexshift/corpus.hpp"
#include "lexshift/embedstore.hpp"
#include "lexshift/senseclust.hpp"

namespace lexshift {

enum class ScoreMethod { prt, jsd, replacement, substitution };

std::string_view to_string(ScoreMethod m);
std::optional<ScoreMethod> parse_score_method(std::string_view s);

struct ChangeScore {
  std::string lemma;
  ScoreMethod method = ScoreMethod::prt;
  int layer = 0;
  std::optional<int> k;  // replacement method only
  double score = 0.0;
};

using VectorList = std::span<const std::span<const float>>;

// Cosine distance between the per-period mean vectors (prototypes). Larger
// means more change. Throws DataError on empty input, mixed dims or a
// zero-norm prototype.
double prt_score(VectorList t1, VectorList t2);

struct JsdScore {
  double score = 0.0;
  std::size_t n_clusters = 0;
  int n_iter = 0;
  bool converged = false;
};

// Clusters both periods jointly and returns the JSD of the per-period cluster
// distributions.
JsdScore jsd_score(VectorList t1, VectorList t2, const ApParams& params = {});

struct ReplacementStat {
  std::string replacement;
  double awd_t1 = 0.0;
  double awd_t2 = 0.0;
  double td = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct ReplacementProfile {
  std::string lemma;
  Pos pos = Pos::noun;
  int layer = 0;
  std::vector<ReplacementStat> stats;  // in rank order
  // The sentence samples shared by every replacement.
  std::vector<std::string> sample_t1;
  std::vector<std::string> sample_t2;
  // Originals excluded for lacking a variant for some replacement.
  std::size_t incomplete_t1 = 0;
  std::size_t incomplete_t2 = 0;
};

struct ProfileOptions {
  int layer = 0;
  std::size_t max_sentences = 200;
  std::uint64_t seed = 0;
};

// Average self-embedding distance per period for every replacement r of
// `lemma`, over one seeded sentence sample per period, ranked by the absolute
// difference between periods (descending, ties by replacement ascending).
// Variants are the corpus instances with origin = sampled sentence and
// replacement_lemma = r.
ReplacementProfile replacement_profile(const std::string& lemma, Pos pos, std::span<const std::string> replacements,
                                       const Corpus& corpus, const EmbeddingStore& store,
                                       const ProfileOptions& options);

// Sorts stats by td descending (ties by replacement ascending) and assigns ranks.
void rank_profile(ReplacementProfile& profile);

// Mean of the k largest td values. Throws DataError unless 1 <= k <= M.
double lsc_replacement(const ReplacementProfile& profile, std::size_t k);

struct SubstituteSet {
  std::string uid;
  std::set<std::string> substitutes;
};

// Mean Jaccard distance over cross-period usage pairs: all n1*n2 pairs when
// max_pairs is 0 or >= n1*n2, else a seeded uniform sample of max_pairs
// distinct pairs.
double substitution_score(std::span<const SubstituteSet> t1, std::span<const SubstituteSet> t2, std::size_t max_pairs,
                          std::uint64_t seed);

// Substitutes JSONL: {"uid": ..., "substitutes": [...]} per line.
std::vector<SubstituteSet> load_substitutes(const std::filesystem::path& path);

struct GoldScore {
  std::string lemma;
  double value = 0.0;
};

std::vector<GoldScore> load_gold(const std::filesystem::path& path);

// Spearman correlation between scores and gold aligned by lemma. Throws
// DataError listing lemmas present on one side only, or duplicated lemmas.
double rank_and_correlate(std::span<const ChangeScore> scores, std::span<const GoldScore> gold);

void write_scores_tsv(std::span<const ChangeScore> scores, std::ostream& out);
std::vector<ChangeScore> read_scores_tsv(const std::filesystem::path& path);
void write_profile_tsv(const ReplacementProfile& profile, std::ostream& out);

}  // namespace lexshift
