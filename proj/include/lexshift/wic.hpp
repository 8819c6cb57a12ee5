#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexshift/corpus.hpp"
#include "lexshift/embedstore.hpp"
#include "lexshift/metrics.hpp"

namespace lexshift {

enum class Split { dev, train, test };

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view s);

struct WicPair {
  std::string uid1;
  std::string uid2;
  std::string lemma;
  Pos pos = Pos::noun;
  Split split = Split::dev;
  bool label = false;  // true: same meaning
  std::optional<double> similarity;
};

struct ThresholdClassifier {
  double threshold = 0.0;
  int layer = 0;
  std::optional<Pos> pos;  // nullopt: all PoS
  double tuned_f1 = 0.0;

  bool classify(double similarity) const { return similarity >= threshold; }
};

std::vector<WicPair> load_wic_pairs(const std::filesystem::path& path);
void write_wic_pairs(std::span<const WicPair> pairs, std::ostream& out);

// similarity = 1 - cosine distance of the two target vectors at `layer`.
void fill_similarities(std::span<WicPair> pairs, const EmbeddingStore& store, int layer);

// Picks the threshold maximizing positive-class F1 among the midpoints of
// consecutive distinct similarities and the -inf/+inf sentinels; the smallest
// maximizer wins. Throws DataError on missing similarities or a single-class
// dev set.
ThresholdClassifier tune_threshold(std::span<const WicPair> dev, int layer, std::optional<Pos> pos = std::nullopt);

// Candidate thresholds in ascending order (sentinels included).
std::vector<double> candidate_thresholds(std::span<const WicPair> pairs);

F1Scores evaluate(std::span<const WicPair> pairs, const ThresholdClassifier& classifier);

struct DwugJudgment {
  std::string uid1;
  std::string uid2;
  std::string lemma;
  Pos pos = Pos::noun;
  double mean_rating = 0.0;
};

struct DwugConversion {
  std::vector<WicPair> pairs;
  std::size_t dropped = 0;
};

// mean > 3.5 -> same meaning, mean < 1.5 -> different, otherwise dropped.
// Throws DataError on a rating outside [1, 4].
DwugConversion convert_dwug(std::span<const DwugJudgment> judgments, Split split = Split::test);

std::vector<DwugJudgment> load_dwug_judgments(const std::filesystem::path& path);

}  // namespace lexshift
