#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "lexshift/corpus.hpp"
#include "lexshift/embedstore.hpp"

namespace lexshift {

// 1 - <u,v> / (|u| |v|), clamped to [0, 2]. Throws DataError on length
// mismatch, empty input or a zero-norm vector.
double cosine_distance(std::span<const float> u, std::span<const float> v);
double cosine_distance(std::span<const double> u, std::span<const double> v);

struct SedRecord {
  std::string original_uid;
  std::string replaced_uid;
  int layer = 0;
  Pos pos = Pos::noun;
  ReplacementClass replacement_class = ReplacementClass::synonym;
  double distance = 0.0;
};

// Self-embedding distance for every (pair, layer) in the store's layer range,
// ordered by (replaced uid, layer).
std::vector<SedRecord> compute_sed(std::span<const InstancePair> pairs, const EmbeddingStore& store);

enum class BaselineScope {
  layer,      // one baseline per layer, pooled over PoS
  layer_pos,  // one baseline per (layer, pos)
};

struct SedCell {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> normalized;
};

// Mean SED per (layer, class, pos), pooling all records of a cell (micro
// average), with each mean divided by the baseline class mean in the same
// layer (and pos, for BaselineScope::layer_pos).
struct SedTable {
  ReplacementClass baseline = ReplacementClass::synthetic;
  BaselineScope scope = BaselineScope::layer_pos;
  std::map<std::tuple<int, ReplacementClass, Pos>, SedCell> cells;

  std::size_t total_count() const;
};

// Throws DataError when a (layer[, pos]) group with records has no baseline
// records, or the baseline mean is zero.
SedTable aggregate_and_normalize(std::span<const SedRecord> records, ReplacementClass baseline_class,
                                 BaselineScope scope = BaselineScope::layer_pos);

void write_sed_csv(const SedTable& table, std::ostream& out);
void write_sed_records_csv(std::span<const SedRecord> records, std::ostream& out);

// Average ranks (1-based; ties share the mean of their positions).
std::vector<double> average_ranks(std::span<const double> xs);

// Pearson correlation of average-rank vectors. Throws DataError on length
// mismatch, fewer than two items or a constant input.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

// 1 - |a ∩ b| / |a ∪ b|. Throws DataError when both sets are empty.
double jaccard_distance(const std::set<std::string>& a, const std::set<std::string>& b);

struct F1Scores {
  double positive = 0.0;  // F1 of the positive class
  double macro = 0.0;     // mean F1 over both classes
};

// 0/0 terms count as 0. Throws DataError on length mismatch or empty input.
F1Scores f1_scores(const std::vector<bool>& predictions, const std::vector<bool>& labels);

}  // namespace lexshift
