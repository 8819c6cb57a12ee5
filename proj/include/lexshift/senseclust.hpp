#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lexshift/corpus.hpp"

namespace lexshift {

enum class Similarity { negative_squared_euclidean, cosine };

struct MedianPreference {};
struct FixedPreference {
  double value = 0.0;
};
using Preference = std::variant<MedianPreference, FixedPreference>;

struct ApParams {
  double damping = 0.5;
  int max_iter = 200;
  int convergence_iter = 15;
  Preference preference = MedianPreference{};
  Similarity similarity = Similarity::negative_squared_euclidean;

  // Throws ValidationError when out of range.
  void validate() const;
};

struct ApResult {
  std::vector<std::size_t> labels;     // cluster index per point
  std::vector<std::size_t> exemplars;  // point index per cluster, ascending
  int n_iter = 0;
  bool converged = false;

  std::size_t n_clusters() const { return exemplars.size(); }
};

// Dense n x n similarity matrix, row-major. The diagonal holds the raw
// self-similarity (not the preference).
std::vector<double> similarity_matrix(std::span<const std::span<const float>> points, Similarity similarity);

// Affinity Propagation by responsibility/availability message passing. Fully
// deterministic: during message passing preferences get an index-ordered
// offset i * 1e-12 instead of random jitter; exemplar refinement ties go to the
// lowest index. Clusters are numbered by ascending exemplar index. When no
// exemplar emerges, every point is reported as its own cluster with
// converged = false.
ApResult affinity_propagation(std::span<const std::span<const float>> points, const ApParams& params = {});

// Same, over a precomputed similarity matrix.
ApResult affinity_propagation(std::span<const double> similarity, std::size_t n, const ApParams& params = {});

struct ClusterDistributions {
  std::vector<double> p;  // T1
  std::vector<double> q;  // T2
};

// Per-period cluster frequencies over the same cluster index set. Throws
// DataError if either period has no points or sizes mismatch.
ClusterDistributions cluster_distributions(const ApResult& result, std::span<const Period> periods);

// Jensen-Shannon divergence with base-2 logarithms, in [0, 1].
double jsd(std::span<const double> p, std::span<const double> q);

void write_ap_csv(const ApResult& result, std::span<const std::string> uids, std::ostream& out);
void write_distributions_csv(const ClusterDistributions& d, std::ostream& out);

}  // namespace lexshift
