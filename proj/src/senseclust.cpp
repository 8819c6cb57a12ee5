#include "lexshift/senseclust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lexshift/error.hpp"
#include "lexshift/kernels.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

void ApParams::validate() const {
  if (!(damping >= 0.5 && damping < 1.0)) throw ValidationError("damping must be in [0.5, 1)");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (convergence_iter < 1) throw ValidationError("convergence_iter must be >= 1");
  if (const auto* f = std::get_if<FixedPreference>(&preference); f && !std::isfinite(f->value)) {
    throw ValidationError("preference must be finite");
  }
}

std::vector<double> similarity_matrix(std::span<const std::span<const float>> points, Similarity similarity) {
  const std::size_t n = points.size();
  if (n == 0) throw DataError("affinity propagation: empty input");
  const std::size_t dim = points[0].size();
  for (const auto& p : points) {
    if (p.size() != dim) throw DataError("affinity propagation: points differ in dimension");
    for (float x : p) {
      if (!std::isfinite(x)) throw DataError("affinity propagation: non-finite coordinate");
    }
  }
  std::vector<double> s(n * n, 0.0);
  std::vector<double> norms;
  if (similarity == Similarity::cosine) {
    norms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      norms[i] = std::sqrt(kernels::dot(points[i], points[i]));
      if (!(norms[i] > 0.0)) throw DataError("affinity propagation: zero-norm point under cosine similarity");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double v;
      if (similarity == Similarity::cosine) {
        v = kernels::dot(points[i], points[j]) / (norms[i] * norms[j]);
      } else {
        v = -kernels::squared_distance(points[i], points[j]);
      }
      if (i == j && similarity == Similarity::negative_squared_euclidean) v = 0.0;
      s[i * n + j] = v;
      s[j * n + i] = v;
    }
  }
  return s;
}

ApResult affinity_propagation(std::span<const std::span<const float>> points, const ApParams& params) {
  params.validate();
  const auto s = similarity_matrix(points, params.similarity);
  return affinity_propagation(s, points.size(), params);
}

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

ApResult singletons(std::size_t n, int n_iter, bool converged) {
  ApResult r;
  r.labels.resize(n);
  r.exemplars.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.labels[i] = r.exemplars[i] = i;
  r.n_iter = n_iter;
  r.converged = converged;
  return r;
}

// Assigns every point to its most similar exemplar, exemplars to themselves.
std::vector<std::size_t> assign(const std::vector<double>& s, std::size_t n, const std::vector<std::size_t>& ex) {
  std::vector<std::size_t> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ex.size(); ++k) {
      const double v = s[i * n + ex[k]];
      if (v > best) {
        best = v;
        c[i] = k;
      }
    }
  }
  for (std::size_t k = 0; k < ex.size(); ++k) c[ex[k]] = k;
  return c;
}

}  // namespace

ApResult affinity_propagation(std::span<const double> similarity, std::size_t n, const ApParams& params) {
  params.validate();
  if (n == 0) throw DataError("affinity propagation: empty input");
  if (similarity.size() != n * n) throw DataError("affinity propagation: similarity matrix is not n x n");

  std::vector<double> s(similarity.begin(), similarity.end());
  const double pref = std::holds_alternative<FixedPreference>(params.preference)
                          ? std::get<FixedPreference>(params.preference).value
                          : median(s);

  // Degenerate inputs: a single point, or all off-diagonal similarities equal.
  if (n == 1) {
    ApResult r;
    r.labels = {0};
    r.exemplars = {0};
    r.converged = true;
    return r;
  }
  {
    bool all_equal = true;
    double first = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n && all_equal; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (std::isnan(first)) first = s[i * n + j];
        if (s[i * n + j] != first) {
          all_equal = false;
          break;
        }
      }
    }
    if (all_equal) {
      if (pref > first) return singletons(n, 0, true);
      ApResult r;
      r.labels.assign(n, 0);
      r.exemplars = {0};
      r.converged = true;
      return r;
    }
  }

  constexpr double kTieBreak = 1e-12;
  for (std::size_t i = 0; i < n; ++i) s[i * n + i] = pref + static_cast<double>(i) * kTieBreak;

  const double damping = params.damping;
  const auto conv = static_cast<std::size_t>(params.convergence_iter);
  std::vector<double> r(n * n, 0.0);
  std::vector<double> a(n * n, 0.0);
  std::vector<double> col_sum(n);
  // Ring buffer of exemplar indicators over the last `conv` iterations.
  std::vector<unsigned char> history(n * conv, 0);
  std::vector<unsigned char> is_exemplar(n, 0);

  int it = 0;
  bool converged = false;
  for (; it < params.max_iter; ++it) {
    // Responsibilities: r(i,k) = s(i,k) - max_{k' != k} (a(i,k') + s(i,k')).
    for (std::size_t i = 0; i < n; ++i) {
      const double* srow = &s[i * n];
      const double* arow = &a[i * n];
      double* rrow = &r[i * n];
      std::size_t best_k = 0;
      double best = -std::numeric_limits<double>::infinity();
      double second = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k) {
        const double v = arow[k] + srow[k];
        if (v > best) {
          second = best;
          best = v;
          best_k = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double upd = srow[k] - (k == best_k ? second : best);
        rrow[k] = damping * rrow[k] + (1.0 - damping) * upd;
      }
    }

    // Availabilities: a(i,k) = min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k))),
    // a(k,k) = sum_{i' != k} max(0, r(i',k)).
    std::fill(col_sum.begin(), col_sum.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double v = r[i * n + k];
        col_sum[k] += i == k ? v : std::max(v, 0.0);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double v = r[i * n + k];
        const double own = i == k ? v : std::max(v, 0.0);
        double upd = col_sum[k] - own;
        if (i != k) upd = std::min(upd, 0.0);
        a[i * n + k] = damping * a[i * n + k] + (1.0 - damping) * upd;
      }
    }

    std::size_t n_exemplars = 0;
    for (std::size_t k = 0; k < n; ++k) {
      is_exemplar[k] = (a[k * n + k] + r[k * n + k]) > 0.0;
      n_exemplars += is_exemplar[k];
      history[k * conv + static_cast<std::size_t>(it) % conv] = is_exemplar[k];
    }
    if (static_cast<std::size_t>(it) >= conv) {
      bool stable = true;
      for (std::size_t k = 0; k < n && stable; ++k) {
        std::size_t sum = 0;
        for (std::size_t t = 0; t < conv; ++t) sum += history[k * conv + t];
        stable = sum == 0 || sum == conv;
      }
      if (stable && n_exemplars > 0) {
        converged = true;
        break;
      }
    }
  }
  const int n_iter = converged ? it + 1 : params.max_iter;

  std::vector<std::size_t> ex;
  for (std::size_t k = 0; k < n; ++k) {
    if (is_exemplar[k]) ex.push_back(k);
  }
  if (ex.empty()) return singletons(n, n_iter, false);

  // The tie-break offset only steers message passing; exact ties in the
  // refinement go to the lowest index.
  for (std::size_t i = 0; i < n; ++i) s[i * n + i] = pref;

  // Refine each exemplar to the member maximizing total within-cluster
  // similarity, then reassign.
  auto c = assign(s, n, ex);
  for (std::size_t k = 0; k < ex.size(); ++k) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (c[i] == k) members.push_back(i);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (auto j : members) {
      double total = 0.0;
      for (auto i : members) total += s[i * n + j];
      if (total > best) {
        best = total;
        ex[k] = j;
      }
    }
  }
  c = assign(s, n, ex);

  ApResult result;
  std::vector<std::size_t> labels_as_points(n);
  for (std::size_t i = 0; i < n; ++i) labels_as_points[i] = ex[c[i]];
  result.exemplars = labels_as_points;
  std::sort(result.exemplars.begin(), result.exemplars.end());
  result.exemplars.erase(std::unique(result.exemplars.begin(), result.exemplars.end()), result.exemplars.end());
  result.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.labels[i] = static_cast<std::size_t>(
        std::lower_bound(result.exemplars.begin(), result.exemplars.end(), labels_as_points[i]) -
        result.exemplars.begin());
  }
  result.n_iter = n_iter;
  result.converged = converged;
  return result;
}

ClusterDistributions cluster_distributions(const ApResult& result, std::span<const Period> periods) {
  if (periods.size() != result.labels.size()) throw DataError("cluster distributions: one period per point required");
  const std::size_t k = result.n_clusters();
  ClusterDistributions d{std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (periods[i] == Period::t1) {
      d.p[result.labels[i]] += 1.0;
      ++n1;
    } else {
      d.q[result.labels[i]] += 1.0;
      ++n2;
    }
  }
  if (n1 == 0 || n2 == 0) throw DataError("cluster distributions: a period has no points");
  for (auto& x : d.p) x /= static_cast<double>(n1);
  for (auto& x : d.q) x /= static_cast<double>(n2);
  return d;
}

double jsd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DataError("jsd: length mismatch");
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) throw DataError("jsd: negative or NaN probability");
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9) throw DataError("jsd: input not normalized");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) total += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) total += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::clamp(total, 0.0, 1.0);
}

void write_ap_csv(const ApResult& result, std::span<const std::string> uids, std::ostream& out) {
  if (uids.size() != result.labels.size()) throw DataError("write_ap_csv: one uid per point required");
  out << "uid,label,is_exemplar\n";
  for (std::size_t i = 0; i < uids.size(); ++i) {
    const bool ex = result.exemplars[result.labels[i]] == i;
    out << uids[i] << ',' << result.labels[i] << ',' << (ex ? 1 : 0) << '\n';
  }
}

void write_distributions_csv(const ClusterDistributions& d, std::ostream& out) {
  out << "cluster,p,q\n";
  for (std::size_t k = 0; k < d.p.size(); ++k) {
    out << k << ',' << text::format_real(d.p[k]) << ',' << text::format_real(d.q[k]) << '\n';
  }
}

}  // namespace lexshift
