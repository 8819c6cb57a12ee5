#include "lexshift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "lexshift/error.hpp"
#include "lexshift/kernels.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

namespace {

template <typename T>
double cosine_distance_impl(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) {
    throw DataError("cosine distance: length mismatch (" + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()) + ")");
  }
  if (u.empty()) throw DataError("cosine distance: empty vectors");
  const auto t = kernels::cosine_terms(u, v);
  if (!(t.norm_u > 0.0) || !(t.norm_v > 0.0)) throw DataError("cosine distance: zero-norm vector");
  const double d = 1.0 - t.dot / (std::sqrt(t.norm_u) * std::sqrt(t.norm_v));
  return std::clamp(d, 0.0, 2.0);
}

}  // namespace

double cosine_distance(std::span<const float> u, std::span<const float> v) { return cosine_distance_impl(u, v); }
double cosine_distance(std::span<const double> u, std::span<const double> v) { return cosine_distance_impl(u, v); }

std::vector<SedRecord> compute_sed(std::span<const InstancePair> pairs, const EmbeddingStore& store) {
  std::vector<const InstancePair*> order;
  order.reserve(pairs.size());
  for (const auto& p : pairs) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const InstancePair* a, const InstancePair* b) {
    return a->replaced.get().uid < b->replaced.get().uid;
  });

  const auto& m = store.manifest();
  std::vector<SedRecord> out;
  out.reserve(pairs.size() * static_cast<std::size_t>(m.layers_per_uid()));
  for (const auto* p : order) {
    const auto& orig = p->original.get();
    const auto& repl = p->replaced.get();
    for (const auto* inst : {&orig, &repl}) {
      if (!store.contains(inst->uid)) throw DataError("missing embedding for uid '" + inst->uid + "'");
    }
    for (int layer = m.first_layer(); layer <= m.last_layer(); ++layer) {
      SedRecord r;
      r.original_uid = orig.uid;
      r.replaced_uid = repl.uid;
      r.layer = layer;
      r.pos = repl.pos;
      r.replacement_class = repl.replacement_class.value_or(ReplacementClass::synonym);
      r.distance = cosine_distance(store.lookup(orig.uid, layer), store.lookup(repl.uid, layer));
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::size_t SedTable::total_count() const {
  std::size_t n = 0;
  for (const auto& [_, c] : cells) n += c.n;
  return n;
}

SedTable aggregate_and_normalize(std::span<const SedRecord> records, ReplacementClass baseline_class,
                                 BaselineScope scope) {
  SedTable table;
  table.baseline = baseline_class;
  table.scope = scope;
  std::map<std::tuple<int, ReplacementClass, Pos>, double> sums;
  for (const auto& r : records) {
    const auto key = std::tuple{r.layer, r.replacement_class, r.pos};
    ++table.cells[key].n;
    sums[key] += r.distance;
  }
  // Baseline sums per (layer, pos); pos is ignored for BaselineScope::layer.
  std::map<std::pair<int, int>, std::pair<double, std::size_t>> baseline;
  for (auto& [key, cell] : table.cells) {
    cell.mean = sums[key] / static_cast<double>(cell.n);
    const auto& [layer, cls, pos] = key;
    if (cls != baseline_class) continue;
    auto& b = baseline[{layer, scope == BaselineScope::layer ? -1 : static_cast<int>(pos)}];
    b.first += sums[key];
    b.second += cell.n;
  }
  for (auto& [key, cell] : table.cells) {
    const auto& [layer, cls, pos] = key;
    const auto it = baseline.find({layer, scope == BaselineScope::layer ? -1 : static_cast<int>(pos)});
    if (it == baseline.end()) {
      throw DataError("no " + std::string(to_string(baseline_class)) + " baseline records for layer " +
                      std::to_string(layer) +
                      (scope == BaselineScope::layer_pos ? ", pos " + std::string(to_string(pos)) : std::string()));
    }
    const double base = it->second.first / static_cast<double>(it->second.second);
    if (!(base > 0.0)) {
      throw DataError("baseline mean SED is zero at layer " + std::to_string(layer));
    }
    cell.normalized = cls == baseline_class && scope == BaselineScope::layer_pos ? 1.0 : cell.mean / base;
  }
  return table;
}

void write_sed_csv(const SedTable& table, std::ostream& out) {
  out << "# pooling=micro baseline=" << to_string(table.baseline)
      << " scope=" << (table.scope == BaselineScope::layer ? "layer" : "layer_pos") << '\n';
  out << "layer,class,pos,n,mean_sed,normalized_mean_sed\n";
  for (const auto& [key, cell] : table.cells) {
    const auto& [layer, cls, pos] = key;
    out << layer << ',' << to_string(cls) << ',' << to_string(pos) << ',' << cell.n << ','
        << text::format_real(cell.mean) << ',' << (cell.normalized ? text::format_real(*cell.normalized) : "")
        << '\n';
  }
}

void write_sed_records_csv(std::span<const SedRecord> records, std::ostream& out) {
  out << "original_uid,replaced_uid,layer,pos,class,sed\n";
  for (const auto& r : records) {
    out << r.original_uid << ',' << r.replaced_uid << ',' << r.layer << ',' << to_string(r.pos) << ','
        << to_string(r.replacement_class) << ',' << text::format_real(r.distance) << '\n';
  }
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("spearman: length mismatch");
  if (xs.size() < 2) throw DataError("spearman: need at least two items");
  for (auto v : {xs, ys}) {
    for (double x : v) {
      if (std::isnan(x)) throw DataError("spearman: NaN input");
    }
  }
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;  // mean of any average-rank vector
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double a = rx[i] - mean;
    const double b = ry[i] - mean;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("spearman: constant input, correlation undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double jaccard_distance(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) throw DataError("jaccard distance: both sets empty");
  std::size_t inter = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

F1Scores f1_scores(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) throw DataError("f1: length mismatch");
  if (predictions.empty()) throw DataError("f1: empty input");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i]) {
      labels[i] ? ++tp : ++fp;
    } else {
      labels[i] ? ++fn : ++tn;
    }
  }
  F1Scores s;
  s.positive = f1_from_counts(tp, fp, fn);
  s.macro = (s.positive + f1_from_counts(tn, fn, fp)) / 2.0;
  return s;
}

}  // namespace lexshift
