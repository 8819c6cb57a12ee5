#include "lexshift/wic.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <json.hpp>
#include <cstdint>
#include <limits>
#include <ostream>

#include "lexshift/error.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

namespace {
constexpr std::array<std::string_view, 3> kSplitNames{"dev", "train", "test"};
}

std::string_view to_string(Split s) { return kSplitNames[static_cast<std::size_t>(s)]; }

std::optional<Split> parse_split(std::string_view s) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i) {
    if (kSplitNames[i] == s) return static_cast<Split>(i);
  }
  return std::nullopt;
}

std::vector<WicPair> load_wic_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open WiC pairs file " + path.string());
  std::vector<WicPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty()) continue;
    const auto where = " at line " + std::to_string(line_no) + " of " + path.string();
    try {
      const auto j = nlohmann::json::parse(body);
      WicPair p;
      p.uid1 = j.at("uid1").get<std::string>();
      p.uid2 = j.at("uid2").get<std::string>();
      p.lemma = j.at("lemma").get<std::string>();
      const auto pos = parse_pos(j.at("pos").get<std::string>());
      if (!pos) throw DataError("unknown pos" + where);
      p.pos = *pos;
      const auto split = parse_split(j.at("split").get<std::string>());
      if (!split) throw DataError("unknown split" + where);
      p.split = *split;
      const auto& label = j.at("label");
      p.label = label.is_boolean() ? label.get<bool>() : label.get<int>() != 0;
      if (p.uid1 == p.uid2) throw DataError("WiC pair with uid1 == uid2" + where);
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed WiC record: ") + e.what() + where);
    }
  }
  return out;
}

void write_wic_pairs(std::span<const WicPair> pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["uid1"] = p.uid1;
    j["uid2"] = p.uid2;
    j["lemma"] = p.lemma;
    j["pos"] = to_string(p.pos);
    j["split"] = to_string(p.split);
    j["label"] = p.label;
    out << j.dump() << '\n';
  }
}

void fill_similarities(std::span<WicPair> pairs, const EmbeddingStore& store, int layer) {
  for (auto& p : pairs) {
    p.similarity = 1.0 - cosine_distance(store.lookup(p.uid1, layer), store.lookup(p.uid2, layer));
  }
}

namespace {

double require_similarity(const WicPair& p) {
  if (!p.similarity) throw DataError("WiC pair (" + p.uid1 + ", " + p.uid2 + ") has no similarity");
  return *p.similarity;
}

// F1 = 2tp / (2tp + fp + fn) as an exact fraction, for tie-free comparison.
struct F1Fraction {
  std::size_t num = 0;
  std::size_t den = 0;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  bool operator>(const F1Fraction& o) const {
    // num/den > o.num/o.den with 0/0 treated as 0. Counts stay far below 2^32.
    const auto lhs = static_cast<std::uint64_t>(num) * (o.den == 0 ? 1 : o.den);
    const auto rhs = static_cast<std::uint64_t>(o.num) * (den == 0 ? 1 : den);
    return lhs > rhs;
  }
};

}  // namespace

std::vector<double> candidate_thresholds(std::span<const WicPair> pairs) {
  std::vector<double> sims;
  sims.reserve(pairs.size());
  for (const auto& p : pairs) sims.push_back(require_similarity(p));
  std::sort(sims.begin(), sims.end());
  sims.erase(std::unique(sims.begin(), sims.end()), sims.end());
  std::vector<double> out;
  out.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < sims.size(); ++i) out.push_back((sims[i] + sims[i + 1]) / 2.0);
  out.push_back(std::numeric_limits<double>::infinity());
  return out;
}

ThresholdClassifier tune_threshold(std::span<const WicPair> dev, int layer, std::optional<Pos> pos) {
  if (dev.empty()) throw DataError("WiC dev set is empty");
  std::vector<std::pair<double, bool>> items;
  std::size_t positives = 0;
  for (const auto& p : dev) {
    items.emplace_back(require_similarity(p), p.label);
    positives += p.label;
  }
  if (positives == 0 || positives == dev.size()) throw DataError("WiC dev set has a single class");
  std::sort(items.begin(), items.end());

  // Sweep thresholds from -inf upwards; predicted positives are the suffix.
  const auto candidates = candidate_thresholds(dev);
  std::size_t tp = positives;
  std::size_t fp = dev.size() - positives;
  std::size_t next = 0;  // first item still predicted positive
  F1Fraction best{};
  double best_threshold = candidates.front();
  bool have_best = false;
  for (const double t : candidates) {
    while (next < items.size() && items[next].first < t) {
      items[next].second ? --tp : --fp;
      ++next;
    }
    const std::size_t fn = positives - tp;
    const F1Fraction f{2 * tp, 2 * tp + fp + fn};
    if (!have_best || f > best) {
      best = f;
      best_threshold = t;
      have_best = true;
    }
  }
  return {best_threshold, layer, pos, best.value()};
}

F1Scores evaluate(std::span<const WicPair> pairs, const ThresholdClassifier& classifier) {
  std::vector<bool> preds;
  std::vector<bool> labels;
  preds.reserve(pairs.size());
  labels.reserve(pairs.size());
  for (const auto& p : pairs) {
    preds.push_back(classifier.classify(require_similarity(p)));
    labels.push_back(p.label);
  }
  return f1_scores(preds, labels);
}

DwugConversion convert_dwug(std::span<const DwugJudgment> judgments, Split split) {
  DwugConversion out;
  for (const auto& j : judgments) {
    if (!(j.mean_rating >= 1.0 && j.mean_rating <= 4.0)) {
      throw DataError("DWUG rating " + text::format_real(j.mean_rating) + " outside [1, 4] for (" + j.uid1 + ", " +
                      j.uid2 + ")");
    }
    if (j.mean_rating > 3.5 || j.mean_rating < 1.5) {
      out.pairs.push_back({j.uid1, j.uid2, j.lemma, j.pos, split, j.mean_rating > 3.5, std::nullopt});
    } else {
      ++out.dropped;
    }
  }
  return out;
}

std::vector<DwugJudgment> load_dwug_judgments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open DWUG judgments file " + path.string());
  std::vector<DwugJudgment> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty() || body.front() == '#' || (line_no == 1 && body.starts_with("uid1\t"))) continue;
    const auto cols = text::split(body, '\t');
    const auto where = " at line " + std::to_string(line_no) + " of " + path.string();
    if (cols.size() != 5) throw DataError("malformed DWUG row (expected 5 columns)" + where);
    DwugJudgment j;
    j.uid1 = cols[0];
    j.uid2 = cols[1];
    j.lemma = cols[2];
    const auto pos = parse_pos(cols[3]);
    if (!pos) throw DataError("unknown pos '" + std::string(cols[3]) + "'" + where);
    j.pos = *pos;
    try {
      std::size_t used = 0;
      const std::string v(cols[4]);
      j.mean_rating = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError("non-numeric rating" + where);
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace lexshift
