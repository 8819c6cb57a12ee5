#include "lexshift/lscscore.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <unordered_map>

#include "lexshift/error.hpp"
#include "lexshift/kernels.hpp"
#include "lexshift/metrics.hpp"
#include "lexshift/random.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

namespace {
constexpr std::array<std::string_view, 4> kMethodNames{"prt", "jsd", "replacement", "substitution"};
}

std::string_view to_string(ScoreMethod m) { return kMethodNames[static_cast<std::size_t>(m)]; }

std::optional<ScoreMethod> parse_score_method(std::string_view s) {
  for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
    if (kMethodNames[i] == s) return static_cast<ScoreMethod>(i);
  }
  return std::nullopt;
}

namespace {

std::vector<double> mean_vector(VectorList vs, const char* which) {
  if (vs.empty()) throw DataError(std::string("prototype: no vectors in ") + which);
  const std::size_t dim = vs[0].size();
  std::vector<double> acc(dim, 0.0);
  for (const auto& v : vs) {
    if (v.size() != dim) throw DataError("prototype: vectors differ in dimension");
    kernels::accumulate(acc, v);
  }
  for (auto& x : acc) x /= static_cast<double>(vs.size());
  return acc;
}

}  // namespace

double prt_score(VectorList t1, VectorList t2) {
  const auto m1 = mean_vector(t1, "T1");
  const auto m2 = mean_vector(t2, "T2");
  if (m1.size() != m2.size()) throw DataError("prototype: periods differ in dimension");
  return cosine_distance(std::span<const double>(m1), std::span<const double>(m2));
}

JsdScore jsd_score(VectorList t1, VectorList t2, const ApParams& params) {
  if (t1.empty() || t2.empty()) throw DataError("jsd score: a period has no usages");
  std::vector<std::span<const float>> points(t1.begin(), t1.end());
  points.insert(points.end(), t2.begin(), t2.end());
  std::vector<Period> periods(t1.size(), Period::t1);
  periods.resize(points.size(), Period::t2);

  const auto ap = affinity_propagation(points, params);
  const auto d = cluster_distributions(ap, periods);
  return {jsd(d.p, d.q), ap.n_clusters(), ap.n_iter, ap.converged};
}

void rank_profile(ReplacementProfile& profile) {
  std::sort(profile.stats.begin(), profile.stats.end(), [](const ReplacementStat& a, const ReplacementStat& b) {
    if (a.td != b.td) return a.td > b.td;
    return a.replacement < b.replacement;
  });
  for (std::size_t i = 0; i < profile.stats.size(); ++i) profile.stats[i].rank = i + 1;
}

ReplacementProfile replacement_profile(const std::string& lemma, Pos pos, std::span<const std::string> replacements,
                                       const Corpus& corpus, const EmbeddingStore& store,
                                       const ProfileOptions& options) {
  if (replacements.empty()) throw DataError("no replacements for '" + lemma + "'");
  std::map<std::string, std::size_t> slot;
  for (const auto& r : replacements) {
    if (!slot.emplace(r, slot.size()).second) throw DataError("duplicate replacement '" + r + "' for '" + lemma + "'");
  }

  ReplacementProfile profile;
  profile.lemma = lemma;
  profile.pos = pos;
  profile.layer = options.layer;

  // Per period: complete originals and their variant uid per replacement slot.
  struct Candidate {
    const UsageInstance* original;
    std::vector<const UsageInstance*> variants;
  };
  std::array<std::vector<Candidate>, 2> candidates;
  std::array<std::size_t, 2> incomplete{0, 0};
  const auto& insts = corpus.instances();
  for (auto i : corpus.by_lemma(lemma, pos)) {
    const auto& orig = insts[i];
    if (orig.is_replacement() || !orig.period) continue;
    Candidate c{&orig, std::vector<const UsageInstance*>(replacements.size(), nullptr)};
    for (auto d : corpus.derived_from(orig.uid)) {
      const auto& v = insts[d];
      const auto it = slot.find(v.word());
      if (it != slot.end() && !c.variants[it->second]) c.variants[it->second] = &v;
    }
    const auto p = static_cast<std::size_t>(*orig.period);
    if (std::find(c.variants.begin(), c.variants.end(), nullptr) != c.variants.end()) {
      ++incomplete[p];
      continue;
    }
    candidates[p].push_back(std::move(c));
  }
  profile.incomplete_t1 = incomplete[0];
  profile.incomplete_t2 = incomplete[1];

  std::array<std::vector<const Candidate*>, 2> sample;
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& cands = candidates[p];
    if (cands.empty()) {
      throw DataError("no usable sentences of '" + lemma + "' in " + std::string(to_string(static_cast<Period>(p))));
    }
    if (cands.size() <= options.max_sentences) {
      for (const auto& c : cands) sample[p].push_back(&c);
    } else {
      Rng rng(stream_seed(options.seed, lemma, to_string(pos), to_string(static_cast<Period>(p))));
      auto idx = rng.sample_indices(cands.size(), options.max_sentences);
      std::sort(idx.begin(), idx.end());
      for (auto k : idx) sample[p].push_back(&cands[k]);
    }
  }
  for (const auto* c : sample[0]) profile.sample_t1.push_back(c->original->uid);
  for (const auto* c : sample[1]) profile.sample_t2.push_back(c->original->uid);

  for (const auto& r : replacements) {
    const auto j = slot.at(r);
    std::array<double, 2> awd{};
    for (std::size_t p = 0; p < 2; ++p) {
      double sum = 0.0;
      for (const auto* c : sample[p]) {
        sum += cosine_distance(store.lookup(c->original->uid, options.layer),
                               store.lookup(c->variants[j]->uid, options.layer));
      }
      awd[p] = sum / static_cast<double>(sample[p].size());
    }
    profile.stats.push_back({r, awd[0], awd[1], std::abs(awd[0] - awd[1]), 0});
  }
  rank_profile(profile);
  return profile;
}

double lsc_replacement(const ReplacementProfile& profile, std::size_t k) {
  if (k < 1 || k > profile.stats.size()) {
    throw DataError("k = " + std::to_string(k) + " out of range [1, " + std::to_string(profile.stats.size()) +
                    "] for '" + profile.lemma + "'");
  }
  std::vector<double> tds;
  tds.reserve(profile.stats.size());
  for (const auto& s : profile.stats) tds.push_back(s.td);
  std::partial_sort(tds.begin(), tds.begin() + static_cast<std::ptrdiff_t>(k), tds.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += tds[i];
  return sum / static_cast<double>(k);
}

double substitution_score(std::span<const SubstituteSet> t1, std::span<const SubstituteSet> t2, std::size_t max_pairs,
                          std::uint64_t seed) {
  if (t1.empty() || t2.empty()) throw DataError("substitution score: a period has no usages");
  for (auto side : {t1, t2}) {
    for (const auto& s : side) {
      if (s.substitutes.empty()) throw DataError("empty substitute set for uid '" + s.uid + "'");
    }
  }
  const std::size_t total = t1.size() * t2.size();
  double sum = 0.0;
  if (max_pairs == 0 || max_pairs >= total) {
    for (const auto& a : t1) {
      for (const auto& b : t2) sum += jaccard_distance(a.substitutes, b.substitutes);
    }
    return sum / static_cast<double>(total);
  }
  Rng rng(seed);
  auto idx = rng.sample_indices(total, max_pairs);
  std::sort(idx.begin(), idx.end());
  for (auto k : idx) sum += jaccard_distance(t1[k / t2.size()].substitutes, t2[k % t2.size()].substitutes);
  return sum / static_cast<double>(idx.size());
}

std::vector<SubstituteSet> load_substitutes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open substitutes file " + path.string());
  std::vector<SubstituteSet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(body);
      SubstituteSet s;
      s.uid = j.at("uid").get<std::string>();
      for (const auto& w : j.at("substitutes")) s.substitutes.insert(w.get<std::string>());
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed substitutes record: ") + e.what() + " at line " +
                      std::to_string(line_no) + " of " + path.string());
    }
  }
  return out;
}

std::vector<GoldScore> load_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open gold file " + path.string());
  std::vector<GoldScore> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cols = text::split(body, '\t');
    const auto where = " at line " + std::to_string(line_no) + " of " + path.string();
    if (cols.size() < 2) throw DataError("malformed gold row" + where);
    try {
      std::size_t used = 0;
      const std::string value(cols[1]);
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing characters");
      out.push_back({std::string(cols[0]), v});
    } catch (const std::exception&) {
      throw DataError("non-numeric gold value" + where);
    }
  }
  return out;
}

double rank_and_correlate(std::span<const ChangeScore> scores, std::span<const GoldScore> gold) {
  std::map<std::string, double> by_lemma;
  for (const auto& s : scores) {
    if (!by_lemma.emplace(s.lemma, s.score).second) throw DataError("duplicate score for lemma '" + s.lemma + "'");
  }
  std::map<std::string, double> gold_by_lemma;
  for (const auto& g : gold) {
    if (!gold_by_lemma.emplace(g.lemma, g.value).second) {
      throw DataError("duplicate gold entry for lemma '" + g.lemma + "'");
    }
  }
  std::string missing_gold;
  std::string missing_score;
  for (const auto& [l, _] : by_lemma) {
    if (!gold_by_lemma.contains(l)) missing_gold += (missing_gold.empty() ? "" : ", ") + l;
  }
  for (const auto& [l, _] : gold_by_lemma) {
    if (!by_lemma.contains(l)) missing_score += (missing_score.empty() ? "" : ", ") + l;
  }
  if (!missing_gold.empty() || !missing_score.empty()) {
    std::string msg = "lemma mismatch between scores and gold;";
    if (!missing_gold.empty()) msg += " no gold for: " + missing_gold + ";";
    if (!missing_score.empty()) msg += " no score for: " + missing_score + ";";
    throw DataError(msg);
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [l, v] : by_lemma) {
    xs.push_back(v);
    ys.push_back(gold_by_lemma.at(l));
  }
  return spearman_rho(xs, ys);
}

void write_scores_tsv(std::span<const ChangeScore> scores, std::ostream& out) {
  out << "lemma\tmethod\tlayer\tk\tscore\n";
  for (const auto& s : scores) {
    out << s.lemma << '\t' << to_string(s.method) << '\t' << s.layer << '\t' << (s.k ? std::to_string(*s.k) : "")
        << '\t' << text::format_real(s.score) << '\n';
  }
}

std::vector<ChangeScore> read_scores_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scores file " + path.string());
  std::vector<ChangeScore> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty() || (line_no == 1 && body.starts_with("lemma\t"))) continue;
    const auto cols = text::split(body, '\t');
    const auto where = " at line " + std::to_string(line_no) + " of " + path.string();
    if (cols.size() != 5) throw DataError("malformed score row" + where);
    ChangeScore s;
    s.lemma = cols[0];
    const auto m = parse_score_method(cols[1]);
    if (!m) throw DataError("unknown method '" + std::string(cols[1]) + "'" + where);
    s.method = *m;
    try {
      s.layer = std::stoi(std::string(cols[2]));
      if (!cols[3].empty()) s.k = std::stoi(std::string(cols[3]));
      s.score = std::stod(std::string(cols[4]));
    } catch (const std::exception&) {
      throw DataError("malformed number in score row" + where);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_profile_tsv(const ReplacementProfile& profile, std::ostream& out) {
  out << "replacement\tawd_t1\tawd_t2\ttd\trank\n";
  for (const auto& s : profile.stats) {
    out << s.replacement << '\t' << text::format_real(s.awd_t1) << '\t' << text::format_real(s.awd_t2) << '\t'
        << text::format_real(s.td) << '\t' << s.rank << '\n';
  }
}

}  // namespace lexshift
