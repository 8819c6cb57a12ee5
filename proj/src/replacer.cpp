#include "lexshift/replacer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include "lexshift/error.hpp"
#include "lexshift/random.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

std::size_t ReplaceSummary::total_emitted() const {
  std::size_t n = 0;
  for (const auto& [_, c] : emitted) n += c;
  return n;
}

std::size_t ReplaceSummary::total_skipped() const {
  std::size_t n = 0;
  for (const auto& [_, c] : skipped) n += c;
  return n;
}

UsageInstance substitute_target(const UsageInstance& origin, std::string_view word, bool verbatim) {
  const auto [b, e] = byte_span(origin);
  std::string inserted(word);
  const bool sentence_initial = origin.text.find_first_not_of(" \t") == b;
  const auto first = static_cast<unsigned char>(origin.text[b]);
  if (!verbatim && sentence_initial && std::isupper(first) && !inserted.empty() &&
      std::islower(static_cast<unsigned char>(inserted[0]))) {
    inserted[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(inserted[0])));
  }
  const auto len = text::code_point_count(inserted);
  if (!len || *len == 0) throw DataError("replacement word is empty or not valid UTF-8");

  UsageInstance out = origin;
  out.text = origin.text.substr(0, b) + inserted + origin.text.substr(e);
  out.target_span = {origin.target_span.start, origin.target_span.start + *len};
  return out;
}

namespace {

UsageInstance derive(const UsageInstance& orig, ReplacementClass cls, const std::string& word, std::string uid,
                     bool verbatim) {
  auto inst = substitute_target(orig, word, verbatim);
  inst.uid = std::move(uid);
  inst.origin_uid = orig.uid;
  inst.replacement_class = cls;
  inst.replacement_lemma = word;
  return inst;
}

std::vector<std::string> random_pool(const ReplacementLexicon& lexicon, const UsageInstance& orig) {
  std::vector<std::string> pool;
  for (const auto& w : lexicon.vocabulary(orig.pos)) {
    if (w != orig.lemma) pool.push_back(w);
  }
  if (pool.empty()) {
    throw DataError("empty random replacement pool for " + std::string(to_string(orig.pos)) + " (uid '" + orig.uid +
                    "')");
  }
  return pool;
}

bool from_lexicon(ReplacementClass c) {
  return c == ReplacementClass::synonym || c == ReplacementClass::antonym || c == ReplacementClass::hypernym;
}

}  // namespace

ReplaceResult apply_replacements(const Corpus& corpus, const ReplacementLexicon& lexicon,
                                 const ReplaceOptions& options) {
  std::set<ReplacementClass> classes(options.classes.begin(), options.classes.end());
  if (classes.contains(ReplacementClass::synthetic) && options.synthetic_token.empty()) {
    throw DataError("synthetic token must be non-empty");
  }

  ReplaceSummary summary;
  std::vector<UsageInstance> out;
  // Per-target random draws for ReplaceMode::all, shared by every sentence of the target.
  std::map<std::pair<std::string, Pos>, std::vector<std::string>> random_by_target;

  for (const auto& orig : corpus.instances()) {
    out.push_back(orig);
    if (orig.is_replacement()) continue;
    ++summary.originals;
    std::set<std::string> used;  // ReplaceMode::all: one variant per replacement lemma

    for (const auto cls : classes) {
      const auto key = std::pair{cls, orig.pos};
      const auto cls_name = std::string(to_string(cls));

      if (cls == ReplacementClass::hypernym && !hypernym_allowed(orig.pos)) {
        ++summary.skipped[key];
        continue;
      }

      if (cls == ReplacementClass::synthetic) {
        out.push_back(derive(orig, cls, options.synthetic_token, orig.uid + ":" + cls_name, true));
        ++summary.emitted[key];
        continue;
      }

      if (options.mode == ReplaceMode::per_class) {
        std::string word;
        Rng rng(stream_seed(options.seed, orig.uid, cls_name));
        if (from_lexicon(cls)) {
          const auto candidates = lexicon.lookup(orig.lemma, orig.pos, cls, orig.sense_id);
          if (candidates.empty()) {
            ++summary.skipped[key];
            continue;
          }
          word = candidates[rng.uniform_index(candidates.size())]->replacement_lemma;
        } else {
          const auto pool = random_pool(lexicon, orig);
          word = pool[rng.uniform_index(pool.size())];
        }
        out.push_back(derive(orig, cls, word, orig.uid + ":" + cls_name, false));
        ++summary.emitted[key];
        continue;
      }

      std::vector<std::string> words;
      if (from_lexicon(cls)) {
        for (const auto* e : lexicon.lookup(orig.lemma, orig.pos, cls, orig.sense_id)) words.push_back(e->replacement_lemma);
      } else {
        auto [it, inserted] = random_by_target.try_emplace({orig.lemma, orig.pos});
        if (inserted) {
          const auto pool = random_pool(lexicon, orig);
          Rng rng(stream_seed(options.seed, orig.lemma, to_string(orig.pos), "random"));
          for (auto i : rng.sample_indices(pool.size(), options.random_count)) it->second.push_back(pool[i]);
          std::sort(it->second.begin(), it->second.end());
        }
        words = it->second;
      }
      std::size_t emitted = 0;
      for (const auto& w : words) {
        if (!used.insert(w).second) continue;
        out.push_back(derive(orig, cls, w, orig.uid + ":" + cls_name + ":" + w, false));
        ++emitted;
      }
      if (emitted == 0) {
        ++summary.skipped[key];
      } else {
        summary.emitted[key] += emitted;
      }
    }
  }
  return {Corpus::from_instances(std::move(out)), std::move(summary)};
}

void write_summary(const ReplaceSummary& summary, std::ostream& out) {
  out << "class\tpos\temitted\tskipped\n";
  std::set<std::pair<ReplacementClass, Pos>> keys;
  for (const auto& [k, _] : summary.emitted) keys.insert(k);
  for (const auto& [k, _] : summary.skipped) keys.insert(k);
  for (const auto& k : keys) {
    const auto e = summary.emitted.contains(k) ? summary.emitted.at(k) : 0;
    const auto s = summary.skipped.contains(k) ? summary.skipped.at(k) : 0;
    out << to_string(k.first) << '\t' << to_string(k.second) << '\t' << e << '\t' << s << '\n';
  }
}

std::size_t injected_count(double rate, std::size_t genuine) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(std::floor(rate * static_cast<double>(genuine) + 1e-9));
}

InjectionResult inject_graded_change(const Corpus& pool, std::span<const InjectionSpec> specs,
                                     std::uint64_t split_seed) {
  const auto& insts = pool.instances();
  std::map<std::pair<std::string, Pos>, std::vector<std::size_t>> by_target;
  std::vector<std::pair<std::string, Pos>> target_order;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& inst = insts[i];
    if (inst.is_replacement() || inst.period != Period::t2) continue;
    auto [it, inserted] = by_target.try_emplace({inst.lemma, inst.pos});
    if (inserted) target_order.push_back(it->first);
    it->second.push_back(i);
  }
  std::set<std::string> lemmas;
  for (const auto& [k, _] : by_target) lemmas.insert(k.first);
  if (lemmas.size() < 2) throw DataError("injection pool needs at least two distinct T2 target lemmas");

  std::set<std::pair<std::string, Pos>> seen;
  for (const auto& spec : specs) {
    if (!(spec.rate >= 0.0 && spec.rate <= 1.0)) {
      throw DataError("injection rate for '" + spec.lemma + "' outside [0, 1]");
    }
    const auto key = std::pair{spec.lemma, spec.pos};
    if (!seen.insert(key).second) throw DataError("duplicate injection spec for '" + spec.lemma + "'");
    const auto it = by_target.find(key);
    if (it == by_target.end()) throw DataError("injection target '" + spec.lemma + "' has no T2 usages in the pool");
    if (it->second.size() < 2) throw DataError("injection target '" + spec.lemma + "' needs at least two usages");
  }

  // Genuine usages of every pool lemma are split; extra usage goes to C1.
  std::vector<int> side(insts.size(), -1);
  for (const auto& key : target_order) {
    auto idx = by_target.at(key);
    Rng rng(stream_seed(split_seed, "split", key.first, to_string(key.second)));
    rng.shuffle(idx);
    const std::size_t n1 = (idx.size() + 1) / 2;
    for (std::size_t k = 0; k < idx.size(); ++k) side[idx[k]] = k < n1 ? 1 : 2;
  }

  std::vector<UsageInstance> c1;
  std::vector<UsageInstance> c2;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    if (side[i] < 0) continue;
    auto inst = insts[i];
    inst.period = side[i] == 1 ? Period::t1 : Period::t2;
    if (side[i] == 1) {
      c1.push_back(std::move(inst));
    } else {
      c2.push_back(std::move(inst));
    }
  }

  InjectionResult result;
  const std::size_t genuine_total = c2.size();
  for (const auto& spec : specs) {
    std::size_t genuine = 0;
    std::vector<std::size_t> donors;  // indices into c2
    for (std::size_t k = 0; k < genuine_total; ++k) {
      if (c2[k].lemma == spec.lemma && c2[k].pos == spec.pos) {
        ++genuine;
      } else if (c2[k].lemma != spec.lemma) {
        donors.push_back(k);
      }
    }
    const auto injected = injected_count(spec.rate, genuine);
    if (injected > 0 && donors.empty()) throw DataError("no donor sentences available for '" + spec.lemma + "'");

    Rng rng(stream_seed(split_seed, "inject", spec.lemma, to_string(spec.pos)));
    std::vector<std::pair<std::size_t, std::size_t>> picks;  // (donor, round)
    for (std::size_t round = 0; picks.size() < injected; ++round) {
      const auto want = std::min(donors.size(), injected - picks.size());
      for (auto d : rng.sample_indices(donors.size(), want)) picks.emplace_back(donors[d], round);
    }
    for (const auto& [d, round] : picks) {
      const UsageInstance donor = c2[d];
      auto inst = substitute_target(donor, spec.lemma, false);
      inst.uid = donor.uid + ">" + spec.lemma + "/" + std::string(to_string(spec.pos));
      if (round > 0) inst.uid += "#" + std::to_string(round);
      inst.lemma = spec.lemma;
      inst.pos = spec.pos;
      inst.period = Period::t2;
      inst.sense_id.reset();
      inst.origin_uid = donor.uid;
      inst.replacement_class = ReplacementClass::random;
      inst.replacement_lemma = spec.lemma;
      c2.push_back(std::move(inst));
    }

    GradedGold g;
    g.lemma = spec.lemma;
    g.pos = spec.pos;
    g.injected = injected;
    g.genuine_c2 = genuine;
    g.gold_change = static_cast<double>(injected) / static_cast<double>(injected + genuine);
    result.gold.push_back(std::move(g));
  }

  result.c1 = Corpus::from_instances(std::move(c1));
  result.c2 = Corpus::from_instances(std::move(c2));
  return result;
}

void write_gold(std::span<const GradedGold> gold, std::ostream& out) {
  for (const auto& g : gold) out << g.lemma << '\t' << text::format_real(g.gold_change) << '\n';
}

void write_gold(std::span<const GradedGold> gold, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write gold file " + path.string());
  write_gold(gold, out);
}

}  // namespace lexshift
