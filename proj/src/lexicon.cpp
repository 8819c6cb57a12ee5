#include "lexshift/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <unordered_set>

#include "lexshift/error.hpp"
#include "lexshift/random.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

ReplacementLexicon ReplacementLexicon::from_entries(std::vector<LexiconEntry> entries) {
  for (const auto& e : entries) {
    if (e.lemma.empty() || e.replacement_lemma.empty()) throw DataError("lexicon entry with empty lemma");
    if (e.replacement_lemma == e.lemma) {
      throw DataError("lexicon entry replaces '" + e.lemma + "' with itself");
    }
    if (e.cls != ReplacementClass::synonym && e.cls != ReplacementClass::antonym &&
        e.cls != ReplacementClass::hypernym) {
      throw DataError("lexicon class must be synonym, antonym or hypernym (lemma '" + e.lemma + "')");
    }
    if (e.cls == ReplacementClass::hypernym && !hypernym_allowed(e.pos)) {
      throw DataError("hypernym entry for " + std::string(to_string(e.pos)) + " '" + e.lemma + "'");
    }
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

  ReplacementLexicon lex;
  lex.entries_ = std::move(entries);
  std::set<std::string> vocab[4];
  for (const auto& e : lex.entries_) {
    auto& v = vocab[static_cast<std::size_t>(e.pos)];
    v.insert(e.lemma);
    v.insert(e.replacement_lemma);
  }
  for (std::size_t p = 0; p < 4; ++p) lex.vocabulary_[p].assign(vocab[p].begin(), vocab[p].end());
  return lex;
}

std::vector<const LexiconEntry*> ReplacementLexicon::lookup(std::string_view lemma, Pos pos, ReplacementClass cls,
                                                            const std::optional<std::string>& sense_id) const {
  std::vector<const LexiconEntry*> out;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{lemma, pos},
                             [](const LexiconEntry& e, const std::pair<std::string_view, Pos>& key) {
                               return std::tie(e.lemma, e.pos) < std::tie(key.first, key.second);
                             });
  for (; it != entries_.end() && it->lemma == lemma && it->pos == pos; ++it) {
    if (it->cls != cls) continue;
    if (sense_id && !it->sense_id.empty() && it->sense_id != *sense_id) continue;
    out.push_back(&*it);
  }
  return out;
}

std::vector<std::string> ReplacementLexicon::replacements_for(std::string_view lemma, Pos pos) const {
  std::set<std::string> out;
  for (const auto& e : entries_) {
    if (e.lemma == lemma && e.pos == pos) out.insert(e.replacement_lemma);
  }
  return {out.begin(), out.end()};
}

const std::vector<std::string>& ReplacementLexicon::vocabulary(Pos pos) const {
  return vocabulary_[static_cast<std::size_t>(pos)];
}

ReplacementLexicon parse_lexicon(std::istream& in) {
  std::vector<LexiconEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty() || body.front() == '#') continue;
    const auto where = " at line " + std::to_string(line_no);
    const auto cols = text::split(body, '\t');
    if (cols.size() != 5) throw DataError("malformed lexicon row (expected 5 columns)" + where);
    LexiconEntry e;
    e.lemma = cols[0];
    const auto pos = parse_pos(cols[1]);
    if (!pos) throw DataError("unknown pos '" + std::string(cols[1]) + "'" + where);
    e.pos = *pos;
    e.sense_id = cols[2];
    const auto cls = parse_replacement_class(cols[3]);
    if (!cls) throw DataError("unknown class '" + std::string(cols[3]) + "'" + where);
    e.cls = *cls;
    e.replacement_lemma = cols[4];
    try {
      (void)ReplacementLexicon::from_entries({e});
    } catch (const DataError& err) {
      throw DataError(err.what() + where);
    }
    entries.push_back(std::move(e));
  }
  return ReplacementLexicon::from_entries(std::move(entries));
}

ReplacementLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file " + path.string());
  try {
    return parse_lexicon(in);
  } catch (const DataError& e) {
    throw DataError(std::string(e.what()) + " of " + path.string());
  }
}

Corpus sample_per_synset(const Corpus& corpus, std::size_t max_per_synset, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_sense;
  const auto& insts = corpus.instances();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& inst = insts[i];
    if (inst.is_replacement()) continue;
    if (!inst.sense_id) throw DataError("instance '" + inst.uid + "' has no sense_id");
    by_sense[*inst.sense_id].push_back(i);
  }

  std::vector<bool> keep(insts.size(), false);
  for (const auto& [sense, members] : by_sense) {
    if (members.size() <= max_per_synset) {
      for (auto i : members) keep[i] = true;
      continue;
    }
    Rng rng(stream_seed(seed, sense));
    for (auto k : rng.sample_indices(members.size(), max_per_synset)) keep[members[k]] = true;
  }

  std::unordered_set<std::string_view> kept_uids;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    if (keep[i]) kept_uids.insert(insts[i].uid);
  }
  std::vector<UsageInstance> out;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& inst = insts[i];
    if (keep[i] || (inst.is_replacement() && kept_uids.contains(*inst.origin_uid))) out.push_back(inst);
  }
  return Corpus::from_instances(std::move(out));
}

}  // namespace lexshift
