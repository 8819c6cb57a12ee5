#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "lexshift/error.hpp"
#include "lexshift/replacer.hpp"

using namespace lexshift;

namespace {

const std::vector<ReplacementClass> kAll{ReplacementClass::synonym, ReplacementClass::antonym,
                                         ReplacementClass::hypernym, ReplacementClass::random,
                                         ReplacementClass::synthetic};

std::string dump(const Corpus& c) {
  std::ostringstream out;
  write_corpus(c, out);
  return out.str();
}

UsageInstance make(std::string uid, std::string lemma, Pos pos, std::string text, std::size_t start) {
  UsageInstance i;
  i.uid = std::move(uid);
  i.target_span = {start, start + lemma.size()};
  i.lemma = std::move(lemma);
  i.pos = pos;
  i.text = std::move(text);
  return i;
}

}  // namespace

TEST_CASE("every derived instance keeps the context of its origin") {
  const auto corpus = fixtures::sentence_corpus(500, 7);
  ReplaceOptions opts;
  opts.classes = kAll;
  opts.seed = 11;
  const auto result = apply_replacements(corpus, fixtures::sentence_lexicon(), opts);
  std::size_t derived = 0;
  for (const auto& inst : result.corpus.instances()) {
    if (!inst.is_replacement()) continue;
    ++derived;
    const auto& origin = result.corpus.at(*inst.origin_uid);
    REQUIRE(context_without_target(inst) == context_without_target(origin));
    CHECK(inst.lemma == origin.lemma);
    CHECK(inst.pos == origin.pos);
    CHECK(inst.period == origin.period);
    CHECK(*inst.replacement_lemma != origin.lemma);
  }
  CHECK(derived == result.summary.total_emitted());
  CHECK(result.summary.originals == 500);
}

TEST_CASE("synthetic token is inserted verbatim") {
  ReplaceOptions opts;
  opts.classes = {ReplacementClass::synthetic};
  opts.synthetic_token = "[SYNT]";
  const auto result = apply_replacements(fixtures::sentence_corpus(200, 2), fixtures::sentence_lexicon(), opts);
  std::size_t n = 0;
  for (const auto& inst : result.corpus.instances()) {
    if (!inst.is_replacement()) continue;
    ++n;
    const auto [b, e] = byte_span(inst);
    CHECK(inst.text.substr(b, e - b) == "[SYNT]");
    CHECK(inst.replacement_lemma == "[SYNT]");
  }
  CHECK(n == 200);
}

TEST_CASE("sentence-initial capitals carry over to lexical replacements") {
  const auto o = make("o", "quickly", Pos::adverb, "Quickly they left.", 0);
  CHECK(substitute_target(o, "rapidly", false).text == "Rapidly they left.");
  CHECK(substitute_target(o, "rapidly", true).text == "rapidly they left.");
  const auto mid = make("m", "bank", Pos::noun, "the Bank closed", 4);
  CHECK(substitute_target(mid, "shore", false).text == "the shore closed");
}

TEST_CASE("hypernyms are skipped for adjectives and adverbs") {
  const auto corpus = fixtures::sentence_corpus(300, 5);
  ReplaceOptions opts;
  opts.classes = {ReplacementClass::hypernym};
  const auto result = apply_replacements(corpus, fixtures::sentence_lexicon(), opts);
  std::map<Pos, std::size_t> originals;
  for (const auto& inst : corpus.instances()) ++originals[inst.pos];
  CHECK(result.summary.skipped.at({ReplacementClass::hypernym, Pos::adjective}) == originals[Pos::adjective]);
  CHECK(result.summary.skipped.at({ReplacementClass::hypernym, Pos::adverb}) == originals[Pos::adverb]);
  for (const auto& inst : result.corpus.instances()) {
    if (inst.is_replacement()) CHECK(hypernym_allowed(inst.pos));
  }
}

TEST_CASE("adverb synonym and antonym give two variants where both exist") {
  const auto o = make("o", "quickly", Pos::adverb, "he ran quickly home", 7);
  const auto corpus = Corpus::from_instances({o});
  ReplaceOptions opts;
  opts.classes = {ReplacementClass::synonym, ReplacementClass::antonym};
  const auto result = apply_replacements(corpus, fixtures::sentence_lexicon(), opts);
  REQUIRE(result.corpus.size() == 3);
  CHECK(result.corpus.at("o:synonym").text == "he ran rapidly home");
  CHECK(result.corpus.at("o:antonym").text == "he ran slowly home");
}

TEST_CASE("empty lexicon emits nothing and reports skips") {
  const auto corpus = fixtures::sentence_corpus(20, 1);
  ReplaceOptions opts;
  opts.classes = {ReplacementClass::synonym, ReplacementClass::antonym, ReplacementClass::hypernym};
  const auto result = apply_replacements(corpus, ReplacementLexicon{}, opts);
  CHECK(result.corpus == corpus);
  CHECK(result.summary.total_emitted() == 0);
  CHECK(result.summary.total_skipped() == 60);
  opts.classes = {ReplacementClass::random};
  CHECK_THROWS_AS(apply_replacements(corpus, ReplacementLexicon{}, opts), DataError);
}

TEST_CASE("seeded runs are byte-identical and the seed matters") {
  const auto corpus = fixtures::sentence_corpus(500, 9);
  const auto lex = fixtures::sentence_lexicon();
  ReplaceOptions opts;
  opts.classes = kAll;
  opts.seed = 5;
  const auto a = dump(apply_replacements(corpus, lex, opts).corpus);
  const auto b = dump(apply_replacements(corpus, lex, opts).corpus);
  CHECK(a == b);
  opts.seed = 6;
  CHECK(dump(apply_replacements(corpus, lex, opts).corpus) != a);
}

TEST_CASE("all mode applies every candidate and shares random draws per target") {
  const auto corpus = fixtures::sentence_corpus(200, 12);
  ReplaceOptions opts;
  opts.classes = {ReplacementClass::synonym, ReplacementClass::antonym, ReplacementClass::hypernym,
                  ReplacementClass::random};
  opts.mode = ReplaceMode::all;
  opts.random_count = 3;
  const auto lex = fixtures::sentence_lexicon();
  const auto result = apply_replacements(corpus, lex, opts);
  std::map<std::pair<std::string, Pos>, std::set<std::set<std::string>>> word_sets;
  for (const auto& o : corpus.instances()) {
    std::set<std::string> words;
    std::set<std::string> random_words;
    for (auto d : result.corpus.derived_from(o.uid)) {
      const auto& inst = result.corpus.instances()[d];
      CHECK(words.insert(*inst.replacement_lemma).second);
      if (inst.replacement_class == ReplacementClass::random) random_words.insert(*inst.replacement_lemma);
    }
    for (const auto& r : lex.replacements_for(o.lemma, o.pos)) {
      const bool applicable = !lex.lookup(o.lemma, o.pos, ReplacementClass::synonym, o.sense_id).empty() ||
                              !lex.lookup(o.lemma, o.pos, ReplacementClass::antonym, o.sense_id).empty() ||
                              !lex.lookup(o.lemma, o.pos, ReplacementClass::hypernym, o.sense_id).empty();
      if (applicable && r != "surface") CHECK(words.contains(r));
    }
    word_sets[{o.lemma, o.pos}].insert(words);
  }
  // Same target, same sense coverage: identical replacement sets in every sentence.
  for (const auto& [key, sets] : word_sets) {
    CAPTURE(key.first);
    CHECK(sets.size() <= (key.first == "plane" ? 2u : 1u));
  }
}

TEST_CASE("write_summary lists emitted and skipped counts") {
  ReplaceSummary s;
  s.emitted[{ReplacementClass::synonym, Pos::noun}] = 4;
  s.skipped[{ReplacementClass::hypernym, Pos::adverb}] = 2;
  std::ostringstream out;
  write_summary(s, out);
  CHECK(out.str() == "class\tpos\temitted\tskipped\nsynonym\tnoun\t4\t0\nhypernym\tadverb\t0\t2\n");
}

TEST_CASE("injected_count absorbs representation error") {
  CHECK(injected_count(0.29, 100) == 29);
  CHECK(injected_count(0.0, 100) == 0);
  CHECK(injected_count(0.5, 31) == 15);
  CHECK(injected_count(0.9, 30) == 27);
}

TEST_CASE("graded injection: rate 0, rate 0.5 and realized gold") {
  fixtures::SyntheticLscOptions o;
  o.targets = 4;
  o.usages_per_target = 21;
  const auto s = fixtures::synthetic_lsc(o);
  const auto& inj = s.injection;
  for (const auto& inst : inj.c1.instances()) {
    CHECK(inst.period == Period::t1);
    CHECK_FALSE(inst.is_replacement());
  }
  std::map<std::string, std::size_t> c1_count;
  for (const auto& inst : inj.c1.instances()) ++c1_count[inst.lemma];
  for (const auto& [lemma, n] : c1_count) CHECK(n == 11);

  REQUIRE(inj.gold.size() == 4);
  for (const auto& g : inj.gold) {
    const auto spec = std::find_if(s.specs.begin(), s.specs.end(), [&](auto& x) { return x.lemma == g.lemma; });
    CHECK(g.genuine_c2 == 10);
    CHECK(g.injected == injected_count(spec->rate, 10));
    const double expected = g.injected == 0 ? 0.0 : static_cast<double>(g.injected) / (g.injected + g.genuine_c2);
    CHECK(g.gold_change == doctest::Approx(expected).epsilon(1e-15));
    std::size_t injected = 0;
    for (const auto& inst : inj.c2.instances()) {
      if (inst.is_replacement() && inst.lemma == g.lemma) {
        ++injected;
        const auto& donor = inj.c2.at(*inst.origin_uid);
        CHECK(donor.lemma != g.lemma);
        CHECK_FALSE(donor.is_replacement());
        CHECK(inst.word() == g.lemma);
      }
    }
    CHECK(injected == g.injected);
  }

  const std::vector<InjectionSpec> half{{"word00", Pos::noun, 0.5}};
  const auto r = inject_graded_change(s.pool, half, 3);
  REQUIRE(r.gold.size() == 1);
  CHECK(r.gold[0].injected == 5);
  CHECK(r.gold[0].gold_change == doctest::Approx(5.0 / 15.0));
  const std::vector<InjectionSpec> zero{{"word00", Pos::noun, 0.0}};
  CHECK(inject_graded_change(s.pool, zero, 3).gold[0].gold_change == 0.0);
}

TEST_CASE("46 targets with rates spread over [0, 1]") {
  fixtures::SyntheticLscOptions o;
  o.targets = 46;
  o.usages_per_target = 8;
  o.max_rate = 1.0;
  const auto s = fixtures::synthetic_lsc(o);
  CHECK(s.injection.gold.size() == 46);
  std::set<std::string> lemmas;
  for (const auto& g : s.injection.gold) lemmas.insert(g.lemma);
  CHECK(lemmas.size() == 46);
}

TEST_CASE("injection input errors") {
  fixtures::SyntheticLscOptions o;
  o.targets = 3;
  o.usages_per_target = 4;
  const auto s = fixtures::synthetic_lsc(o);
  const std::vector<InjectionSpec> bad_rate{{"word00", Pos::noun, 1.5}};
  CHECK_THROWS_AS(inject_graded_change(s.pool, bad_rate, 1), DataError);
  const std::vector<InjectionSpec> missing{{"nothing", Pos::noun, 0.5}};
  CHECK_THROWS_AS(inject_graded_change(s.pool, missing, 1), DataError);
  const std::vector<InjectionSpec> dup{{"word00", Pos::noun, 0.5}, {"word00", Pos::noun, 0.2}};
  CHECK_THROWS_AS(inject_graded_change(s.pool, dup, 1), DataError);
}
