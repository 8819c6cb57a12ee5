#include "fixtures.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lexshift/random.hpp"
#include "lexshift/text.hpp"

namespace lexshift::fixtures {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  const auto base = fs::temp_directory_path();
  const auto salt = splitmix64(static_cast<std::uint64_t>(std::hash<std::string>{}(tag)) ^
                               reinterpret_cast<std::uintptr_t>(this) ^ ++counter);
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("lexshift-" + tag + "-" + std::to_string((salt + attempt) % 1000000007));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir for " + tag);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

namespace {

struct Word {
  const char* lemma;
  Pos pos;
};

constexpr std::array<Word, 20> kWords{{
    {"plane", Pos::noun},        {"bank", Pos::noun},      {"café", Pos::noun},     {"river", Pos::noun},
    {"engine", Pos::noun},       {"light", Pos::noun},     {"run", Pos::verb},      {"hold", Pos::verb},
    {"break", Pos::verb},        {"drive", Pos::verb},     {"open", Pos::verb},     {"bright", Pos::adjective},
    {"cold", Pos::adjective},    {"quick", Pos::adjective}, {"naïve", Pos::adjective}, {"heavy", Pos::adjective},
    {"quickly", Pos::adverb},    {"often", Pos::adverb},   {"loudly", Pos::adverb}, {"early", Pos::adverb},
}};

constexpr std::array<const char*, 5> kPrefixes{"", "Yesterday the ", "À côté du café, the ", "Überall ", "They said "};
constexpr std::array<const char*, 4> kSuffixes{" was seen near the river.", " appeared again.",
                                               " fit the naïve plan.", " — nobody noticed."};

}  // namespace

Corpus sentence_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UsageInstance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& w = kWords[rng.uniform_index(kWords.size())];
    const std::string prefix = kPrefixes[rng.uniform_index(kPrefixes.size())];
    const std::string suffix = kSuffixes[rng.uniform_index(kSuffixes.size())];
    std::string form = w.lemma;
    if (prefix.empty()) form[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(form[0])));
    UsageInstance inst;
    inst.uid = "s" + std::to_string(i);
    inst.lemma = w.lemma;
    inst.pos = w.pos;
    inst.text = prefix + form + suffix;
    const auto start = *text::code_point_count(prefix);
    inst.target_span = {start, start + *text::code_point_count(form)};
    inst.period = i % 2 == 0 ? Period::t1 : Period::t2;
    static constexpr std::array<const char*, 4> tags{".n.0", ".v.0", ".a.0", ".r.0"};
    inst.sense_id = std::string(w.lemma) + tags[static_cast<int>(w.pos)] + std::to_string(1 + rng.uniform_index(2));
    out.push_back(std::move(inst));
  }
  return Corpus::from_instances(std::move(out));
}

std::string sentence_lexicon_tsv() {
  return "# lemma\tpos\tsense\tclass\treplacement\n"
         "plane\tnoun\t\tsynonym\taircraft\n"
         "plane\tnoun\tplane.n.02\tsynonym\tsurface\n"
         "plane\tnoun\t\thypernym\tvehicle\n"
         "bank\tnoun\t\tsynonym\tshore\n"
         "bank\tnoun\t\thypernym\tslope\n"
         "café\tnoun\t\tsynonym\tcoffeehouse\n"
         "café\tnoun\t\thypernym\trestaurant\n"
         "river\tnoun\t\tsynonym\tstream\n"
         "river\tnoun\t\thypernym\twaterway\n"
         "engine\tnoun\t\tsynonym\tmotor\n"
         "engine\tnoun\t\thypernym\tmachine\n"
         "light\tnoun\t\tsynonym\tglow\n"
         "light\tnoun\t\tantonym\tdarkness\n"
         "light\tnoun\t\thypernym\tenergy\n"
         "run\tverb\t\tsynonym\tsprint\n"
         "run\tverb\t\thypernym\tmove\n"
         "hold\tverb\t\tsynonym\tgrip\n"
         "hold\tverb\t\tantonym\trelease\n"
         "break\tverb\t\tsynonym\tshatter\n"
         "break\tverb\t\tantonym\trepair\n"
         "break\tverb\t\thypernym\tdamage\n"
         "drive\tverb\t\tsynonym\tsteer\n"
         "open\tverb\t\tantonym\tclose\n"
         "open\tverb\t\thypernym\tchange\n"
         "bright\tadjective\t\tsynonym\tshiny\n"
         "bright\tadjective\t\tantonym\tdim\n"
         "cold\tadjective\t\tsynonym\tchilly\n"
         "cold\tadjective\t\tantonym\thot\n"
         "quick\tadjective\t\tsynonym\tfast\n"
         "quick\tadjective\t\tantonym\tslow\n"
         "naïve\tadjective\t\tsynonym\tgullible\n"
         "heavy\tadjective\t\tantonym\tlight\n"
         "quickly\tadverb\t\tsynonym\trapidly\n"
         "quickly\tadverb\t\tantonym\tslowly\n"
         "often\tadverb\t\tsynonym\tfrequently\n"
         "often\tadverb\t\tantonym\trarely\n"
         "loudly\tadverb\t\tantonym\tquietly\n"
         "early\tadverb\t\tantonym\tlate\n";
}

ReplacementLexicon sentence_lexicon() {
  std::istringstream in(sentence_lexicon_tsv());
  return parse_lexicon(in);
}

EmbeddingStore random_store(const Corpus& corpus, int num_layers, int dim, std::uint64_t seed) {
  EmbeddingManifest m;
  m.model_id = "fixture-random";
  m.num_layers = num_layers;
  m.dim = dim;
  EmbeddingStore store(m);
  std::vector<float> v(static_cast<std::size_t>(dim));
  for (const auto& inst : corpus.instances()) {
    for (int layer = 1; layer <= num_layers; ++layer) {
      Rng rng(stream_seed(seed, inst.uid, std::to_string(layer)));
      for (auto& x : v) x = static_cast<float>(rng.normal());
      store.add(inst.uid, layer, v);
    }
  }
  return store;
}

namespace {

std::vector<double> sphere_point(Rng& rng, int dim, double radius) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  double norm = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x *= radius / norm;
  return v;
}

}  // namespace

SyntheticLsc synthetic_lsc(const SyntheticLscOptions& options) {
  SyntheticLsc out;
  std::vector<UsageInstance> pool;
  std::vector<std::string> lemmas;
  for (std::size_t t = 0; t < options.targets; ++t) {
    char name[16];
    std::snprintf(name, sizeof name, "word%02zu", t);
    lemmas.emplace_back(name);
  }
  for (std::size_t u = 0; u < options.usages_per_target; ++u) {
    for (const auto& lemma : lemmas) {
      UsageInstance inst;
      inst.uid = lemma + "." + std::to_string(u);
      inst.lemma = lemma;
      inst.pos = Pos::noun;
      inst.text = "usage " + std::to_string(u) + " of " + lemma + " here";
      const auto start = *text::code_point_count("usage " + std::to_string(u) + " of ");
      inst.target_span = {start, start + lemma.size()};
      inst.period = Period::t2;
      pool.push_back(std::move(inst));
    }
  }
  out.pool = Corpus::from_instances(std::move(pool));

  Rng order(stream_seed(options.seed, "rates"));
  std::vector<std::size_t> perm(lemmas.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  order.shuffle(perm);
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    const double rate = lemmas.size() > 1 ? options.max_rate * static_cast<double>(i) / (lemmas.size() - 1) : 0.0;
    out.specs.push_back({lemmas[perm[i]], Pos::noun, rate});
  }
  out.injection = inject_graded_change(out.pool, out.specs, options.seed);

  Rng means(stream_seed(options.seed, "means"));
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> centers;
  for (const auto& lemma : lemmas) {
    auto mu = sphere_point(means, options.dim, options.radius);
    auto nu = sphere_point(means, options.dim, options.radius);
    centers.emplace(lemma, std::pair{std::move(mu), std::move(nu)});
  }

  EmbeddingManifest m;
  m.model_id = "fixture-synthetic-lsc";
  m.num_layers = 1;
  m.dim = options.dim;
  out.store = EmbeddingStore(m);
  const double sd = std::sqrt(options.variance);
  std::vector<float> v(static_cast<std::size_t>(options.dim));
  for (const auto* c : {&out.injection.c1, &out.injection.c2}) {
    for (const auto& inst : c->instances()) {
      const auto& [mu, nu] = centers.at(inst.lemma);
      const auto& center = inst.is_replacement() ? nu : mu;
      Rng rng(stream_seed(options.seed, "vec", inst.uid));
      for (std::size_t d = 0; d < v.size(); ++d) v[d] = static_cast<float>(center[d] + sd * rng.normal());
      out.store.add(inst.uid, 1, v);
    }
  }
  return out;
}

ShiftFixture shift_fixture(std::size_t sentences_per_period, std::size_t replacements) {
  // (adjacent, opposite, hypotenuse): cosine distance 1 - a / h.
  static constexpr std::array<std::array<int, 3>, 5> kTriples{{{3, 4, 5}, {5, 12, 13}, {8, 15, 17}, {20, 21, 29}, {7, 24, 25}}};
  constexpr std::array<int, 3> kShiftT1{24, 7, 25};
  constexpr std::array<int, 3> kShiftT2{3, 4, 5};

  ShiftFixture f;
  f.delta = (1.0 - 3.0 / 5.0) - (1.0 - 24.0 / 25.0);
  for (std::size_t j = 0; j < replacements; ++j) f.replacements.push_back("repl" + std::to_string(j));
  f.shifted = f.replacements[replacements / 2];

  EmbeddingManifest m;
  m.model_id = "fixture-shift";
  m.num_layers = 1;
  m.dim = 3;
  f.store = EmbeddingStore(m);

  std::vector<UsageInstance> insts;
  for (const Period period : {Period::t1, Period::t2}) {
    for (std::size_t s = 0; s < sentences_per_period; ++s) {
      UsageInstance o;
      o.uid = std::string(to_string(period)) + "." + std::to_string(s);
      o.lemma = f.lemma;
      o.pos = f.pos;
      o.text = "the " + f.lemma + " held in sentence " + std::to_string(s);
      o.target_span = {4, 4 + f.lemma.size()};
      o.period = period;
      const float scale = static_cast<float>(1 + s % 3);
      const std::array<float, 3> ov{scale, 0.0f, 0.0f};
      f.store.add(o.uid, 1, ov);
      for (std::size_t j = 0; j < replacements; ++j) {
        const auto& r = f.replacements[j];
        auto d = substitute_target(o, r, false);
        d.uid = o.uid + ":" + r;
        d.origin_uid = o.uid;
        d.replacement_class = ReplacementClass::random;
        d.replacement_lemma = r;
        const auto& tri = r == f.shifted ? (period == Period::t1 ? kShiftT1 : kShiftT2)
                                         : kTriples[(s + j) % kTriples.size()];
        const float k = static_cast<float>(1 + (s + j) % 4);
        const std::array<float, 3> dv{k * static_cast<float>(tri[0]), 0.0f, k * static_cast<float>(tri[1])};
        f.store.add(d.uid, 1, dv);
        insts.push_back(std::move(d));
      }
      insts.push_back(std::move(o));
    }
  }
  // Originals before their variants.
  std::vector<UsageInstance> ordered;
  for (auto& inst : insts) {
    if (!inst.is_replacement()) ordered.push_back(inst);
  }
  for (auto& inst : insts) {
    if (inst.is_replacement()) ordered.push_back(std::move(inst));
  }
  f.corpus = Corpus::from_instances(std::move(ordered));
  return f;
}

std::vector<WicPair> wic_pairs(const EmbeddingStore& store, std::size_t per_split, std::uint64_t seed) {
  std::vector<std::string> uids;
  for (std::size_t i = 0; i < store.record_count(); ++i) {
    const auto uid = std::string(store.record(i).uid);
    if (uids.empty() || uids.back() != uid) uids.push_back(uid);
  }
  Rng rng(seed);
  std::vector<WicPair> out;
  for (const Pos pos : {Pos::noun, Pos::verb}) {
    for (const Split split : {Split::dev, Split::test}) {
      for (std::size_t i = 0; i < per_split; ++i) {
        WicPair p;
        p.uid1 = uids[rng.uniform_index(uids.size())];
        do {
          p.uid2 = uids[rng.uniform_index(uids.size())];
        } while (p.uid2 == p.uid1);
        p.lemma = pos == Pos::noun ? "bank" : "run";
        p.pos = pos;
        p.split = split;
        p.label = rng.uniform_index(2) == 1;
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace lexshift::fixtures
