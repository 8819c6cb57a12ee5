#include <algorithm>
#include <cctype>
#include <iostream>
#include <map>
#include <memory>
#include <set>

#include "common.hpp"
#include "lexshift/embedstore.hpp"
#include "lexshift/error.hpp"
#include "lexshift/lexicon.hpp"
#include "lexshift/lscscore.hpp"
#include "lexshift/random.hpp"
#include "lexshift/text.hpp"

namespace lexshift::cli {

namespace {

struct LscArgs {
  std::string method;
  std::vector<std::string> corpus;
  std::string manifest;
  std::string data;
  std::string lexicon;
  std::string substitutes;
  std::string gold;
  std::string targets;
  int layer = -1;
  bool all_layers = false;
  int k_min = 1;
  int k_max = 0;
  std::size_t max_sentences = 200;
  std::size_t max_pairs = 0;
  std::uint64_t seed = 0;
  std::string out;
  ApOptions ap;
};

struct Target {
  std::string lemma;
  std::optional<Pos> pos;
};

struct ErrorRow {
  std::string lemma;
  int layer;
  std::string message;
};

std::vector<Target> read_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open targets file " + path);
  std::vector<Target> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto body = text::chomp(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cols = text::split(body, '\t');
    Target t{std::string(cols[0]), std::nullopt};
    if (cols.size() > 1) {
      if (const auto p = parse_pos(cols[1])) t.pos = *p;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Target> resolve_targets(const LscArgs& args, const Corpus& corpus, const std::vector<GoldScore>& gold) {
  std::vector<Target> targets;
  if (!gold.empty()) {
    for (const auto& g : gold) targets.push_back({g.lemma, std::nullopt});
  } else if (!args.targets.empty()) {
    targets = read_targets(args.targets);
  } else {
    std::set<std::string> lemmas;
    for (const auto& inst : corpus.instances()) {
      if (!inst.is_replacement()) lemmas.insert(inst.lemma);
    }
    for (const auto& l : lemmas) targets.push_back({l, std::nullopt});
  }
  return targets;
}

// Usages of a lemma: instances whose target span holds the lemma itself.
struct Usages {
  std::vector<const UsageInstance*> t1;
  std::vector<const UsageInstance*> t2;
};

std::map<std::string, Usages> index_usages(const Corpus& corpus) {
  std::map<std::string, Usages> out;
  for (const auto& inst : corpus.instances()) {
    if (!inst.period || inst.word() != inst.lemma) continue;
    auto& u = out[inst.lemma];
    (*inst.period == Period::t1 ? u.t1 : u.t2).push_back(&inst);
  }
  return out;
}

std::vector<std::span<const float>> vectors(const std::vector<const UsageInstance*>& insts,
                                            const EmbeddingStore& store, int layer) {
  std::vector<std::span<const float>> out;
  out.reserve(insts.size());
  for (const auto* inst : insts) out.push_back(store.lookup(inst->uid, layer));
  return out;
}

std::string file_stem(const std::string& lemma) {
  std::string s;
  for (char c : lemma) {
    const auto u = static_cast<unsigned char>(c);
    s.push_back(std::isalnum(u) || c == '-' || c == '_' ? c : '_');
  }
  return s;
}

std::optional<Pos> first_pos(const Corpus& corpus, const std::string& lemma) {
  for (const auto& inst : corpus.instances()) {
    if (!inst.is_replacement() && inst.lemma == lemma) return inst.pos;
  }
  return std::nullopt;
}

// rho(w) from the corpus: replacement lemmas applied to originals of (w, pos),
// synthetic-token variants excluded. Restricted to the lexicon when given.
std::vector<std::string> corpus_replacements(const Corpus& corpus, const std::string& lemma, Pos pos,
                                             const ReplacementLexicon* lexicon) {
  std::set<std::string> words;
  const auto& insts = corpus.instances();
  for (auto i : corpus.by_lemma(lemma, pos)) {
    if (insts[i].is_replacement()) continue;
    for (auto d : corpus.derived_from(insts[i].uid)) {
      if (insts[d].replacement_class != ReplacementClass::synthetic) words.insert(insts[d].word());
    }
  }
  if (lexicon) {
    const auto allowed = lexicon->replacements_for(lemma, pos);
    std::set<std::string> keep;
    for (const auto& w : allowed) {
      if (words.contains(w)) keep.insert(w);
    }
    words = std::move(keep);
  }
  return {words.begin(), words.end()};
}

void run(const CLI::App& root, const LscArgs& args) {
  const auto method = parse_score_method(args.method);
  if (!method) throw ValidationError("unknown method '" + args.method + "'");
  const bool needs_store = *method != ScoreMethod::substitution;
  if (needs_store && (args.manifest.empty() || args.data.empty())) {
    throw ValidationError("--manifest and --data are required for method " + args.method);
  }
  if (*method == ScoreMethod::substitution && args.substitutes.empty()) {
    throw ValidationError("--substitutes is required for method substitution");
  }
  if (args.k_min < 1) throw ValidationError("--k-min must be >= 1");
  const auto ap_params = args.ap.params();
  const auto dir = prepare_out_dir(root, args.out);

  const auto corpus = load_corpora(to_paths(args.corpus));
  std::vector<GoldScore> gold;
  if (!args.gold.empty()) gold = load_gold(args.gold);
  const auto targets = resolve_targets(args, corpus, gold);

  std::optional<EmbeddingStore> store;
  std::vector<int> layers{0};
  if (needs_store) {
    store = read_store(args.manifest, args.data);
    const auto& m = store->manifest();
    if (args.all_layers) {
      layers.clear();
      for (int l = m.first_layer(); l <= m.last_layer(); ++l) layers.push_back(l);
    } else {
      const int l = args.layer < 0 ? m.last_layer() : args.layer;
      if (l < m.first_layer() || l > m.last_layer()) {
        throw ValidationError("--layer " + std::to_string(l) + " outside the store's layers");
      }
      layers = {l};
    }
  }

  const auto usages = index_usages(corpus);
  std::vector<ChangeScore> scores;
  std::vector<ErrorRow> errors;
  auto cluster_out = *method == ScoreMethod::jsd ? std::optional(open_output(dir / "clusters.tsv")) : std::nullopt;
  if (cluster_out) *cluster_out << "lemma\tlayer\tn_t1\tn_t2\tn_clusters\tn_iter\tconverged\n";

  std::map<std::string, std::set<std::string>> substitutes;
  if (*method == ScoreMethod::substitution) {
    for (auto& s : load_substitutes(args.substitutes)) substitutes[s.uid] = std::move(s.substitutes);
  }
  std::optional<ReplacementLexicon> lexicon;
  if (*method == ScoreMethod::replacement && !args.lexicon.empty()) lexicon = load_lexicon(args.lexicon);

  for (const int layer : layers) {
    std::vector<ReplacementProfile> profiles;
    for (const auto& target : targets) {
      try {
        const auto it = usages.find(target.lemma);
        const Usages empty;
        const auto& u = it == usages.end() ? empty : it->second;
        switch (*method) {
          case ScoreMethod::prt: {
            const auto v1 = vectors(u.t1, *store, layer);
            const auto v2 = vectors(u.t2, *store, layer);
            if (v1.empty() || v2.empty()) throw DataError("no usages in one period (n_t1=" + std::to_string(v1.size()) + ", n_t2=" + std::to_string(v2.size()) + ")");
            scores.push_back({target.lemma, *method, layer, std::nullopt, prt_score(v1, v2)});
            break;
          }
          case ScoreMethod::jsd: {
            const auto v1 = vectors(u.t1, *store, layer);
            const auto v2 = vectors(u.t2, *store, layer);
            if (v1.empty() || v2.empty()) throw DataError("no usages in one period (n_t1=" + std::to_string(v1.size()) + ", n_t2=" + std::to_string(v2.size()) + ")");
            const auto r = jsd_score(v1, v2, ap_params);
            *cluster_out << target.lemma << '\t' << layer << '\t' << v1.size() << '\t' << v2.size() << '\t'
                         << r.n_clusters << '\t' << r.n_iter << '\t' << (r.converged ? "true" : "false") << '\n';
            scores.push_back({target.lemma, *method, layer, std::nullopt, r.score});
            break;
          }
          case ScoreMethod::substitution: {
            std::vector<SubstituteSet> s1;
            std::vector<SubstituteSet> s2;
            for (auto [from, to] : {std::pair{&u.t1, &s1}, std::pair{&u.t2, &s2}}) {
              for (const auto* inst : *from) {
                const auto sit = substitutes.find(inst->uid);
                if (sit == substitutes.end()) throw DataError("no substitutes for uid '" + inst->uid + "'");
                to->push_back({inst->uid, sit->second});
              }
            }
            const double v = substitution_score(s1, s2, args.max_pairs, stream_seed(args.seed, target.lemma));
            scores.push_back({target.lemma, *method, layer, std::nullopt, v});
            break;
          }
          case ScoreMethod::replacement: {
            const auto pos = target.pos ? target.pos : first_pos(corpus, target.lemma);
            if (!pos) throw DataError("lemma not found in corpus");
            const auto reps = corpus_replacements(corpus, target.lemma, *pos, lexicon ? &*lexicon : nullptr);
            ProfileOptions options{layer, args.max_sentences, args.seed};
            profiles.push_back(replacement_profile(target.lemma, *pos, reps, corpus, *store, options));
            break;
          }
        }
      } catch (const DataError& e) {
        errors.push_back({target.lemma, layer, e.what()});
      }
    }

    if (*method == ScoreMethod::replacement && !profiles.empty()) {
      std::filesystem::create_directories(dir / "profiles");
      std::size_t m_min = profiles.front().stats.size();
      for (const auto& p : profiles) {
        m_min = std::min(m_min, p.stats.size());
        auto out = open_output(dir / "profiles" /
                               (file_stem(p.lemma) + "." + std::string(to_string(p.pos)) + ".L" +
                                std::to_string(layer) + ".tsv"));
        write_profile_tsv(p, out);
      }
      std::size_t k_max = args.k_max <= 0 ? m_min : static_cast<std::size_t>(args.k_max);
      if (k_max > m_min) {
        std::cerr << "warning: --k-max " << k_max << " exceeds the smallest replacement set (" << m_min
                  << "); clamped\n";
        k_max = m_min;
      }
      for (std::size_t k = static_cast<std::size_t>(args.k_min); k <= k_max; ++k) {
        for (const auto& p : profiles) {
          scores.push_back({p.lemma, *method, layer, static_cast<int>(k), lsc_replacement(p, k)});
        }
      }
    }
  }

  {
    auto out = open_output(dir / "scores.tsv");
    write_scores_tsv(scores, out);
  }
  if (*method == ScoreMethod::replacement && !scores.empty()) {
    // One column per k, one row per (layer, lemma).
    std::map<std::pair<int, std::string>, std::map<int, double>> wide;
    std::set<int> ks;
    for (const auto& s : scores) {
      wide[{s.layer, s.lemma}][*s.k] = s.score;
      ks.insert(*s.k);
    }
    auto out = open_output(dir / "scores_by_k.tsv");
    out << "lemma\tlayer";
    for (int k : ks) out << "\tk" << k;
    out << '\n';
    for (const auto& [key, row] : wide) {
      out << key.second << '\t' << key.first;
      for (int k : ks) out << '\t' << text::format_real(row.at(k));
      out << '\n';
    }
  }
  if (!errors.empty()) {
    auto out = open_output(dir / "errors.tsv");
    out << "lemma\tlayer\terror\n";
    for (const auto& e : errors) {
      out << e.lemma << '\t' << e.layer << '\t' << e.message << '\n';
      std::cerr << "error row: " << e.lemma << " (layer " << e.layer << "): " << e.message << '\n';
    }
  }
  std::cout << "scored: " << scores.size() << " rows, errors: " << errors.size() << '\n';

  if (!gold.empty()) {
    std::map<std::pair<int, int>, std::vector<ChangeScore>> groups;
    for (const auto& s : scores) groups[{s.layer, s.k.value_or(0)}].push_back(s);
    auto out = open_output(dir / "correlation.tsv");
    out << "method\tlayer\tk\tn\tspearman\n";
    for (const auto& [key, group] : groups) {
      std::string rho;
      try {
        rho = text::format_real(rank_and_correlate(group, gold));
      } catch (const DataError& e) {
        rho = "NA";
        std::cerr << "correlation at layer " << key.first << ": " << e.what() << '\n';
      }
      const auto k = key.second ? std::to_string(key.second) : std::string();
      out << args.method << '\t' << key.first << '\t' << k << '\t' << group.size() << '\t' << rho << '\n';
      std::cout << "spearman method=" << args.method << " layer=" << key.first << (k.empty() ? "" : " k=" + k)
                << " n=" << group.size() << ": " << rho << '\n';
    }
  }
  if (scores.empty() && !targets.empty()) throw DataError("no target could be scored");
}

}  // namespace

void register_lsc(CLI::App& root) {
  auto args = std::make_shared<LscArgs>();
  auto* cmd = root.add_subcommand("lsc", "Graded lexical semantic change scores per target");
  cmd->add_option("--method", args->method, "prt | jsd | replacement | substitution")
      ->required()
      ->check(CLI::IsMember({"prt", "jsd", "replacement", "substitution"}));
  cmd->add_option("--corpus", args->corpus, "Corpus JSONL file(s) with T1/T2 usages")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--manifest", args->manifest, "Embedding manifest JSON")->check(CLI::ExistingFile);
  cmd->add_option("--data", args->data, "Embedding data file (.bin or .jsonl)")->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", args->lexicon, "Restrict replacement sets to this lexicon")->check(CLI::ExistingFile);
  cmd->add_option("--substitutes", args->substitutes, "Substitutes JSONL (method substitution)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--gold", args->gold, "Gold TSV (lemma, score); also fixes the target set")
      ->check(CLI::ExistingFile);
  cmd->add_option("--targets", args->targets, "Target list (lemma[, pos] per line)")->check(CLI::ExistingFile);
  cmd->add_option("--layer", args->layer, "Layer to score (-1: last)");
  cmd->add_flag("--all-layers", args->all_layers, "Score every layer in the store");
  cmd->add_option("--k-min", args->k_min, "Smallest k for method replacement")->capture_default_str();
  cmd->add_option("--k-max", args->k_max, "Largest k for method replacement (0: smallest M)")->capture_default_str();
  cmd->add_option("--max-sentences", args->max_sentences, "Sentences sampled per period (method replacement)")
      ->capture_default_str();
  cmd->add_option("--max-pairs", args->max_pairs, "Usage pairs sampled per target (method substitution; 0: all)")
      ->capture_default_str();
  args->ap.add_to(*cmd);
  cmd->add_option("--seed", args->seed, "Random seed")->required();
  cmd->add_option("--out", args->out, "Output directory")->required();
  cmd->callback([&root, args] { run(root, *args); });
}

}  // namespace lexshift::cli
