#include <iostream>
#include <memory>

#include "common.hpp"
#include "lexshift/error.hpp"
#include "lexshift/lexicon.hpp"
#include "lexshift/replacer.hpp"

namespace lexshift::cli {

namespace {

struct ReplaceArgs {
  std::vector<std::string> corpus;
  std::string lexicon;
  std::vector<std::string> classes{"synonym", "antonym", "hypernym"};
  std::string mode = "per-class";
  std::size_t random_count = 1;
  std::string synthetic_token = "[SYNT]";
  std::size_t max_per_synset = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void run(const CLI::App& root, const ReplaceArgs& args) {
  ReplaceOptions options;
  for (const auto& c : args.classes) options.classes.push_back(require_class(c));
  options.mode = args.mode == "all" ? ReplaceMode::all : ReplaceMode::per_class;
  options.random_count = args.random_count;
  options.synthetic_token = args.synthetic_token;
  options.seed = args.seed;
  const auto dir = prepare_out_dir(root, args.out);

  auto corpus = load_corpora(to_paths(args.corpus));
  const auto lexicon = load_lexicon(args.lexicon);
  if (args.max_per_synset > 0) corpus = sample_per_synset(corpus, args.max_per_synset, args.seed);

  const auto result = apply_replacements(corpus, lexicon, options);
  write_corpus(result.corpus, dir / "replaced.jsonl");
  {
    auto out = open_output(dir / "summary.tsv");
    write_summary(result.summary, out);
  }
  std::cout << "originals: " << result.summary.originals << '\n'
            << "replaced instances: " << result.summary.total_emitted() << '\n'
            << "skipped (no replacement available): " << result.summary.total_skipped() << '\n';
  write_summary(result.summary, std::cout);
}

}  // namespace

void register_replace(CLI::App& root) {
  auto args = std::make_shared<ReplaceArgs>();
  auto* cmd = root.add_subcommand("replace", "Generate replaced usage instances from a corpus and a lexicon");
  cmd->add_option("--corpus", args->corpus, "Corpus JSONL file(s)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", args->lexicon, "Replacement lexicon TSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--classes", args->classes, "Replacement classes to generate")
      ->delimiter(',')
      ->check(CLI::IsMember({"synonym", "antonym", "hypernym", "random", "synthetic"}))
      ->capture_default_str();
  cmd->add_option("--mode", args->mode, "per-class: one variant per class; all: one per replacement lemma")
      ->check(CLI::IsMember({"per-class", "all"}))
      ->capture_default_str();
  cmd->add_option("--random-count", args->random_count, "Random lemmas per target in --mode all")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--synthetic-token", args->synthetic_token, "Token inserted for the synthetic class")
      ->capture_default_str();
  cmd->add_option("--max-per-synset", args->max_per_synset, "Sample at most N sentences per synset first (0: off)")
      ->capture_default_str();
  cmd->add_option("--seed", args->seed, "Random seed")->required();
  cmd->add_option("--out", args->out, "Output directory")->required();
  cmd->callback([&root, args] { run(root, *args); });
}

}  // namespace lexshift::cli
