#include <iostream>
#include <memory>

#include "common.hpp"
#include "lexshift/embedstore.hpp"
#include "lexshift/error.hpp"
#include "lexshift/metrics.hpp"

namespace lexshift::cli {

namespace {

struct SedArgs {
  std::vector<std::string> corpus;
  std::string manifest;
  std::string data;
  std::string baseline = "synthetic";
  std::string scope = "layer-pos";
  std::uint64_t seed = 0;
  std::string out;
};

void run(const CLI::App& root, const SedArgs& args) {
  // "random-set" names the dedicated random-replacement normalization set.
  const auto baseline = require_class(args.baseline == "random-set" ? "random" : args.baseline);
  const auto scope = args.scope == "layer" ? BaselineScope::layer : BaselineScope::layer_pos;
  const auto dir = prepare_out_dir(root, args.out);

  const auto corpus = load_corpora(to_paths(args.corpus));
  const auto store = read_store(args.manifest, args.data);
  const auto pairs = pair_with_origin(corpus);
  const auto records = compute_sed(pairs, store);
  const auto table = aggregate_and_normalize(records, baseline, scope);
  {
    auto out = open_output(dir / "sed.csv");
    write_sed_csv(table, out);
  }
  auto out = open_output(dir / "sed_records.csv");
  write_sed_records_csv(records, out);
  std::cout << "pairs: " << pairs.size() << "\nrecords: " << records.size() << "\ncells: " << table.cells.size()
            << '\n';
}

}  // namespace

void register_sed(CLI::App& root) {
  auto args = std::make_shared<SedArgs>();
  auto* cmd = root.add_subcommand("sed", "Self-embedding distance per layer, class and PoS");
  cmd->add_option("--corpus", args->corpus, "Corpus JSONL file(s) with originals and replacements")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--manifest", args->manifest, "Embedding manifest JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--data", args->data, "Embedding data file (.bin or .jsonl)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--baseline", args->baseline, "Normalization baseline class")
      ->check(CLI::IsMember({"synthetic", "random", "random-set", "synonym", "antonym", "hypernym"}))
      ->capture_default_str();
  cmd->add_option("--baseline-scope", args->scope, "Baseline per layer, or per (layer, pos)")
      ->check(CLI::IsMember({"layer", "layer-pos"}))
      ->capture_default_str();
  cmd->add_option("--seed", args->seed, "Random seed (recorded for provenance)")->required();
  cmd->add_option("--out", args->out, "Output directory")->required();
  cmd->callback([&root, args] { run(root, *args); });
}

}  // namespace lexshift::cli
