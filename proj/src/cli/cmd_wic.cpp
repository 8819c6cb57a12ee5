#include <iostream>
#include <map>
#include <memory>
#include <set>

#include "common.hpp"
#include "lexshift/embedstore.hpp"
#include "lexshift/error.hpp"
#include "lexshift/text.hpp"
#include "lexshift/wic.hpp"

namespace lexshift::cli {

namespace {

struct WicArgs {
  std::string pairs;
  std::string manifest;
  std::string data;
  std::string benchmark;
  std::vector<int> layers;
  std::string pos;
  std::uint64_t seed = 0;
  std::string out;
};

struct ConvertArgs {
  std::string judgments;
  std::string split = "test";
  std::string out;
};

void run(const CLI::App& root, const WicArgs& args) {
  for (const auto* name : {"--pairs", "--manifest", "--data", "--seed", "--out"}) {
    if (root.get_subcommand("wic")->count(name) == 0) throw ValidationError(std::string(name) + " is required");
  }
  std::optional<Pos> pos_filter;
  if (!args.pos.empty()) pos_filter = require_pos(args.pos);
  const auto dir = prepare_out_dir(root, args.out);

  auto pairs = load_wic_pairs(args.pairs);
  const auto store = read_store(args.manifest, args.data);
  const auto& m = store.manifest();
  std::vector<int> layers = args.layers;
  if (layers.empty()) {
    for (int l = m.first_layer(); l <= m.last_layer(); ++l) layers.push_back(l);
  }
  for (int l : layers) {
    if (l < m.first_layer() || l > m.last_layer()) {
      throw ValidationError("layer " + std::to_string(l) + " outside the store's layers");
    }
  }
  const auto benchmark =
      args.benchmark.empty() ? std::filesystem::path(args.pairs).stem().string() : args.benchmark;

  std::set<Pos> pos_set;
  std::set<Split> eval_splits;
  for (const auto& p : pairs) {
    if (pos_filter && p.pos != *pos_filter) continue;
    pos_set.insert(p.pos);
    if (p.split != Split::dev) eval_splits.insert(p.split);
  }
  if (pos_set.empty()) throw DataError("no pairs left after the PoS filter");

  auto out = open_output(dir / "wic_results.csv");
  out << "benchmark,pos,layer,split,f1,macro_f1,threshold\n";
  std::size_t rows = 0;
  for (const Pos pos : pos_set) {
    for (const int layer : layers) {
      fill_similarities(pairs, store, layer);
      std::vector<WicPair> dev;
      std::map<Split, std::vector<WicPair>> evals;
      for (const auto& p : pairs) {
        if (p.pos != pos) continue;
        (p.split == Split::dev ? dev : evals[p.split]).push_back(p);
      }
      const auto classifier = tune_threshold(dev, layer, pos);
      for (const Split split : eval_splits) {
        const auto it = evals.find(split);
        if (it == evals.end()) continue;
        const auto f1 = evaluate(it->second, classifier);
        out << benchmark << ',' << to_string(pos) << ',' << layer << ',' << to_string(split) << ','
            << text::format_real(f1.positive) << ',' << text::format_real(f1.macro) << ','
            << text::format_real(classifier.threshold) << '\n';
        ++rows;
      }
    }
  }
  std::cout << "result rows: " << rows << '\n';
}

void run_convert(const CLI::App& root, const ConvertArgs& args) {
  const auto split = parse_split(args.split);
  if (!split) throw ValidationError("unknown split '" + args.split + "'");
  const auto judgments = load_dwug_judgments(args.judgments);
  const auto conversion = convert_dwug(judgments, *split);
  const std::filesystem::path out_path(args.out);
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + args.out);
    write_wic_pairs(conversion.pairs, out);
  }
  std::ofstream cfg(out_path.string() + ".resolved_config.toml", std::ios::binary);
  cfg << root.config_to_str(true, false);
  std::cout << "pairs: " << conversion.pairs.size() << "\ndropped: " << conversion.dropped << '\n';
}

}  // namespace

void register_wic(CLI::App& root) {
  auto args = std::make_shared<WicArgs>();
  auto* cmd = root.add_subcommand("wic", "Tune and evaluate WiC threshold classifiers per PoS and layer");
  cmd->add_option("--pairs", args->pairs, "WiC pairs JSONL (dev split used for tuning)")->check(CLI::ExistingFile);
  cmd->add_option("--manifest", args->manifest, "Embedding manifest JSON")->check(CLI::ExistingFile);
  cmd->add_option("--data", args->data, "Embedding data file (.bin or .jsonl)")->check(CLI::ExistingFile);
  cmd->add_option("--benchmark", args->benchmark, "Benchmark name in the results (default: pairs file stem)");
  cmd->add_option("--layers", args->layers, "Layers to sweep (default: all)")->delimiter(',');
  cmd->add_option("--pos", args->pos, "Restrict to one PoS")
      ->check(CLI::IsMember({"noun", "verb", "adjective", "adverb"}));
  cmd->add_option("--seed", args->seed, "Random seed (recorded for provenance)");
  cmd->add_option("--out", args->out, "Output directory");

  auto conv = std::make_shared<ConvertArgs>();
  auto* sub = cmd->add_subcommand("dwug-convert", "Binarize DWUG judgments into WiC pairs");
  sub->add_option("--judgments", conv->judgments, "Judgment TSV (uid1, uid2, lemma, pos, mean_rating)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--split", conv->split, "Split assigned to the pairs")
      ->check(CLI::IsMember({"dev", "train", "test"}))
      ->capture_default_str();
  sub->add_option("--out", conv->out, "Output JSONL path")->required();
  sub->callback([&root, conv] { run_convert(root, *conv); });

  cmd->callback([&root, cmd, args] {
    if (cmd->get_subcommands().empty()) run(root, *args);
  });
}

}  // namespace lexshift::cli
