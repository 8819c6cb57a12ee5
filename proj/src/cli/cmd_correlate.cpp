#include <iostream>
#include <map>
#include <memory>

#include "common.hpp"
#include "lexshift/error.hpp"
#include "lexshift/lscscore.hpp"
#include "lexshift/text.hpp"

namespace lexshift::cli {

namespace {

struct CorrelateArgs {
  std::string scores;
  std::string gold;
  std::string method;
  std::optional<int> layer;
  std::optional<int> k;
};

void run(const CorrelateArgs& args) {
  std::optional<ScoreMethod> method;
  if (!args.method.empty()) method = parse_score_method(args.method);
  const auto scores = read_scores_tsv(args.scores);
  const auto gold = load_gold(args.gold);

  std::map<std::tuple<ScoreMethod, int, int>, std::vector<ChangeScore>> groups;
  for (const auto& s : scores) {
    if (method && s.method != *method) continue;
    if (args.layer && s.layer != *args.layer) continue;
    if (args.k && s.k != args.k) continue;
    groups[{s.method, s.layer, s.k.value_or(0)}].push_back(s);
  }
  if (groups.empty()) throw DataError("no score rows match the filters");
  std::cout << "method\tlayer\tk\tn\tspearman\n";
  for (const auto& [key, group] : groups) {
    const auto& [m, layer, k] = key;
    std::cout << to_string(m) << '\t' << layer << '\t' << (k ? std::to_string(k) : "") << '\t' << group.size()
              << '\t' << text::format_real(rank_and_correlate(group, gold)) << '\n';
  }
}

}  // namespace

void register_correlate(CLI::App& root) {
  auto args = std::make_shared<CorrelateArgs>();
  auto* cmd = root.add_subcommand("correlate", "Spearman correlation of scores against gold ranks");
  cmd->add_option("--scores", args->scores, "Scores TSV written by lsc")->required()->check(CLI::ExistingFile);
  cmd->add_option("--gold", args->gold, "Gold TSV (lemma, score)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--method", args->method, "Only rows of this method")
      ->check(CLI::IsMember({"prt", "jsd", "replacement", "substitution"}));
  cmd->add_option("--layer", args->layer, "Only rows of this layer");
  cmd->add_option("--k", args->k, "Only rows with this k");
  cmd->callback([args] { run(*args); });
}

}  // namespace lexshift::cli
