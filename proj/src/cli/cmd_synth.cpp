#include <algorithm>
#include <iostream>
#include <memory>

#include "common.hpp"
#include "lexshift/error.hpp"
#include "lexshift/random.hpp"
#include "lexshift/replacer.hpp"
#include "lexshift/text.hpp"

namespace lexshift::cli {

namespace {

struct SynthArgs {
  std::vector<std::string> pool;
  std::string rates;
  double max_rate = -1.0;
  std::uint64_t seed = 0;
  std::string out;
};

std::vector<InjectionSpec> read_rates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rates file " + path);
  std::vector<InjectionSpec> specs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cols = text::split(body, '\t');
    const auto where = " at line " + std::to_string(line_no) + " of " + path;
    if (cols.size() != 3) throw DataError("malformed rates row (expected lemma, pos, rate)" + where);
    const auto pos = parse_pos(cols[1]);
    if (!pos) throw DataError("unknown pos '" + std::string(cols[1]) + "'" + where);
    try {
      specs.push_back({std::string(cols[0]), *pos, std::stod(std::string(cols[2]))});
    } catch (const std::exception&) {
      throw DataError("non-numeric rate" + where);
    }
  }
  return specs;
}

// Rates evenly spaced in [0, max_rate], assigned to the pool's targets in a
// seeded random order.
std::vector<InjectionSpec> even_rates(const Corpus& pool, double max_rate, std::uint64_t seed) {
  std::vector<std::pair<std::string, Pos>> keys;
  for (const auto& key : pool.lemma_keys()) {
    for (auto i : pool.by_lemma(key.first, key.second)) {
      const auto& inst = pool.instances()[i];
      if (!inst.is_replacement() && inst.period == Period::t2) {
        keys.push_back(key);
        break;
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  Rng rng(stream_seed(seed, "rates"));
  rng.shuffle(keys);
  std::vector<InjectionSpec> specs;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const double rate =
        keys.size() == 1 ? 0.0 : max_rate * static_cast<double>(i) / static_cast<double>(keys.size() - 1);
    specs.push_back({keys[i].first, keys[i].second, rate});
  }
  return specs;
}

void run(const CLI::App& root, const SynthArgs& args) {
  if (args.rates.empty() == (args.max_rate < 0.0)) {
    throw ValidationError("synth needs exactly one of --rates or --max-rate");
  }
  if (args.max_rate > 1.0) throw ValidationError("--max-rate must be in [0, 1]");
  const auto dir = prepare_out_dir(root, args.out);
  const auto pool = load_corpora(to_paths(args.pool));
  const auto specs = args.rates.empty() ? even_rates(pool, args.max_rate, args.seed) : read_rates(args.rates);

  const auto result = inject_graded_change(pool, specs, args.seed);
  write_corpus(result.c1, dir / "c1.jsonl");
  write_corpus(result.c2, dir / "c2.jsonl");
  write_gold(result.gold, dir / "gold.tsv");
  auto out = open_output(dir / "injection.tsv");
  out << "lemma\tpos\trate\tinjected\tgenuine_c2\tgold_change\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& g = result.gold[i];
    out << g.lemma << '\t' << to_string(g.pos) << '\t' << text::format_real(specs[i].rate) << '\t' << g.injected
        << '\t' << g.genuine_c2 << '\t' << text::format_real(g.gold_change) << '\n';
  }
  std::cout << "targets: " << specs.size() << '\n'
            << "C1 instances: " << result.c1.size() << '\n'
            << "C2 instances: " << result.c2.size() << '\n';
}

}  // namespace

void register_synth(CLI::App& root) {
  auto args = std::make_shared<SynthArgs>();
  auto* cmd = root.add_subcommand("synth", "Build an artificial two-period corpus with graded injected change");
  cmd->add_option("--pool", args->pool, "Corpus JSONL file(s); T2 originals form the pool")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--rates", args->rates, "TSV of lemma, pos, rate")->check(CLI::ExistingFile);
  cmd->add_option("--max-rate", args->max_rate, "Assign rates evenly spaced in [0, max-rate] to all pool targets");
  cmd->add_option("--seed", args->seed, "Random seed")->required();
  cmd->add_option("--out", args->out, "Output directory")->required();
  cmd->callback([&root, args] { run(root, *args); });
}

}  // namespace lexshift::cli
