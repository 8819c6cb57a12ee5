#pragma once

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lexshift/corpus.hpp"
#include "lexshift/senseclust.hpp"

namespace lexshift::cli {

void register_replace(CLI::App& root);
void register_synth(CLI::App& root);
void register_sed(CLI::App& root);
void register_lsc(CLI::App& root);
void register_wic(CLI::App& root);
void register_correlate(CLI::App& root);

// Creates the directory if needed and records the resolved configuration
// (config file values merged with command-line overrides) inside it.
std::filesystem::path prepare_out_dir(const CLI::App& root, const std::string& dir);

std::ofstream open_output(const std::filesystem::path& path);

std::vector<std::filesystem::path> to_paths(const std::vector<std::string>& names);

// Option group for Affinity Propagation hyperparameters.
struct ApOptions {
  double damping = 0.5;
  int max_iter = 200;
  int convergence_iter = 15;
  std::string preference = "median";
  std::string similarity = "negative_squared_euclidean";

  void add_to(CLI::App& app);
  ApParams params() const;
};

Pos require_pos(const std::string& name);
ReplacementClass require_class(const std::string& name);

}  // namespace lexshift::cli
