#include "common.hpp"

#include "lexshift/error.hpp"

namespace lexshift::cli {

std::filesystem::path prepare_out_dir(const CLI::App& root, const std::string& dir) {
  const std::filesystem::path path(dir);
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec || !std::filesystem::is_directory(path)) throw ValidationError("cannot create output directory " + dir);
  auto out = open_output(path / "resolved_config.toml");
  out << root.config_to_str(true, false);
  return path;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::vector<std::filesystem::path> to_paths(const std::vector<std::string>& names) {
  return {names.begin(), names.end()};
}

void ApOptions::add_to(CLI::App& app) {
  app.add_option("--damping", damping, "Affinity Propagation damping in [0.5, 1)")->capture_default_str();
  app.add_option("--max-iter", max_iter, "Affinity Propagation iteration cap")->capture_default_str();
  app.add_option("--convergence-iter", convergence_iter, "Stable iterations required for convergence")
      ->capture_default_str();
  app.add_option("--preference", preference, "'median' or a fixed real preference")->capture_default_str();
  app.add_option("--similarity", similarity, "negative_squared_euclidean | cosine")
      ->check(CLI::IsMember({"negative_squared_euclidean", "cosine"}))
      ->capture_default_str();
}

ApParams ApOptions::params() const {
  ApParams p;
  p.damping = damping;
  p.max_iter = max_iter;
  p.convergence_iter = convergence_iter;
  if (preference != "median") {
    try {
      std::size_t used = 0;
      const double v = std::stod(preference, &used);
      if (used != preference.size()) throw std::invalid_argument("trailing");
      p.preference = FixedPreference{v};
    } catch (const std::exception&) {
      throw ValidationError("--preference must be 'median' or a number, got '" + preference + "'");
    }
  }
  p.similarity = similarity == "cosine" ? Similarity::cosine : Similarity::negative_squared_euclidean;
  p.validate();
  return p;
}

Pos require_pos(const std::string& name) {
  const auto p = parse_pos(name);
  if (!p) throw ValidationError("unknown pos '" + name + "'");
  return *p;
}

ReplacementClass require_class(const std::string& name) {
  const auto c = parse_replacement_class(name);
  if (!c) throw ValidationError("unknown replacement class '" + name + "'");
  return *c;
}

}  // namespace lexshift::cli
