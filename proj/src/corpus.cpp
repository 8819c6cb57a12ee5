#include "lexshift/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "lexshift/error.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

namespace {

constexpr std::array<std::string_view, 4> kPosNames{"noun", "verb", "adjective", "adverb"};
constexpr std::array<std::string_view, 2> kPeriodNames{"T1", "T2"};
constexpr std::array<std::string_view, 5> kClassNames{"synonym", "antonym", "hypernym", "random", "synthetic"};

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

std::string lemma_key(std::string_view lemma, Pos pos) {
  std::string key(lemma);
  key += '\t';
  key += to_string(pos);
  return key;
}

// Checks that need only the record itself.
void validate_record(const UsageInstance& inst) {
  if (inst.uid.empty()) throw DataError("empty uid");
  if (inst.lemma.empty()) throw DataError("empty lemma for uid '" + inst.uid + "'");
  const auto n = text::code_point_count(inst.text);
  if (!n) throw DataError("text is not valid UTF-8 for uid '" + inst.uid + "'");
  if (inst.target_span.start >= inst.target_span.end || inst.target_span.end > *n) {
    throw DataError("span out of bounds for uid '" + inst.uid + "'");
  }
  const bool o = inst.origin_uid.has_value();
  const bool c = inst.replacement_class.has_value();
  const bool r = inst.replacement_lemma.has_value();
  if (o != c || c != r) {
    throw DataError("origin_uid, replacement_class and replacement_lemma must be set together (uid '" + inst.uid +
                    "')");
  }
  if (c && *inst.replacement_class == ReplacementClass::hypernym && !hypernym_allowed(inst.pos)) {
    throw DataError("hypernym replacement on " + std::string(to_string(inst.pos)) + " (uid '" + inst.uid + "')");
  }
  if (o && *inst.origin_uid == inst.uid) throw DataError("uid '" + inst.uid + "' is its own origin");
}

}  // namespace

std::string_view to_string(Pos p) { return kPosNames[static_cast<std::size_t>(p)]; }
std::string_view to_string(Period p) { return kPeriodNames[static_cast<std::size_t>(p)]; }
std::string_view to_string(ReplacementClass c) { return kClassNames[static_cast<std::size_t>(c)]; }
std::optional<Pos> parse_pos(std::string_view s) { return parse_enum<Pos>(s, kPosNames); }
std::optional<Period> parse_period(std::string_view s) { return parse_enum<Period>(s, kPeriodNames); }
std::optional<ReplacementClass> parse_replacement_class(std::string_view s) {
  return parse_enum<ReplacementClass>(s, kClassNames);
}

std::pair<std::size_t, std::size_t> byte_span(const UsageInstance& inst) {
  const auto b = text::byte_offset(inst.text, inst.target_span.start);
  const auto e = text::byte_offset(inst.text, inst.target_span.end);
  if (!b || !e || *b >= *e) throw DataError("span out of bounds for uid '" + inst.uid + "'");
  return {*b, *e};
}

std::string context_without_target(const UsageInstance& inst) {
  const auto [b, e] = byte_span(inst);
  std::string out = inst.text.substr(0, b);
  out += std::string_view(inst.text).substr(e);
  return out;
}

Corpus Corpus::from_instances(std::vector<UsageInstance> instances) {
  Corpus c;
  c.instances_ = std::move(instances);
  for (const auto& inst : c.instances_) validate_record(inst);
  c.build_indexes();
  for (const auto& inst : c.instances_) {
    if (!inst.origin_uid) continue;
    const auto* origin = c.find(*inst.origin_uid);
    if (!origin) {
      throw DataError("dangling origin_uid '" + *inst.origin_uid + "' referenced by '" + inst.uid + "'");
    }
    if (context_without_target(inst) != context_without_target(*origin)) {
      throw DataError("context of '" + inst.uid + "' differs from its origin '" + origin->uid + "'");
    }
  }
  return c;
}

void Corpus::build_indexes() {
  uid_index_.reserve(instances_.size());
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const auto& inst = instances_[i];
    if (!uid_index_.emplace(inst.uid, i).second) throw DataError("duplicate uid '" + inst.uid + "'");
    auto [it, inserted] = lemma_index_.try_emplace(lemma_key(inst.lemma, inst.pos));
    if (inserted) lemma_keys_.emplace_back(inst.lemma, inst.pos);
    it->second.push_back(i);
    if (inst.period) period_index_[static_cast<std::size_t>(*inst.period)].push_back(i);
    if (inst.origin_uid) derived_index_[*inst.origin_uid].push_back(i);
  }
}

const UsageInstance* Corpus::find(std::string_view uid) const {
  const auto it = uid_index_.find(uid);
  return it == uid_index_.end() ? nullptr : &instances_[it->second];
}

const UsageInstance& Corpus::at(std::string_view uid) const {
  const auto* inst = find(uid);
  if (!inst) throw DataError("unknown uid '" + std::string(uid) + "'");
  return *inst;
}

std::span<const std::size_t> Corpus::by_lemma(std::string_view lemma, Pos pos) const {
  const auto it = lemma_index_.find(lemma_key(lemma, pos));
  if (it == lemma_index_.end()) return {};
  return it->second;
}

std::span<const std::size_t> Corpus::by_period(Period p) const {
  return period_index_[static_cast<std::size_t>(p)];
}

std::span<const std::size_t> Corpus::derived_from(std::string_view uid) const {
  const auto it = derived_index_.find(uid);
  if (it == derived_index_.end()) return {};
  return it->second;
}

namespace {

using nlohmann::json;

std::string require_string(const json& rec, const char* key) {
  const auto it = rec.find(key);
  if (it == rec.end()) throw DataError(std::string("missing key '") + key + "'");
  if (!it->is_string()) throw DataError(std::string("key '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& rec, const char* key) {
  const auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DataError(std::string("key '") + key + "' must be a string");
  return it->get<std::string>();
}

UsageInstance parse_record(std::string_view line) {
  static constexpr std::array<std::string_view, 10> kKeys{"uid",       "lemma",      "pos",
                                                           "text",      "target_span", "period",
                                                           "sense_id",  "origin_uid", "replacement_class",
                                                           "replacement_lemma"};
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!rec.is_object()) throw DataError("record is not a JSON object");
  for (const auto& [key, _] : rec.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw DataError("unknown key '" + key + "'");
  }

  UsageInstance inst;
  inst.uid = require_string(rec, "uid");
  inst.lemma = require_string(rec, "lemma");
  const auto pos = require_string(rec, "pos");
  const auto p = parse_pos(pos);
  if (!p) throw DataError("unknown pos '" + pos + "'");
  inst.pos = *p;
  inst.text = require_string(rec, "text");

  const auto span = rec.find("target_span");
  if (span == rec.end()) throw DataError("missing key 'target_span'");
  if (!span->is_array() || span->size() != 2 || !(*span)[0].is_number_integer() ||
      !(*span)[1].is_number_integer()) {
    throw DataError("target_span must be a two-element integer array");
  }
  const auto start = (*span)[0].get<long long>();
  const auto end = (*span)[1].get<long long>();
  if (start < 0 || end < 0) throw DataError("span out of bounds");
  inst.target_span = {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};

  if (auto period = optional_string(rec, "period")) {
    const auto v = parse_period(*period);
    if (!v) throw DataError("unknown period '" + *period + "'");
    inst.period = *v;
  }
  inst.sense_id = optional_string(rec, "sense_id");
  inst.origin_uid = optional_string(rec, "origin_uid");
  if (auto cls = optional_string(rec, "replacement_class")) {
    const auto v = parse_replacement_class(*cls);
    if (!v) throw DataError("unknown replacement_class '" + *cls + "'");
    inst.replacement_class = *v;
  }
  inst.replacement_lemma = optional_string(rec, "replacement_lemma");

  validate_record(inst);
  return inst;
}

void read_records(std::istream& in, std::vector<UsageInstance>& out, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      out.push_back(parse_record(body));
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " at line " + std::to_string(line_no) + source);
    }
  }
}

}  // namespace

Corpus parse_corpus(std::istream& in) {
  std::vector<UsageInstance> instances;
  read_records(in, instances, "");
  return Corpus::from_instances(std::move(instances));
}

Corpus load_corpus(const std::filesystem::path& path) {
  const std::filesystem::path paths[] = {path};
  return load_corpora(paths);
}

Corpus load_corpora(std::span<const std::filesystem::path> paths) {
  std::vector<UsageInstance> instances;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file " + path.string());
    read_records(in, instances, " of " + path.string());
  }
  return Corpus::from_instances(std::move(instances));
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& inst : corpus.instances()) {
    nlohmann::ordered_json rec;
    rec["uid"] = inst.uid;
    rec["lemma"] = inst.lemma;
    rec["pos"] = to_string(inst.pos);
    rec["text"] = inst.text;
    rec["target_span"] = {inst.target_span.start, inst.target_span.end};
    if (inst.period) rec["period"] = to_string(*inst.period);
    if (inst.sense_id) rec["sense_id"] = *inst.sense_id;
    if (inst.origin_uid) rec["origin_uid"] = *inst.origin_uid;
    if (inst.replacement_class) rec["replacement_class"] = to_string(*inst.replacement_class);
    if (inst.replacement_lemma) rec["replacement_lemma"] = *inst.replacement_lemma;
    out << rec.dump() << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file " + path.string());
  write_corpus(corpus, out);
}

std::vector<InstancePair> pair_with_origin(const Corpus& corpus) {
  std::vector<InstancePair> pairs;
  for (const auto& inst : corpus.instances()) {
    if (inst.origin_uid) pairs.push_back({std::cref(corpus.at(*inst.origin_uid)), std::cref(inst)});
  }
  std::sort(pairs.begin(), pairs.end(), [](const InstancePair& a, const InstancePair& b) {
    return a.replaced.get().uid < b.replaced.get().uid;
  });
  return pairs;
}

}  // namespace lexshift
