#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lexshift {

enum class Pos { noun, verb, adjective, adverb };
enum class Period { t1, t2 };
enum class ReplacementClass { synonym, antonym, hypernym, random, synthetic };

std::string_view to_string(Pos p);
std::string_view to_string(Period p);
std::string_view to_string(ReplacementClass c);
std::optional<Pos> parse_pos(std::string_view s);
std::optional<Period> parse_period(std::string_view s);
std::optional<ReplacementClass> parse_replacement_class(std::string_view s);

// Hypernyms only exist for nouns and verbs in the source lexical databases.
constexpr bool hypernym_allowed(Pos p) { return p == Pos::noun || p == Pos::verb; }

// Half-open span [start, end) in Unicode code points.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct UsageInstance {
  std::string uid;
  std::string lemma;
  Pos pos = Pos::noun;
  std::string text;
  Span target_span;
  std::optional<Period> period;
  std::optional<std::string> sense_id;
  std::optional<std::string> origin_uid;
  std::optional<ReplacementClass> replacement_class;
  std::optional<std::string> replacement_lemma;

  bool is_replacement() const { return origin_uid.has_value(); }

  // The word occupying the target span: the replacement if any, else the lemma.
  const std::string& word() const { return replacement_lemma ? *replacement_lemma : lemma; }

  friend bool operator==(const UsageInstance&, const UsageInstance&) = default;
};

// Byte range of the target span inside `inst.text`. Throws DataError when the
// span is not a valid non-empty code point range.
std::pair<std::size_t, std::size_t> byte_span(const UsageInstance& inst);

// Surrounding text with the target span removed.
std::string context_without_target(const UsageInstance& inst);

// Validated, immutable collection of usage instances in file order.
class Corpus {
 public:
  Corpus() = default;

  // Validates every invariant; throws DataError naming the offending uid.
  static Corpus from_instances(std::vector<UsageInstance> instances);

  const std::vector<UsageInstance>& instances() const { return instances_; }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }

  const UsageInstance* find(std::string_view uid) const;
  const UsageInstance& at(std::string_view uid) const;

  // Instance positions for a (lemma, pos) key, in corpus order.
  std::span<const std::size_t> by_lemma(std::string_view lemma, Pos pos) const;
  std::span<const std::size_t> by_period(Period p) const;
  // Positions of instances whose origin_uid is `uid`, in corpus order.
  std::span<const std::size_t> derived_from(std::string_view uid) const;
  // Distinct (lemma, pos) keys in order of first appearance.
  const std::vector<std::pair<std::string, Pos>>& lemma_keys() const { return lemma_keys_; }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.instances_ == b.instances_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  void build_indexes();

  std::vector<UsageInstance> instances_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> uid_index_;
  std::unordered_map<std::string, std::vector<std::size_t>, StringHash, std::equal_to<>> lemma_index_;
  std::vector<std::pair<std::string, Pos>> lemma_keys_;
  std::vector<std::size_t> period_index_[2];
  std::unordered_map<std::string, std::vector<std::size_t>, StringHash, std::equal_to<>> derived_index_;
};

Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);
// Loads several files and validates the union as one corpus.
Corpus load_corpora(std::span<const std::filesystem::path> paths);

void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct InstancePair {
  std::reference_wrapper<const UsageInstance> original;
  std::reference_wrapper<const UsageInstance> replaced;
};

// One pair per replaced instance, sorted by replaced uid.
std::vector<InstancePair> pair_with_origin(const Corpus& corpus);

}  // namespace lexshift
