#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexshift {

struct EmbeddingManifest {
  std::string model_id;
  int num_layers = 0;
  int dim = 0;
  std::size_t count = 0;  // number of records
  bool layer_zero_included = false;

  int first_layer() const { return layer_zero_included ? 0 : 1; }
  int last_layer() const { return num_layers; }
  int layers_per_uid() const { return last_layer() - first_layer() + 1; }

  friend bool operator==(const EmbeddingManifest&, const EmbeddingManifest&) = default;
};

// Pooled target-word vectors, one per (uid, layer). Records keep their
// insertion order so a store can be written back byte-identically.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  // Throws DataError on an invalid manifest (num_layers or dim < 1).
  explicit EmbeddingStore(EmbeddingManifest manifest);

  // Throws DataError on dim mismatch, non-finite entries, layer out of range
  // or duplicate key.
  void add(std::string_view uid, int layer, std::span<const float> vector);

  // Checks that every uid has every layer and, when `expect_count`, that the
  // manifest count matches the records.
  void validate(bool expect_count = true) const;

  // Throws DataError naming uid and layer when the key is absent.
  std::span<const float> lookup(std::string_view uid, int layer) const;
  bool contains(std::string_view uid) const;

  const EmbeddingManifest& manifest() const { return manifest_; }
  std::size_t record_count() const { return records_.size(); }

  struct RecordView {
    std::string_view uid;
    int layer;
    std::span<const float> vector;
  };
  RecordView record(std::size_t i) const;

  // Manifest with `count` synced to the records.
  EmbeddingManifest finalized_manifest() const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  struct Record {
    std::size_t uid_slot;
    int layer;
  };

  EmbeddingManifest manifest_;
  std::vector<std::string> uids_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> uid_slots_;
  // Per uid slot, record index per layer offset (npos when absent).
  std::vector<std::vector<std::size_t>> layer_records_;
  std::vector<Record> records_;
  std::vector<float> data_;
};

EmbeddingManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const EmbeddingManifest& manifest, const std::filesystem::path& path);

// Data file format is chosen by extension: ".jsonl" is the debug text format,
// anything else the binary record stream.
EmbeddingStore read_store(const std::filesystem::path& manifest_path, const std::filesystem::path& data_path);
void write_store(const EmbeddingStore& store, const std::filesystem::path& manifest_path,
                 const std::filesystem::path& data_path);

}  // namespace lexshift
