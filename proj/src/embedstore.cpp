#include "lexshift/embedstore.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "lexshift/error.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::string key_name(std::string_view uid, int layer) {
  return "uid '" + std::string(uid) + "' layer " + std::to_string(layer);
}

}  // namespace

EmbeddingStore::EmbeddingStore(EmbeddingManifest manifest) : manifest_(std::move(manifest)) {
  if (manifest_.num_layers < 1) throw DataError("manifest num_layers must be >= 1");
  if (manifest_.dim < 1) throw DataError("manifest dim must be >= 1");
}

void EmbeddingStore::add(std::string_view uid, int layer, std::span<const float> vector) {
  if (vector.size() != static_cast<std::size_t>(manifest_.dim)) {
    throw DataError("dim mismatch for " + key_name(uid, layer) + ": expected " + std::to_string(manifest_.dim) +
                    ", got " + std::to_string(vector.size()));
  }
  if (layer < manifest_.first_layer() || layer > manifest_.last_layer()) {
    throw DataError("layer out of range for " + key_name(uid, layer));
  }
  for (float x : vector) {
    if (!std::isfinite(x)) throw DataError("non-finite entry for " + key_name(uid, layer));
  }
  if (uid.empty()) throw DataError("empty uid in embedding record");

  auto it = uid_slots_.find(uid);
  if (it == uid_slots_.end()) {
    it = uid_slots_.emplace(std::string(uid), uids_.size()).first;
    uids_.emplace_back(uid);
    layer_records_.emplace_back(static_cast<std::size_t>(manifest_.layers_per_uid()), kNone);
  }
  auto& slot = layer_records_[it->second][static_cast<std::size_t>(layer - manifest_.first_layer())];
  if (slot != kNone) throw DataError("duplicate record for " + key_name(uid, layer));
  slot = records_.size();
  records_.push_back({it->second, layer});
  data_.insert(data_.end(), vector.begin(), vector.end());
}

void EmbeddingStore::validate(bool expect_count) const {
  for (std::size_t s = 0; s < uids_.size(); ++s) {
    for (std::size_t l = 0; l < layer_records_[s].size(); ++l) {
      if (layer_records_[s][l] == kNone) {
        throw DataError("uid '" + uids_[s] + "' has partial layer coverage (missing layer " +
                        std::to_string(static_cast<int>(l) + manifest_.first_layer()) + ")");
      }
    }
  }
  if (expect_count && manifest_.count != records_.size()) {
    throw DataError("manifest count " + std::to_string(manifest_.count) + " does not match " +
                    std::to_string(records_.size()) + " records");
  }
}

std::span<const float> EmbeddingStore::lookup(std::string_view uid, int layer) const {
  if (layer < manifest_.first_layer() || layer > manifest_.last_layer()) {
    throw DataError("layer out of range: " + key_name(uid, layer) + " (store has layers " +
                    std::to_string(manifest_.first_layer()) + ".." + std::to_string(manifest_.last_layer()) + ")");
  }
  const auto it = uid_slots_.find(uid);
  if (it == uid_slots_.end()) throw DataError("missing embedding for " + key_name(uid, layer));
  const auto rec = layer_records_[it->second][static_cast<std::size_t>(layer - manifest_.first_layer())];
  if (rec == kNone) throw DataError("missing embedding for " + key_name(uid, layer));
  const auto dim = static_cast<std::size_t>(manifest_.dim);
  return std::span<const float>(data_).subspan(rec * dim, dim);
}

bool EmbeddingStore::contains(std::string_view uid) const { return uid_slots_.find(uid) != uid_slots_.end(); }

EmbeddingStore::RecordView EmbeddingStore::record(std::size_t i) const {
  const auto dim = static_cast<std::size_t>(manifest_.dim);
  return {uids_[records_[i].uid_slot], records_[i].layer, std::span<const float>(data_).subspan(i * dim, dim)};
}

EmbeddingManifest EmbeddingStore::finalized_manifest() const {
  auto m = manifest_;
  m.count = records_.size();
  return m;
}

EmbeddingManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed manifest " + path.string() + ": " + e.what());
  }
  EmbeddingManifest m;
  try {
    for (const auto& [key, _] : j.items()) {
      if (key != "model_id" && key != "num_layers" && key != "dim" && key != "count" &&
          key != "layer_zero_included") {
        throw DataError("unknown manifest key '" + key + "'");
      }
    }
    m.model_id = j.at("model_id").get<std::string>();
    m.num_layers = j.at("num_layers").get<int>();
    m.dim = j.at("dim").get<int>();
    m.count = j.at("count").get<std::size_t>();
    m.layer_zero_included = j.value("layer_zero_included", false);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid manifest " + path.string() + ": " + e.what());
  }
  if (m.num_layers < 1 || m.dim < 1) throw DataError("manifest num_layers and dim must be >= 1");
  return m;
}

void write_manifest(const EmbeddingManifest& m, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["model_id"] = m.model_id;
  j["num_layers"] = m.num_layers;
  j["dim"] = m.dim;
  j["count"] = m.count;
  j["layer_zero_included"] = m.layer_zero_included;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write manifest " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

// Little-endian fixed-width codecs, independent of host byte order.
template <typename T>
T decode_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint32_t>;
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  return std::bit_cast<T>(v);
}

template <typename T>
void encode_le(T value, std::string& out) {
  using U = std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint32_t>;
  const auto v = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

bool read_exact(std::istream& in, unsigned char* buf, std::size_t n) {
  in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

void read_binary(std::istream& in, EmbeddingStore& store, const std::string& name) {
  const auto dim = static_cast<std::size_t>(store.manifest().dim);
  std::vector<unsigned char> buf(dim * 4);
  std::vector<float> vec(dim);
  std::string uid;
  std::size_t index = 0;
  while (true) {
    unsigned char hdr[2];
    in.read(reinterpret_cast<char*>(hdr), 2);
    if (in.gcount() == 0) break;
    const auto where = " in record " + std::to_string(index) + " of " + name;
    if (in.gcount() != 2) throw DataError("truncated record header" + where);
    uid.resize(decode_le<std::uint16_t>(hdr));
    if (!read_exact(in, reinterpret_cast<unsigned char*>(uid.data()), uid.size())) {
      throw DataError("truncated uid" + where);
    }
    if (!text::code_point_count(uid)) throw DataError("uid is not valid UTF-8" + where);
    if (!read_exact(in, hdr, 2)) throw DataError("truncated layer" + where);
    const int layer = decode_le<std::uint16_t>(hdr);
    if (!read_exact(in, buf.data(), buf.size())) {
      throw DataError("dim mismatch for " + key_name(uid, layer) + ": record payload shorter than " +
                      std::to_string(dim) + " floats" + where);
    }
    for (std::size_t i = 0; i < dim; ++i) vec[i] = decode_le<float>(buf.data() + 4 * i);
    store.add(uid, layer, vec);
    ++index;
  }
}

void read_jsonl(std::istream& in, EmbeddingStore& store, const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<float> vec;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::chomp(line);
    if (body.empty()) continue;
    const auto where = " at line " + std::to_string(line_no) + " of " + name;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
      vec.clear();
      for (const auto& x : j.at("vector")) {
        if (!x.is_number()) throw DataError("non-numeric vector entry" + where);
        vec.push_back(x.get<float>());
      }
      store.add(j.at("uid").get<std::string>(), j.at("layer").get<int>(), vec);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed embedding record: ") + e.what() + where);
    }
  }
}

}  // namespace

EmbeddingStore read_store(const std::filesystem::path& manifest_path, const std::filesystem::path& data_path) {
  EmbeddingStore store(read_manifest(manifest_path));
  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding data " + data_path.string());
  if (data_path.extension() == ".jsonl") {
    read_jsonl(in, store, data_path.string());
  } else {
    read_binary(in, store, data_path.string());
  }
  store.validate();
  return store;
}

void write_store(const EmbeddingStore& store, const std::filesystem::path& manifest_path,
                 const std::filesystem::path& data_path) {
  store.validate(false);
  write_manifest(store.finalized_manifest(), manifest_path);
  std::ofstream out(data_path, std::ios::binary);
  if (!out) throw DataError("cannot write embedding data " + data_path.string());
  const bool jsonl = data_path.extension() == ".jsonl";
  std::string buf;
  for (std::size_t i = 0; i < store.record_count(); ++i) {
    const auto rec = store.record(i);
    buf.clear();
    if (jsonl) {
      nlohmann::ordered_json j;
      j["uid"] = rec.uid;
      j["layer"] = rec.layer;
      j["vector"] = std::vector<float>(rec.vector.begin(), rec.vector.end());
      buf = j.dump();
      buf.push_back('\n');
    } else {
      if (rec.uid.size() > 0xffff) throw DataError("uid longer than 65535 bytes: " + std::string(rec.uid));
      encode_le(static_cast<std::uint16_t>(rec.uid.size()), buf);
      buf.append(rec.uid);
      encode_le(static_cast<std::uint16_t>(rec.layer), buf);
      for (float x : rec.vector) encode_le(x, buf);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw DataError("failed writing embedding data " + data_path.string());
}

}  // namespace lexshift
