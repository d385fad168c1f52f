#include "neuconj/lm/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <json.hpp>

#include "neuconj/library.hpp"

namespace neuconj::lm {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'N', 'C', 'L', 'M'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string serialize_checkpoint(const Transformer<float>& model, const Vocabulary& vocab) {
  if (vocab.size() != model.config().vocab_size) {
    throw Error("vocabulary size does not match the model");
  }
  json header;
  header["model"] = json::parse(to_json(model.config()));
  header["vocab"] = json::parse(vocab.to_json());
  header["dtype"] = "f32";
  json tensors = json::array();
  for (const auto& t : model.tensors()) {
    tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"offset", t.offset}, {"size", t.size}});
  }
  header["tensors"] = tensors;
  const std::string h = header.dump();

  std::string out(kMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_u64(out, h.size());
  out += h;
  const auto params = model.parameters();
  out.reserve(out.size() + 4 * params.size());
  for (float f : params) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

LoadedModel deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IoError("not a checkpoint (bad magic)");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint64_t hlen = get_le(bytes, 8, 8);
  if (hlen > bytes.size() - 16) throw IoError("truncated checkpoint header");
  LoadedModel out;
  ModelConfig cfg;
  try {
    const json header = json::parse(bytes.substr(16, hlen));
    if (header.at("dtype") != "f32") throw IoError("unsupported dtype");
    cfg = model_config_from_json(header.at("model").dump());
    out.vocab = Vocabulary::from_json(header.at("vocab").dump());
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed checkpoint header: ") + e.what());
  } catch (const InvalidConfig& e) {
    throw IoError(e.what());
  }
  const std::size_t payload = bytes.size() - 16 - hlen;
  if (payload % 4 != 0) throw IoError("checkpoint payload is not a whole number of floats");
  std::vector<float> params(payload / 4);
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i] = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(bytes, 16 + hlen + 4 * i, 4)));
  }
  try {
    out.model = std::make_unique<Transformer<float>>(cfg, std::move(params));
  } catch (const Error& e) {
    throw IoError(std::string("checkpoint does not match its header: ") + e.what());
  }
  if (out.vocab.size() != cfg.vocab_size) throw IoError("checkpoint vocabulary size mismatch");
  out.id = fnv1a64_hex(bytes);
  return out;
}

void save_checkpoint(const std::string& path, const Transformer<float>& model,
                     const Vocabulary& vocab) {
  write_file(path, serialize_checkpoint(model, vocab));
}

LoadedModel load_checkpoint(const std::string& path) {
  return deserialize_checkpoint(read_file(path));
}

}  // namespace neuconj::lm
