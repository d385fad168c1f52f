#pragma once

// Checkpoint layout (all integers and floats little-endian):
//
//   bytes 0..3   magic "NCLM"
//   u32          format version (1)
//   u64          header length H
//   H bytes      UTF-8 JSON: {"model": ModelConfig, "vocab": {"tokenizer", "tokens"},
//                "dtype": "f32", "tensors": [{"name", "shape", "offset", "size"}]}
//   f32 * N      parameters in tensor order; offsets and sizes count floats
//
// The file must end exactly after the last tensor.

#include <memory>
#include <string>

#include "neuconj/lm/transformer.hpp"
#include "neuconj/lm/vocab.hpp"

namespace neuconj::lm {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct LoadedModel {
  Vocabulary vocab;
  std::unique_ptr<Transformer<float>> model;
  std::string id;  // 16 hex digits of FNV-1a-64 over the file bytes
};

std::string serialize_checkpoint(const Transformer<float>& model, const Vocabulary& vocab);
LoadedModel deserialize_checkpoint(const std::string& bytes);  // throws IoError

void save_checkpoint(const std::string& path, const Transformer<float>& model,
                     const Vocabulary& vocab);
LoadedModel load_checkpoint(const std::string& path);

std::string fnv1a64_hex(std::string_view bytes);

}  // namespace neuconj::lm
