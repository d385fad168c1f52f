#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "neuconj/error.hpp"

namespace neuconj::lm {

class SequenceTooLong : public Error {
 public:
  SequenceTooLong(std::size_t length, std::size_t limit)
      : Error("sequence of " + std::to_string(length) + " tokens exceeds context length " +
              std::to_string(limit)),
        length_(length),
        limit_(limit) {}
  std::size_t length() const { return length_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t length_;
  std::size_t limit_;
};

// Incremental decoding state: the tokens consumed so far.
class DecoderState {
 public:
  virtual ~DecoderState() = default;
  // Consumes one token and returns the next-token logits.
  virtual std::vector<double> feed(int token) = 0;
  virtual std::size_t length() const = 0;
  virtual std::unique_ptr<DecoderState> clone() const = 0;
};

// What the decoders need from a model. Implementations are read-only after
// construction, so one instance may serve concurrent decoders.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual std::size_t context_length() const = 0;
  virtual std::unique_ptr<DecoderState> start() const = 0;
};

}  // namespace neuconj::lm
