// Copyright 2026 The Lexparse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXPARSE_ENCODER_HPP_
#define LEXPARSE_ENCODER_HPP_

#include <cstddef>
#include <span>
#include <string>

#include "lexparse/lexicon.hpp"
#include "lexparse/numcore.hpp"

namespace lexparse {

enum class EncoderMode {
  kBase,             // x = [w; p]
  kLexiconInjected,  // x = [w; p; q]
  kGeneralized,      // x = [q; p; q] for lexicon-covered tokens, else [w; p; q]
};

std::string to_string(EncoderMode mode);
EncoderMode encoder_mode_from_string(const std::string& text);

struct EncoderConfig {
  std::size_t d_word = 64;
  std::size_t d_pos = 64;
  std::size_t d_slot = 64;
  std::size_t d_model = 128;
  std::size_t n_layers = 2;
  std::size_t n_heads = 4;
  std::size_t d_ff = 256;
  std::size_t max_len = 64;
  EncoderMode mode = EncoderMode::kBase;

  // Throws on inconsistent settings (odd d_model, heads not dividing d_model,
  // generalized mode with d_slot != d_word).
  void validate() const;
  std::size_t input_width() const;
};

// Pre-norm self-attention encoder over an embedded token sequence. All
// parameter names are prefixed, so several encoders can share a store.
class Encoder {
 public:
  Encoder() = default;
  Encoder(std::string prefix, EncoderConfig config);

  const EncoderConfig& config() const { return config_; }

  // num_slot_ids is ignored in base mode.
  void init_params(ParamStore& params, std::size_t vocab_size,
                   std::size_t num_slot_ids) const;

  // Rows of `tags` align with `ids`; required unless the mode is base.
  Var embed(Tape& tape, const ParamStore& params, std::span<const int> ids,
            const SlotTags* tags) const;
  // Sum of the slot-category embeddings selected by each indicator row.
  Var slot_vectors(Tape& tape, const ParamStore& params, const SlotTags& tags) const;
  Var encode(Tape& tape, const ParamStore& params, const Var& x) const;

  std::string param_name(const std::string& suffix) const { return prefix_ + suffix; }

 private:
  Var attention(Tape& tape, const ParamStore& params, const std::string& layer,
                const Var& x) const;

  std::string prefix_;
  EncoderConfig config_;
};

// Fence vectors from sentinel-padded hidden states h_0..h_{n+1}:
// b_k = [second half of h_k; first half of h_{k+1}], k = 0..n.
Var boundaries(const Var& hidden);
// Same construction with the halves swapped, for the splitting-convention
// comparison.
Var boundaries_swapped(const Var& hidden);

// r(i, j) = b_j - b_i, a single row.
Var span_rep(const Var& boundaries, std::size_t i, std::size_t j);
// r + b_k for an interior fence i < k < j.
Var span_split_rep(const Var& rep, const Var& boundaries, std::size_t i,
                   std::size_t j, std::size_t k);

}  // namespace lexparse

#endif  // LEXPARSE_ENCODER_HPP_
