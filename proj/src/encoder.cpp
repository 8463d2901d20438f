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

#include "lexparse/encoder.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "lexparse/error.hpp"

namespace lexparse {

std::string to_string(EncoderMode mode) {
  switch (mode) {
    case EncoderMode::kBase:
      return "base";
    case EncoderMode::kLexiconInjected:
      return "lexicon";
    case EncoderMode::kGeneralized:
      return "generalized";
  }
  return "base";
}

EncoderMode encoder_mode_from_string(const std::string& text) {
  if (text == "base") return EncoderMode::kBase;
  if (text == "lexicon") return EncoderMode::kLexiconInjected;
  if (text == "generalized") return EncoderMode::kGeneralized;
  throw_error(ErrorCode::kInvalidArgument, "unknown encoder mode '" + text + "'");
}

void EncoderConfig::validate() const {
  if (d_word == 0 || d_pos == 0 || d_model == 0 || n_heads == 0 || d_ff == 0 ||
      max_len < 2) {
    throw_error(ErrorCode::kInvalidArgument, "encoder dimensions must be positive");
  }
  if (d_model % 2 != 0) {
    throw_error(ErrorCode::kInvalidArgument, "d_model must be even to form boundaries");
  }
  if (d_model % n_heads != 0) {
    throw_error(ErrorCode::kInvalidArgument, "n_heads must divide d_model");
  }
  if (mode != EncoderMode::kBase && d_slot == 0) {
    throw_error(ErrorCode::kInvalidArgument, "lexicon modes need d_slot > 0");
  }
  if (mode == EncoderMode::kGeneralized && d_slot != d_word) {
    throw_error(ErrorCode::kInvalidArgument,
                "generalized mode substitutes slot vectors for word vectors and "
                "needs d_slot == d_word");
  }
}

std::size_t EncoderConfig::input_width() const {
  return d_word + d_pos + (mode == EncoderMode::kBase ? 0 : d_slot);
}

Encoder::Encoder(std::string prefix, EncoderConfig config)
    : prefix_(std::move(prefix)), config_(config) {
  config_.validate();
}

void Encoder::init_params(ParamStore& params, std::size_t vocab_size,
                          std::size_t num_slot_ids) const {
  const EncoderConfig& c = config_;
  params.create(param_name("word_emb"), {vocab_size, c.d_word}, Init::kEmbedding);
  params.create(param_name("pos_emb"), {c.max_len, c.d_pos}, Init::kEmbedding);
  if (c.mode != EncoderMode::kBase) {
    params.create(param_name("slot_emb"), {num_slot_ids, c.d_slot}, Init::kEmbedding);
  }
  if (c.input_width() != c.d_model) {
    params.create(param_name("in_proj.w"), {c.d_model, c.input_width()}, Init::kFanIn);
    params.create(param_name("in_proj.b"), {1, c.d_model}, Init::kZeros);
  }
  for (std::size_t l = 0; l < c.n_layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    params.create(param_name(p + "ln1.g"), {1, c.d_model}, Init::kOnes);
    params.create(param_name(p + "ln1.b"), {1, c.d_model}, Init::kZeros);
    params.create(param_name(p + "attn.q"), {c.d_model, c.d_model}, Init::kFanIn);
    params.create(param_name(p + "attn.k"), {c.d_model, c.d_model}, Init::kFanIn);
    params.create(param_name(p + "attn.v"), {c.d_model, c.d_model}, Init::kFanIn);
    params.create(param_name(p + "attn.o"), {c.d_model, c.d_model}, Init::kFanIn);
    params.create(param_name(p + "attn.o_b"), {1, c.d_model}, Init::kZeros);
    params.create(param_name(p + "ln2.g"), {1, c.d_model}, Init::kOnes);
    params.create(param_name(p + "ln2.b"), {1, c.d_model}, Init::kZeros);
    params.create(param_name(p + "ff1.w"), {c.d_ff, c.d_model}, Init::kFanIn);
    params.create(param_name(p + "ff1.b"), {1, c.d_ff}, Init::kZeros);
    params.create(param_name(p + "ff2.w"), {c.d_model, c.d_ff}, Init::kFanIn);
    params.create(param_name(p + "ff2.b"), {1, c.d_model}, Init::kZeros);
  }
  params.create(param_name("ln_out.g"), {1, c.d_model}, Init::kOnes);
  params.create(param_name("ln_out.b"), {1, c.d_model}, Init::kZeros);
}

Var Encoder::slot_vectors(Tape& tape, const ParamStore& params, const SlotTags& tags) const {
  const std::size_t rows = tags.indicators.size();
  Tensor m({rows, tags.num_ids});
  for (std::size_t r = 0; r < rows; ++r) {
    if (tags.indicators[r].size() != tags.num_ids) {
      throw_error(ErrorCode::kContract, "slot indicator row has the wrong width");
    }
    std::copy(tags.indicators[r].begin(), tags.indicators[r].end(),
              m.data.begin() + static_cast<std::ptrdiff_t>(r * tags.num_ids));
  }
  Var table = tape.param(params, param_name("slot_emb"));
  if (table.rows() != tags.num_ids) {
    throw_error(ErrorCode::kContract,
                "lexicon has " + std::to_string(tags.num_ids) +
                    " category ids but the model was trained with " +
                    std::to_string(table.rows()));
  }
  return matmul(tape.constant(std::move(m)), table);
}

Var Encoder::embed(Tape& tape, const ParamStore& params, std::span<const int> ids,
                   const SlotTags* tags) const {
  const EncoderConfig& c = config_;
  const std::size_t rows = ids.size();
  if (rows > c.max_len) {
    throw_error(ErrorCode::kInvalidArgument,
                "sequence of " + std::to_string(rows) + " positions exceeds max_len " +
                    std::to_string(c.max_len));
  }
  Var words = gather_rows(tape.param(params, param_name("word_emb")), ids);
  std::vector<int> positions(rows);
  std::iota(positions.begin(), positions.end(), 0);
  Var pos = gather_rows(tape.param(params, param_name("pos_emb")), positions);
  if (c.mode == EncoderMode::kBase) return concat_cols({words, pos});

  if (!tags || tags->indicators.size() != rows) {
    throw_error(ErrorCode::kContract, "lexicon modes need one slot tag row per position");
  }
  Var slots = slot_vectors(tape, params, *tags);
  if (c.mode == EncoderMode::kLexiconInjected) return concat_cols({words, pos, slots});

  Tensor covered({rows, c.d_word});
  Tensor uncovered({rows, c.d_word});
  for (std::size_t r = 0; r < rows; ++r) {
    const double flag = tags->in_lexicon[r] ? 1.0 : 0.0;
    for (std::size_t k = 0; k < c.d_word; ++k) {
      covered.at(r, k) = flag;
      uncovered.at(r, k) = 1.0 - flag;
    }
  }
  Var first = add(mul(words, tape.constant(std::move(uncovered))),
                  mul(slots, tape.constant(std::move(covered))));
  return concat_cols({first, pos, slots});
}

Var Encoder::attention(Tape& tape, const ParamStore& params, const std::string& layer,
                       const Var& x) const {
  const std::size_t d = config_.d_model;
  const std::size_t heads = config_.n_heads;
  const std::size_t dh = d / heads;
  Var q = matmul(x, tape.param(params, param_name(layer + "attn.q")), Transpose::kYes);
  Var k = matmul(x, tape.param(params, param_name(layer + "attn.k")), Transpose::kYes);
  Var v = matmul(x, tape.param(params, param_name(layer + "attn.v")), Transpose::kYes);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<Var> outs;
  for (std::size_t h = 0; h < heads; ++h) {
    Var qh = heads == 1 ? q : slice_cols(q, h * dh, (h + 1) * dh);
    Var kh = heads == 1 ? k : slice_cols(k, h * dh, (h + 1) * dh);
    Var vh = heads == 1 ? v : slice_cols(v, h * dh, (h + 1) * dh);
    Var weights = softmax_rows(scale(matmul(qh, kh, Transpose::kYes), inv_sqrt));
    outs.push_back(matmul(weights, vh));
  }
  Var merged = heads == 1 ? outs[0] : concat_cols(outs);
  return add(matmul(merged, tape.param(params, param_name(layer + "attn.o")), Transpose::kYes),
             tape.param(params, param_name(layer + "attn.o_b")));
}

Var Encoder::encode(Tape& tape, const ParamStore& params, const Var& x) const {
  const EncoderConfig& c = config_;
  if (x.rows() > c.max_len) {
    throw_error(ErrorCode::kInvalidArgument, "sequence exceeds max_len");
  }
  if (x.cols() != c.input_width()) {
    throw_error(ErrorCode::kContract, "encoder input has the wrong width");
  }
  Var h = x;
  if (c.input_width() != c.d_model) {
    h = add(matmul(x, tape.param(params, param_name("in_proj.w")), Transpose::kYes),
            tape.param(params, param_name("in_proj.b")));
  }
  for (std::size_t l = 0; l < c.n_layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    Var a = layer_norm_rows(h, tape.param(params, param_name(p + "ln1.g")),
                            tape.param(params, param_name(p + "ln1.b")));
    h = add(h, attention(tape, params, p, a));
    Var f = layer_norm_rows(h, tape.param(params, param_name(p + "ln2.g")),
                            tape.param(params, param_name(p + "ln2.b")));
    Var inner = relu(add(matmul(f, tape.param(params, param_name(p + "ff1.w")), Transpose::kYes),
                         tape.param(params, param_name(p + "ff1.b"))));
    h = add(h, add(matmul(inner, tape.param(params, param_name(p + "ff2.w")), Transpose::kYes),
                   tape.param(params, param_name(p + "ff2.b"))));
  }
  return layer_norm_rows(h, tape.param(params, param_name("ln_out.g")),
                         tape.param(params, param_name("ln_out.b")));
}

namespace {

Var fence_vectors(const Var& hidden, bool swapped) {
  const std::size_t rows = hidden.rows();
  const std::size_t d = hidden.cols();
  if (d % 2 != 0) {
    throw_error(ErrorCode::kInvalidArgument, "hidden width must be even to form boundaries");
  }
  if (rows < 3) {
    throw_error(ErrorCode::kInvalidArgument,
                "boundaries need sentinel-padded states for at least one token");
  }
  const std::size_t half = d / 2;
  Var left = slice_rows(hidden, 0, rows - 1);   // h_0..h_n
  Var right = slice_rows(hidden, 1, rows);      // h_1..h_{n+1}
  if (swapped) {
    return concat_cols({slice_cols(left, 0, half), slice_cols(right, half, d)});
  }
  return concat_cols({slice_cols(left, half, d), slice_cols(right, 0, half)});
}

}  // namespace

Var boundaries(const Var& hidden) { return fence_vectors(hidden, false); }

Var boundaries_swapped(const Var& hidden) { return fence_vectors(hidden, true); }

Var span_rep(const Var& boundaries, std::size_t i, std::size_t j) {
  if (i >= j || j >= boundaries.rows()) {
    throw_error(ErrorCode::kInvalidArgument,
                "span (" + std::to_string(i) + ", " + std::to_string(j) + ") is not valid");
  }
  return sub(slice_rows(boundaries, j, j + 1), slice_rows(boundaries, i, i + 1));
}

Var span_split_rep(const Var& rep, const Var& boundaries, std::size_t i, std::size_t j,
                   std::size_t k) {
  if (!(i < k && k < j)) {
    throw_error(ErrorCode::kInvalidArgument,
                "split fence " + std::to_string(k) + " is not strictly inside (" +
                    std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  return add(rep, slice_rows(boundaries, k, k + 1));
}

}  // namespace lexparse
