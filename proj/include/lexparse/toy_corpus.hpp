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

#ifndef LEXPARSE_TOY_CORPUS_HPP_
#define LEXPARSE_TOY_CORPUS_HPP_

// Small templated navigation/event corpus in TOP notation, plus a catalog of
// new slot values absent from it. Enough structure to exercise nesting,
// unary chains, ambiguous lexicon matches and multi-token values.

#include <cstddef>
#include <cstdint>
#include <string>

#include "lexparse/treebank.hpp"

namespace lexparse {

// `count` annotated utterances drawn from the templates with `seed`.
Corpus generate_toy_corpus(std::size_t count, std::uint64_t seed);

// category<TAB>value lines for values never produced by the generator.
std::string toy_catalog_tsv();

}  // namespace lexparse

#endif  // LEXPARSE_TOY_CORPUS_HPP_
