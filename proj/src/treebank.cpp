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

#include "lexparse/treebank.hpp"

#include <algorithm>
#include <functional>

#include "lexparse/checkpoint.hpp"
#include "lexparse/error.hpp"

namespace lexparse {

namespace {

bool has_atom_prefix(std::string_view raw) {
  return raw.size() > 3 && (raw.substr(0, 3) == "IN:" || raw.substr(0, 3) == "SL:");
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

Label Label::atom(std::string_view raw) {
  if (!has_atom_prefix(raw)) {
    throw_error(ErrorCode::kParse,
                "label '" + std::string(raw) + "' must start with IN: or SL:");
  }
  if (raw.find(kChainSeparator) != std::string_view::npos) {
    throw_error(ErrorCode::kParse, "label '" + std::string(raw) + "' contains '+'");
  }
  Label l;
  l.kind = raw[0] == 'I' ? LabelKind::kIntent : LabelKind::kSlot;
  l.parts.emplace_back(raw);
  return l;
}

Label Label::chain(std::vector<std::string> parts) {
  if (parts.empty()) throw_error(ErrorCode::kContract, "empty label chain");
  if (parts.size() == 1) return atom(parts[0]);
  for (const auto& p : parts) atom(p);
  Label l;
  l.kind = LabelKind::kCollapsedChain;
  l.parts = std::move(parts);
  return l;
}

Label Label::from_string(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t plus = text.find(kChainSeparator, pos);
    parts.emplace_back(text.substr(pos, plus - pos));
    if (plus == std::string_view::npos) break;
    pos = plus + 1;
  }
  return chain(std::move(parts));
}

std::string Label::str() const {
  if (is_dummy()) return "<dummy>";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += kChainSeparator;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens,
                        std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += tokens[i];
  }
  return out;
}

namespace {

ParseTree token_leaf(std::size_t pos) {
  ParseTree t;
  t.begin = pos;
  t.end = pos + 1;
  return t;
}

// Items under one bracket: either bare tokens or sub-constituents.
struct Frame {
  Label label;
  std::size_t begin = 0;
  std::vector<ParseTree> items;
  std::size_t num_subtrees = 0;
};

ParseTree close_frame(Frame&& f, std::size_t end) {
  if (f.items.empty()) {
    throw_error(ErrorCode::kParse, "empty constituent [" + f.label.str() + " ]");
  }
  ParseTree node;
  node.label = std::move(f.label);
  node.begin = f.begin;
  node.end = end;
  // A bracket around a single bare token is a pre-terminal.
  if (f.items.size() == 1 && f.num_subtrees == 0) return node;
  node.children = std::move(f.items);
  return node;
}

}  // namespace

Example parse_top(std::string_view text) {
  std::vector<std::string> pieces = split_tokens(text);
  Example ex;
  ex.utterance.raw = std::string(text);
  std::vector<Frame> stack;
  bool have_root = false;
  for (const std::string& piece : pieces) {
    if (piece[0] == '[') {
      if (have_root && stack.empty()) {
        throw_error(ErrorCode::kParse, "text continues after the root constituent");
      }
      Frame f;
      f.label = Label::atom(std::string_view(piece).substr(1));
      f.begin = ex.utterance.tokens.size();
      stack.push_back(std::move(f));
    } else if (piece == "]") {
      if (stack.empty()) throw_error(ErrorCode::kParse, "unbalanced ']'");
      Frame f = std::move(stack.back());
      stack.pop_back();
      ParseTree node = close_frame(std::move(f), ex.utterance.tokens.size());
      if (stack.empty()) {
        ex.tree = std::move(node);
        have_root = true;
      } else {
        stack.back().items.push_back(std::move(node));
        ++stack.back().num_subtrees;
      }
    } else {
      if (piece.find_first_of("[]") != std::string::npos) {
        throw_error(ErrorCode::kParse, "token '" + piece + "' contains a bracket");
      }
      if (stack.empty()) {
        throw_error(ErrorCode::kParse, "token '" + piece + "' outside any constituent");
      }
      stack.back().items.push_back(token_leaf(ex.utterance.tokens.size()));
      ex.utterance.tokens.push_back(piece);
    }
  }
  if (!stack.empty()) throw_error(ErrorCode::kParse, "unbalanced brackets: missing ']'");
  if (!have_root) throw_error(ErrorCode::kParse, "no constituent found");
  return ex;
}

namespace {

void serialize_into(const ParseTree& t, const Utterance& utt, std::string& out) {
  if (t.is_token()) {
    out += utt.tokens.at(t.begin);
    return;
  }
  if (t.label.is_dummy()) {
    throw_error(ErrorCode::kContract,
                "cannot serialize a dummy node; debinarize first");
  }
  if (t.label.kind == LabelKind::kCollapsedChain) {
    throw_error(ErrorCode::kContract,
                "cannot serialize a collapsed chain; expand it first");
  }
  out += '[';
  out += t.label.parts[0];
  if (t.children.empty()) {
    for (std::size_t i = t.begin; i < t.end; ++i) {
      out += ' ';
      out += utt.tokens.at(i);
    }
  } else {
    for (const ParseTree& c : t.children) {
      out += ' ';
      serialize_into(c, utt, out);
    }
  }
  out += " ]";
}

}  // namespace

std::string serialize_top(const ParseTree& tree, const Utterance& utterance) {
  std::string out;
  serialize_into(tree, utterance, out);
  return out;
}

ParseTree collapse_unary(const ParseTree& tree) {
  ParseTree out;
  out.begin = tree.begin;
  out.end = tree.end;
  if (!tree.label.is_dummy() && tree.children.size() == 1 &&
      !tree.children[0].label.is_dummy()) {
    ParseTree below = collapse_unary(tree.children[0]);
    std::vector<std::string> parts = tree.label.parts;
    parts.insert(parts.end(), below.label.parts.begin(), below.label.parts.end());
    out.label = Label::chain(std::move(parts));
    out.children = std::move(below.children);
    return out;
  }
  out.label = tree.label;
  for (const ParseTree& c : tree.children) out.children.push_back(collapse_unary(c));
  return out;
}

ParseTree expand_unary(const ParseTree& tree) {
  std::vector<ParseTree> children;
  for (const ParseTree& c : tree.children) children.push_back(expand_unary(c));
  if (tree.label.kind != LabelKind::kCollapsedChain) {
    ParseTree out;
    out.label = tree.label;
    out.begin = tree.begin;
    out.end = tree.end;
    out.children = std::move(children);
    return out;
  }
  ParseTree node;
  for (std::size_t p = tree.label.parts.size(); p-- > 0;) {
    ParseTree level;
    level.label = Label::atom(tree.label.parts[p]);
    level.begin = tree.begin;
    level.end = tree.end;
    if (p + 1 == tree.label.parts.size()) {
      level.children = std::move(children);
    } else {
      level.children.push_back(std::move(node));
    }
    node = std::move(level);
  }
  return node;
}

namespace {

ParseTree right_cascade(std::vector<ParseTree>& kids, std::size_t from) {
  if (kids.size() - from == 1) return std::move(kids[from]);
  ParseTree d;
  d.begin = kids[from].begin;
  d.end = kids.back().end;
  d.children.push_back(std::move(kids[from]));
  d.children.push_back(right_cascade(kids, from + 1));
  return d;
}

}  // namespace

ParseTree binarize(const ParseTree& tree) {
  ParseTree out;
  out.label = tree.label;
  out.begin = tree.begin;
  out.end = tree.end;
  std::vector<ParseTree> kids;
  for (const ParseTree& c : tree.children) kids.push_back(binarize(c));
  if (kids.size() <= 2) {
    out.children = std::move(kids);
    return out;
  }
  out.children.push_back(std::move(kids[0]));
  out.children.push_back(right_cascade(kids, 1));
  return out;
}

namespace {

void splice_children(const ParseTree& node, std::vector<ParseTree>& out) {
  for (const ParseTree& c : node.children) {
    if (c.label.is_dummy() && !c.children.empty()) {
      splice_children(c, out);
    } else {
      ParseTree d;
      d.label = c.label;
      d.begin = c.begin;
      d.end = c.end;
      splice_children(c, d.children);
      out.push_back(std::move(d));
    }
  }
}

}  // namespace

ParseTree debinarize(const ParseTree& tree) {
  if (tree.label.is_dummy() && !tree.children.empty()) {
    throw_error(ErrorCode::kContract,
                "root dummy node cannot be removed without merging siblings");
  }
  ParseTree out;
  out.label = tree.label;
  out.begin = tree.begin;
  out.end = tree.end;
  splice_children(tree, out.children);
  return out;
}

ParseTree to_chart_form(const ParseTree& tree) {
  return binarize(collapse_unary(tree));
}

ParseTree from_chart_form(const ParseTree& tree) {
  return expand_unary(debinarize(tree));
}

std::vector<LabeledSpan> labeled_spans(const ParseTree& tree) {
  std::vector<LabeledSpan> out;
  std::function<void(const ParseTree&)> walk = [&](const ParseTree& t) {
    if (!t.label.is_dummy()) {
      for (const std::string& part : t.label.parts) {
        out.push_back({t.begin, t.end, part});
      }
    }
    for (const ParseTree& c : t.children) walk(c);
  };
  walk(tree);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void validate_node(const ParseTree& t) {
  if (t.begin >= t.end) throw_error(ErrorCode::kContract, "empty span in tree");
  if (t.is_token() && t.width() != 1) {
    throw_error(ErrorCode::kContract, "bare token leaf wider than one token");
  }
  if (t.label.kind == LabelKind::kCollapsedChain && t.label.parts.size() < 2) {
    throw_error(ErrorCode::kContract, "collapsed chain with fewer than two parts");
  }
  if (!t.label.is_dummy() && t.label.parts.empty()) {
    throw_error(ErrorCode::kContract, "label without a raw string");
  }
  if (t.children.empty()) return;
  std::size_t pos = t.begin;
  for (const ParseTree& c : t.children) {
    if (c.begin != pos) {
      throw_error(ErrorCode::kContract, "child spans do not partition their parent");
    }
    validate_node(c);
    pos = c.end;
  }
  if (pos != t.end) {
    throw_error(ErrorCode::kContract, "child spans do not partition their parent");
  }
}

}  // namespace

void validate_tree(const ParseTree& tree, std::size_t num_tokens) {
  if (tree.begin != 0 || tree.end != num_tokens) {
    throw_error(ErrorCode::kContract, "root does not cover the utterance");
  }
  validate_node(tree);
}

void validate_utterance(const Utterance& utterance) {
  if (utterance.tokens.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "utterance has no tokens");
  }
  for (const std::string& tok : utterance.tokens) {
    if (tok.empty() || tok.find_first_of(" \t\r\n[]") != std::string::npos) {
      throw_error(ErrorCode::kInvalidArgument, "invalid token '" + tok + "'");
    }
  }
}

namespace {

std::size_t reindex_from(ParseTree& t, std::size_t pos) {
  const std::size_t width = t.width();
  t.begin = pos;
  if (t.children.empty()) {
    t.end = pos + std::max<std::size_t>(width, 1);
    return t.end;
  }
  for (ParseTree& c : t.children) pos = reindex_from(c, pos);
  t.end = pos;
  return pos;
}

}  // namespace

void reindex_spans(ParseTree& tree) {
  // Childless labeled nodes keep their width; callers expand them first when
  // the token count under them changes.
  reindex_from(tree, tree.begin);
}

Corpus read_corpus(std::string_view text, const std::string& source) {
  Corpus corpus;
  std::size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (nl == text.size()) break;
      continue;
    }
    std::size_t tab = line.rfind('\t');
    std::string_view annotation = tab == std::string_view::npos ? line : line.substr(tab + 1);
    try {
      Example ex = parse_top(annotation);
      validate_utterance(ex.utterance);
      validate_tree(ex.tree, ex.utterance.size());
      corpus.push_back(std::move(ex));
    } catch (const Error& e) {
      throw_error(ErrorCode::kParse,
                  source + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    if (nl == text.size()) break;
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  return read_corpus(read_file(path), path);
}

std::string write_corpus(const Corpus& corpus) {
  std::string out;
  for (const Example& ex : corpus) {
    out += serialize_top(ex.tree, ex.utterance);
    out += '\n';
  }
  return out;
}

void save_corpus(const std::string& path, const Corpus& corpus) {
  write_file(path, write_corpus(corpus));
}

}  // namespace lexparse
