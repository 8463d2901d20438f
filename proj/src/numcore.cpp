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

#include "lexparse/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "lexparse/error.hpp"

namespace lexparse {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape s, double fill)
    : shape(std::move(s)), data(shape_size(shape), fill) {}

Tensor::Tensor(Shape s, std::vector<double> values)
    : shape(std::move(s)), data(std::move(values)) {
  if (data.size() != shape_size(shape)) {
    throw_error(ErrorCode::kInvalidArgument,
                "tensor data length does not match its shape");
  }
}

Tensor Tensor::row(std::vector<double> values) {
  std::size_t n = values.size();
  return Tensor({1, n}, std::move(values));
}

std::size_t Tensor::rows() const {
  if (shape.empty()) return 1;
  return shape.size() == 1 ? 1 : shape[0];
}

std::size_t Tensor::cols() const {
  if (shape.empty()) return 1;
  return shape.back();
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw_error(ErrorCode::kInvalidArgument, "Rng::below(0)");
  auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(k, n - 1);
}

Tensor& ParamStore::create(const std::string& name, Shape shape, Init init) {
  if (params_.count(name)) {
    throw_error(ErrorCode::kContract, "duplicate parameter name: " + name);
  }
  Tensor t(shape);
  switch (init) {
    case Init::kZeros:
      break;
    case Init::kOnes:
      std::fill(t.data.begin(), t.data.end(), 1.0);
      break;
    case Init::kEmbedding:
      for (double& x : t.data) x = rng_.uniform(-0.1, 0.1);
      break;
    case Init::kFanIn: {
      double bound = 1.0 / std::sqrt(static_cast<double>(t.cols()));
      for (double& x : t.data) x = rng_.uniform(-bound, bound);
      break;
    }
  }
  return params_.emplace(name, std::move(t)).first->second;
}

void ParamStore::insert(const std::string& name, Tensor tensor) {
  if (!params_.emplace(name, std::move(tensor)).second) {
    throw_error(ErrorCode::kContract, "duplicate parameter name: " + name);
  }
}

bool ParamStore::contains(const std::string& name) const {
  return params_.count(name) != 0;
}

Tensor& ParamStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw_error(ErrorCode::kContract, "unknown parameter: " + name);
  }
  return it->second;
}

const Tensor& ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw_error(ErrorCode::kContract, "unknown parameter: " + name);
  }
  return it->second;
}

void ParamStore::clear_grads() {
  for (auto& [name, t] : params_) t.grad.clear();
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.size();
  return n;
}

// ---------------------------------------------------------------------------
// Tape

const Tensor& Var::value() const { return tape_->value(id_); }

double Var::item() const {
  const Tensor& v = value();
  if (v.size() != 1) {
    throw_error(ErrorCode::kContract, "item() on a non-scalar");
  }
  return v.data[0];
}

Var Tape::constant(Tensor value) {
  return record("constant", std::move(value), {}, nullptr);
}

Var Tape::param(const ParamStore& store, const std::string& name) {
  auto it = param_ids_.find(name);
  if (it != param_ids_.end()) return Var(this, it->second);
  Node node;
  node.op = "param:" + name;
  node.external = &store.at(name);
  node.param_name = name;
  nodes_.push_back(std::move(node));
  int id = static_cast<int>(nodes_.size()) - 1;
  param_ids_.emplace(name, id);
  return Var(this, id);
}

Var Tape::record(std::string_view op, Tensor value, std::vector<int> inputs,
                 Backprop backprop) {
  Node node;
  node.op = std::string(op);
  node.value = std::move(value);
  node.inputs = std::move(inputs);
  node.backprop = std::move(backprop);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Tensor& Tape::value(int id) const {
  const Node& n = nodes_[id];
  return n.external ? *n.external : n.value;
}

std::vector<double>& Tape::grad(int id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(value(id).size(), 0.0);
  return n.grad;
}

void Tape::backward(const Var& loss) {
  if (loss.tape() != this) {
    throw_error(ErrorCode::kContract, "backward on a foreign tape node");
  }
  if (value(loss.id()).size() != 1) {
    throw_error(ErrorCode::kContract, "backward requires a scalar loss");
  }
  for (Node& n : nodes_) n.grad.clear();
  grad(loss.id())[0] = 1.0;
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    for (double g : n.grad) {
      if (!std::isfinite(g)) {
        throw_error(ErrorCode::kNumeric,
                    "non-finite gradient at op node '" + n.op + "'");
      }
    }
    if (n.backprop) n.backprop(*this, id);
  }
}

void Tape::backward(const Var& loss, ParamStore& params) {
  backward(loss);
  for (const auto& [name, id] : param_ids_) {
    Tensor& t = params.at(name);
    if (t.grad.size() != t.size()) t.grad.assign(t.size(), 0.0);
    const Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    for (std::size_t i = 0; i < t.size(); ++i) t.grad[i] += n.grad[i];
  }
}

// ---------------------------------------------------------------------------
// Operations

namespace {

void require_same_tape(const Var& a, const Var& b) {
  if (!a.valid() || a.tape() != b.tape()) {
    throw_error(ErrorCode::kContract, "operands recorded on different tapes");
  }
}

std::string shape_str(const Tensor& t) {
  std::ostringstream os;
  os << "[" << t.rows() << "x" << t.cols() << "]";
  return os.str();
}

// Row broadcast: b is either a's shape or a single row of a's width.
bool broadcasts(const Tensor& a, const Tensor& b) {
  if (a.rows() == b.rows() && a.cols() == b.cols()) return false;
  if (b.rows() == 1 && b.cols() == a.cols()) return true;
  throw_error(ErrorCode::kInvalidArgument,
              "incompatible shapes " + shape_str(a) + " and " + shape_str(b));
}

}  // namespace

Var matmul(const Var& a, const Var& b, Transpose transpose_b) {
  require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const bool tb = transpose_b == Transpose::kYes;
  const std::size_t m = av.rows(), k = av.cols();
  const std::size_t kb = tb ? bv.cols() : bv.rows();
  const std::size_t n = tb ? bv.rows() : bv.cols();
  if (k != kb) {
    throw_error(ErrorCode::kInvalidArgument,
                "matmul shape mismatch " + shape_str(av) + " x " +
                    shape_str(bv) + (tb ? "^T" : ""));
  }
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = &av.data[i * k];
    double* orow = &out.data[i * n];
    if (tb) {
      for (std::size_t j = 0; j < n; ++j) {
        const double* brow = &bv.data[j * k];
        double acc = 0.0;
        for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
        orow[j] = acc;
      }
    } else {
      for (std::size_t p = 0; p < k; ++p) {
        const double x = arow[p];
        const double* brow = &bv.data[p * n];
        for (std::size_t j = 0; j < n; ++j) orow[j] += x * brow[j];
      }
    }
  }
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(
      "matmul", std::move(out), {ia, ib},
      [ia, ib, m, k, n, tb](Tape& t, int self) {
        const auto& g = t.grad(self);
        const Tensor& av = t.value(ia);
        const Tensor& bv = t.value(ib);
        auto& ga = t.grad(ia);
        auto& gb = t.grad(ib);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const double gij = g[i * n + j];
            if (gij == 0.0) continue;
            for (std::size_t p = 0; p < k; ++p) {
              const double bpj = tb ? bv.data[j * k + p] : bv.data[p * n + j];
              ga[i * k + p] += gij * bpj;
              if (tb) {
                gb[j * k + p] += gij * av.data[i * k + p];
              } else {
                gb[p * n + j] += gij * av.data[i * k + p];
              }
            }
          }
        }
      });
}

Var add(const Var& a, const Var& b) {
  require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const bool bc = broadcasts(av, bv);
  const std::size_t cols = av.cols();
  Tensor out(av.shape, av.data);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data[i] += bv.data[bc ? i % cols : i];
  }
  const int ia = a.id(), ib = b.id();
  return a.tape()->record("add", std::move(out), {ia, ib},
                          [ia, ib, bc, cols](Tape& t, int self) {
                            const auto& g = t.grad(self);
                            auto& ga = t.grad(ia);
                            auto& gb = t.grad(ib);
                            for (std::size_t i = 0; i < g.size(); ++i) {
                              ga[i] += g[i];
                              gb[bc ? i % cols : i] += g[i];
                            }
                          });
}

Var mul(const Var& a, const Var& b) {
  require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const bool bc = broadcasts(av, bv);
  const std::size_t cols = av.cols();
  Tensor out(av.shape, av.data);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data[i] *= bv.data[bc ? i % cols : i];
  }
  const int ia = a.id(), ib = b.id();
  return a.tape()->record(
      "mul", std::move(out), {ia, ib}, [ia, ib, bc, cols](Tape& t, int self) {
        const auto& g = t.grad(self);
        const Tensor& av = t.value(ia);
        const Tensor& bv = t.value(ib);
        auto& ga = t.grad(ia);
        auto& gb = t.grad(ib);
        for (std::size_t i = 0; i < g.size(); ++i) {
          const std::size_t bi = bc ? i % cols : i;
          ga[i] += g[i] * bv.data[bi];
          gb[bi] += g[i] * av.data[i];
        }
      });
}

Var scale(const Var& a, double factor) {
  Tensor out(a.value().shape, a.value().data);
  for (double& x : out.data) x *= factor;
  const int ia = a.id();
  return a.tape()->record("scale", std::move(out), {ia},
                          [ia, factor](Tape& t, int self) {
                            const auto& g = t.grad(self);
                            auto& ga = t.grad(ia);
                            for (std::size_t i = 0; i < g.size(); ++i) {
                              ga[i] += factor * g[i];
                            }
                          });
}

Var sub(const Var& a, const Var& b) { return add(a, scale(b, -1.0)); }

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "concat of zero tensors");
  }
  const std::size_t rows = parts[0].rows();
  std::vector<int> ids;
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const Var& p : parts) {
    require_same_tape(parts[0], p);
    if (p.rows() != rows) {
      throw_error(ErrorCode::kInvalidArgument, "concat_cols row mismatch");
    }
    ids.push_back(p.id());
    widths.push_back(p.cols());
    total += p.cols();
  }
  Tensor out({rows, total});
  std::size_t offset = 0;
  for (std::size_t q = 0; q < parts.size(); ++q) {
    const Tensor& v = parts[q].value();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(&v.data[r * widths[q]], widths[q],
                  &out.data[r * total + offset]);
    }
    offset += widths[q];
  }
  return parts[0].tape()->record(
      "concat_cols", std::move(out), ids,
      [ids, widths, rows, total](Tape& t, int self) {
        const auto& g = t.grad(self);
        std::size_t offset = 0;
        for (std::size_t q = 0; q < ids.size(); ++q) {
          auto& gq = t.grad(ids[q]);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < widths[q]; ++c) {
              gq[r * widths[q] + c] += g[r * total + offset + c];
            }
          }
          offset += widths[q];
        }
      });
}

Var concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw_error(ErrorCode::kInvalidArgument, "concat of zero tensors");
  }
  const std::size_t cols = parts[0].cols();
  std::vector<int> ids;
  std::vector<std::size_t> sizes;
  std::size_t rows = 0;
  for (const Var& p : parts) {
    require_same_tape(parts[0], p);
    if (p.cols() != cols) {
      throw_error(ErrorCode::kInvalidArgument, "concat_rows column mismatch");
    }
    ids.push_back(p.id());
    sizes.push_back(p.value().size());
    rows += p.rows();
  }
  Tensor out({rows, cols});
  std::size_t offset = 0;
  for (const Var& p : parts) {
    std::copy(p.value().data.begin(), p.value().data.end(),
              out.data.begin() + static_cast<std::ptrdiff_t>(offset));
    offset += p.value().size();
  }
  return parts[0].tape()->record("concat_rows", std::move(out), ids,
                                 [ids, sizes](Tape& t, int self) {
                                   const auto& g = t.grad(self);
                                   std::size_t offset = 0;
                                   for (std::size_t q = 0; q < ids.size(); ++q) {
                                     auto& gq = t.grad(ids[q]);
                                     for (std::size_t i = 0; i < sizes[q]; ++i) {
                                       gq[i] += g[offset + i];
                                     }
                                     offset += sizes[q];
                                   }
                                 });
}

Var slice_rows(const Var& a, std::size_t begin, std::size_t end) {
  const Tensor& av = a.value();
  if (begin >= end || end > av.rows()) {
    throw_error(ErrorCode::kInvalidArgument, "slice_rows out of range");
  }
  const std::size_t cols = av.cols();
  Tensor out({end - begin, cols});
  std::copy(av.data.begin() + static_cast<std::ptrdiff_t>(begin * cols),
            av.data.begin() + static_cast<std::ptrdiff_t>(end * cols),
            out.data.begin());
  const int ia = a.id();
  return a.tape()->record("slice_rows", std::move(out), {ia},
                          [ia, begin, cols](Tape& t, int self) {
                            const auto& g = t.grad(self);
                            auto& ga = t.grad(ia);
                            for (std::size_t i = 0; i < g.size(); ++i) {
                              ga[begin * cols + i] += g[i];
                            }
                          });
}

Var slice_cols(const Var& a, std::size_t begin, std::size_t end) {
  const Tensor& av = a.value();
  if (begin >= end || end > av.cols()) {
    throw_error(ErrorCode::kInvalidArgument, "slice_cols out of range");
  }
  const std::size_t rows = av.rows(), cols = av.cols(), w = end - begin;
  Tensor out({rows, w});
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(&av.data[r * cols + begin], w, &out.data[r * w]);
  }
  const int ia = a.id();
  return a.tape()->record("slice_cols", std::move(out), {ia},
                          [ia, begin, rows, cols, w](Tape& t, int self) {
                            const auto& g = t.grad(self);
                            auto& ga = t.grad(ia);
                            for (std::size_t r = 0; r < rows; ++r) {
                              for (std::size_t c = 0; c < w; ++c) {
                                ga[r * cols + begin + c] += g[r * w + c];
                              }
                            }
                          });
}

Var softmax_rows(const Var& a) {
  const Tensor& av = a.value();
  const std::size_t rows = av.rows(), cols = av.cols();
  Tensor out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = &av.data[r * cols];
    double* y = &out.data[r * cols];
    double hi = *std::max_element(x, x + cols);
    double z = 0.0;
    for (std::size_t c = 0; c < cols; ++c) z += (y[c] = std::exp(x[c] - hi));
    for (std::size_t c = 0; c < cols; ++c) y[c] /= z;
  }
  const int ia = a.id();
  return a.tape()->record(
      "softmax_rows", std::move(out), {ia}, [ia, rows, cols](Tape& t, int self) {
        const auto& g = t.grad(self);
        const Tensor& y = t.value(self);
        auto& ga = t.grad(ia);
        for (std::size_t r = 0; r < rows; ++r) {
          double dot = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            dot += g[r * cols + c] * y.data[r * cols + c];
          }
          for (std::size_t c = 0; c < cols; ++c) {
            ga[r * cols + c] += y.data[r * cols + c] * (g[r * cols + c] - dot);
          }
        }
      });
}

Var log_softmax_rows(const Var& a) {
  const Tensor& av = a.value();
  const std::size_t rows = av.rows(), cols = av.cols();
  Tensor out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = &av.data[r * cols];
    double hi = *std::max_element(x, x + cols);
    double z = 0.0;
    for (std::size_t c = 0; c < cols; ++c) z += std::exp(x[c] - hi);
    const double lse = hi + std::log(z);
    for (std::size_t c = 0; c < cols; ++c) out.data[r * cols + c] = x[c] - lse;
  }
  const int ia = a.id();
  return a.tape()->record(
      "log_softmax_rows", std::move(out), {ia},
      [ia, rows, cols](Tape& t, int self) {
        const auto& g = t.grad(self);
        const Tensor& y = t.value(self);
        auto& ga = t.grad(ia);
        for (std::size_t r = 0; r < rows; ++r) {
          double total = 0.0;
          for (std::size_t c = 0; c < cols; ++c) total += g[r * cols + c];
          for (std::size_t c = 0; c < cols; ++c) {
            ga[r * cols + c] +=
                g[r * cols + c] - std::exp(y.data[r * cols + c]) * total;
          }
        }
      });
}

Var relu(const Var& a) {
  Tensor out(a.value().shape, a.value().data);
  for (double& x : out.data) x = x > 0.0 ? x : 0.0;
  const int ia = a.id();
  return a.tape()->record("relu", std::move(out), {ia}, [ia](Tape& t, int self) {
    const auto& g = t.grad(self);
    const Tensor& x = t.value(ia);
    auto& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (x.data[i] > 0.0) ga[i] += g[i];
    }
  });
}

Var layer_norm_rows(const Var& x, const Var& gain, const Var& bias,
                    double eps) {
  require_same_tape(x, gain);
  require_same_tape(x, bias);
  const Tensor& xv = x.value();
  const std::size_t rows = xv.rows(), cols = xv.cols();
  if (gain.value().size() != cols || bias.value().size() != cols) {
    throw_error(ErrorCode::kInvalidArgument, "layer_norm parameter width");
  }
  Tensor out({rows, cols});
  std::vector<double> xhat(rows * cols), inv_std(rows);
  const Tensor& gv = gain.value();
  const Tensor& bv = bias.value();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = &xv.data[r * cols];
    double mean = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mean += xr[c];
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) var += (xr[c] - mean) * (xr[c] - mean);
    var /= static_cast<double>(cols);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < cols; ++c) {
      const double h = (xr[c] - mean) * inv_std[r];
      xhat[r * cols + c] = h;
      out.data[r * cols + c] = h * gv.data[c] + bv.data[c];
    }
  }
  const int ix = x.id(), ig = gain.id(), ib = bias.id();
  return x.tape()->record(
      "layer_norm_rows", std::move(out), {ix, ig, ib},
      [ix, ig, ib, rows, cols, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](Tape& t, int self) {
        const auto& g = t.grad(self);
        const Tensor& gv = t.value(ig);
        auto& gx = t.grad(ix);
        auto& gg = t.grad(ig);
        auto& gb = t.grad(ib);
        const double n = static_cast<double>(cols);
        for (std::size_t r = 0; r < rows; ++r) {
          double sum_d = 0.0, sum_dx = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t i = r * cols + c;
            const double d = g[i] * gv.data[c];
            sum_d += d;
            sum_dx += d * xhat[i];
            gg[c] += g[i] * xhat[i];
            gb[c] += g[i];
          }
          for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t i = r * cols + c;
            const double d = g[i] * gv.data[c];
            gx[i] += inv_std[r] / n * (n * d - sum_d - xhat[i] * sum_dx);
          }
        }
      });
}

Var gather_rows(const Var& table, std::span<const int> ids) {
  const Tensor& tv = table.value();
  const std::size_t cols = tv.cols();
  Tensor out({ids.size(), cols});
  std::vector<int> rows(ids.begin(), ids.end());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || static_cast<std::size_t>(rows[r]) >= tv.rows()) {
      throw_error(ErrorCode::kInvalidArgument, "gather index out of range");
    }
    std::copy_n(&tv.data[static_cast<std::size_t>(rows[r]) * cols], cols,
                &out.data[r * cols]);
  }
  const int it = table.id();
  return table.tape()->record(
      "gather_rows", std::move(out), {it},
      [it, cols, rows = std::move(rows)](Tape& t, int self) {
        const auto& g = t.grad(self);
        auto& gt = t.grad(it);
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const std::size_t base = static_cast<std::size_t>(rows[r]) * cols;
          for (std::size_t c = 0; c < cols; ++c) gt[base + c] += g[r * cols + c];
        }
      });
}

Var sum(const Var& a) {
  double total = 0.0;
  for (double x : a.value().data) total += x;
  const int ia = a.id();
  return a.tape()->record("sum", Tensor::scalar(total), {ia},
                          [ia](Tape& t, int self) {
                            const double g = t.grad(self)[0];
                            for (double& x : t.grad(ia)) x += g;
                          });
}

Var max(const Var& a) {
  const auto& d = a.value().data;
  if (d.empty()) throw_error(ErrorCode::kInvalidArgument, "max of empty tensor");
  std::size_t best = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] > d[best]) best = i;
  }
  const int ia = a.id();
  return a.tape()->record("max", Tensor::scalar(d[best]), {ia},
                          [ia, best](Tape& t, int self) {
                            t.grad(ia)[best] += t.grad(self)[0];
                          });
}

// ---------------------------------------------------------------------------
// Gradient check and optimizer

double grad_check(const std::function<Var(Tape&, const ParamStore&)>& loss_fn,
                  ParamStore& params, double eps) {
  if (!(eps > 0.0 && eps <= 1e-2)) {
    throw_error(ErrorCode::kInvalidArgument, "grad_check eps must be in (0, 1e-2]");
  }
  auto evaluate = [&]() {
    Tape tape;
    return loss_fn(tape, params).item();
  };

  params.clear_grads();
  double base = 0.0;
  {
    Tape tape;
    Var loss = loss_fn(tape, params);
    base = loss.item();
    tape.backward(loss, params);
  }
  if (evaluate() != base) {
    throw_error(ErrorCode::kContract,
                "grad_check: loss function is not deterministic");
  }

  double worst = 0.0;
  for (auto& [name, tensor] : params.tensors()) {
    std::vector<double> analytic = tensor.grad;
    analytic.resize(tensor.size(), 0.0);
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double saved = tensor.data[i];
      tensor.data[i] = saved + eps;
      const double plus = evaluate();
      tensor.data[i] = saved - eps;
      const double minus = evaluate();
      tensor.data[i] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double denom =
          std::max({1.0, std::abs(analytic[i]), std::abs(numeric)});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
  }
  params.clear_grads();
  return worst;
}

void adam_step(ParamStore& params, OptimState& state) {
  for (const auto& [name, tensor] : params.tensors()) {
    if (tensor.grad.size() != tensor.size()) {
      throw_error(ErrorCode::kContract,
                  "adam_step: missing gradient for parameter " + name);
    }
  }
  ++state.step;
  const AdamConfig& c = state.config;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (auto& [name, tensor] : params.tensors()) {
    auto& m = state.first_moment[name];
    auto& v = state.second_moment[name];
    if (m.size() != tensor.size()) {
      m.assign(tensor.size(), 0.0);
      v.assign(tensor.size(), 0.0);
    }
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double g = tensor.grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double mhat = m[i] / correct1;
      const double vhat = v[i] / correct2;
      tensor.data[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    }
    tensor.grad.clear();
  }
}

}  // namespace lexparse
