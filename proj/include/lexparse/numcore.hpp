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

#ifndef LEXPARSE_NUMCORE_HPP_
#define LEXPARSE_NUMCORE_HPP_

// Dense row-major tensors, a reverse-mode tape over a fixed set of matrix
// operations, and the adaptive-moment optimizer used by every trainable
// component in the library.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexparse {

using Shape = std::vector<std::size_t>;

struct Tensor {
  Shape shape;
  std::vector<double> data;
  // Empty when no gradient has been accumulated.
  std::vector<double> grad;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0);
  Tensor(Shape s, std::vector<double> values);

  static Tensor scalar(double v) { return Tensor({1, 1}, {v}); }
  static Tensor row(std::vector<double> values);

  std::size_t size() const { return data.size(); }
  // Rank-1 tensors are viewed as a single row.
  std::size_t rows() const;
  std::size_t cols() const;
  bool has_grad() const { return !grad.empty(); }

  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
};

std::size_t shape_size(const Shape& shape);

// Portable uniform draws on top of mt19937_64, whose output sequence is fixed
// by the standard (the <random> distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n);  // [0, n)
  std::uint64_t next() { return engine_(); }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

enum class Init {
  kZeros,
  kOnes,
  kEmbedding,  // uniform in [-0.1, 0.1]
  kFanIn,      // uniform in [-1/sqrt(cols), 1/sqrt(cols)]
};

// Named parameter registry, iterated in name order. Initial values depend on
// the seed and on creation order.
class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed = 0) : seed_(seed), rng_(seed) {}

  Tensor& create(const std::string& name, Shape shape, Init init);
  // Inserts an already-populated tensor (used by checkpoint loading).
  void insert(const std::string& name, Tensor tensor);

  bool contains(const std::string& name) const;
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;

  std::map<std::string, Tensor>& tensors() { return params_; }
  const std::map<std::string, Tensor>& tensors() const { return params_; }

  std::uint64_t seed() const { return seed_; }
  Rng& rng() { return rng_; }

  void clear_grads();
  std::size_t num_scalars() const;

 private:
  std::uint64_t seed_;
  Rng rng_;
  std::map<std::string, Tensor> params_;
};

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; only valid while the
// tape is alive.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  double item() const;

  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  using Backprop = std::function<void(Tape&, int self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // Binds a parameter read-only; repeated calls with the same name return one
  // node. The store must outlive the tape.
  Var param(const ParamStore& store, const std::string& name);

  // Computes node gradients for everything the loss reaches.
  void backward(const Var& loss);
  // backward, then adds the gradient of every parameter bound to this tape
  // into `params`. Bound parameters the loss does not reach get zeros.
  void backward(const Var& loss, ParamStore& params);

  std::size_t size() const { return nodes_.size(); }

  // Op-implementation interface.
  Var record(std::string_view op, Tensor value, std::vector<int> inputs,
             Backprop backprop);
  const Tensor& value(int id) const;
  std::vector<double>& grad(int id);
  const std::string& op_name(int id) const { return nodes_[id].op; }

 private:
  struct Node {
    std::string op;
    Tensor value;
    const Tensor* external = nullptr;  // parameter storage, not copied
    std::string param_name;
    std::vector<int> inputs;
    std::vector<double> grad;
    Backprop backprop;
  };

  std::vector<Node> nodes_;
  std::map<std::string, int> param_ids_;
};

enum class Transpose { kNo, kYes };

// a[m,k] x b[k,n], or a[m,k] x b[n,k]^T.
Var matmul(const Var& a, const Var& b, Transpose transpose_b = Transpose::kNo);
// Same shape, or b a single row broadcast over a's rows.
Var add(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double factor);
Var sub(const Var& a, const Var& b);  // add(a, scale(b, -1))
Var concat_cols(const std::vector<Var>& parts);
Var concat_rows(const std::vector<Var>& parts);
Var slice_rows(const Var& a, std::size_t begin, std::size_t end);
Var slice_cols(const Var& a, std::size_t begin, std::size_t end);
Var softmax_rows(const Var& a);
Var log_softmax_rows(const Var& a);
Var relu(const Var& a);
Var layer_norm_rows(const Var& x, const Var& gain, const Var& bias,
                    double eps = 1e-5);
Var gather_rows(const Var& table, std::span<const int> ids);
Var sum(const Var& a);
// Largest element; ties go to the lowest flat index.
Var max(const Var& a);

// Max over all scalar parameters of |analytic - numeric| /
// max(1, |analytic|, |numeric|) using central differences.
double grad_check(const std::function<Var(Tape&, const ParamStore&)>& loss_fn,
                  ParamStore& params, double eps = 1e-4);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::map<std::string, std::vector<double>> first_moment;
  std::map<std::string, std::vector<double>> second_moment;
};

// Applies one update to every parameter in the store and clears the grads.
void adam_step(ParamStore& params, OptimState& state);

}  // namespace lexparse

#endif  // LEXPARSE_NUMCORE_HPP_
