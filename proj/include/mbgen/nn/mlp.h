// Copyright 2026 The mbgen Authors.
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

// Dense multi-head MLP with ELU hidden layers and a linear output layer whose
// columns are split into heads. Parameters live in one contiguous buffer so
// optimizers and checkpoints treat them as a flat vector.

#ifndef MBGEN_NN_MLP_H_
#define MBGEN_NN_MLP_H_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mbgen {
namespace nn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

struct Architecture {
  int input = 0;
  std::vector<int> hidden = {200, 200, 200};
  std::vector<int> heads;

  int output() const { return std::accumulate(heads.begin(), heads.end(), 0); }
  int num_layers() const { return static_cast<int>(hidden.size()) + 1; }
  int fan_in(int layer) const { return layer == 0 ? input : hidden[layer - 1]; }
  int fan_out(int layer) const {
    return layer == static_cast<int>(hidden.size()) ? output() : hidden[layer];
  }
  int head_offset(int head) const {
    return std::accumulate(heads.begin(), heads.begin() + head, 0);
  }
  std::size_t num_params() const {
    std::size_t n = 0;
    for (int l = 0; l < num_layers(); ++l) {
      n += static_cast<std::size_t>(fan_in(l) + 1) * fan_out(l);
    }
    return n;
  }
  void Validate() const {
    if (input <= 0 || heads.empty()) throw std::invalid_argument("MLP: empty architecture");
    for (int h : hidden) {
      if (h <= 0) throw std::invalid_argument("MLP: hidden widths must be positive");
    }
    for (int h : heads) {
      if (h <= 0) throw std::invalid_argument("MLP: head widths must be positive");
    }
  }
  friend bool operator==(const Architecture&, const Architecture&) = default;
};

// Weights of layer l are a fan_in x fan_out row-major block followed by the
// fan_out bias; layers are stored in order. Storage is aligned like Eigen's
// own allocations so vectorized kernels see the same layout in every run.
template <typename Scalar>
class MlpParams {
 public:
  using Storage = std::vector<Scalar, Eigen::aligned_allocator<Scalar>>;
  using MatrixMap = Eigen::Map<Matrix<Scalar>>;
  using ConstMatrixMap = Eigen::Map<const Matrix<Scalar>>;
  using VectorMap = Eigen::Map<RowVector<Scalar>>;
  using ConstVectorMap = Eigen::Map<const RowVector<Scalar>>;

  MlpParams() = default;
  explicit MlpParams(Architecture arch) : arch_(std::move(arch)) {
    arch_.Validate();
    data_.assign(arch_.num_params(), Scalar(0));
    std::size_t off = 0;
    for (int l = 0; l < arch_.num_layers(); ++l) {
      weight_offset_.push_back(off);
      off += static_cast<std::size_t>(arch_.fan_in(l)) * arch_.fan_out(l);
      bias_offset_.push_back(off);
      off += arch_.fan_out(l);
    }
  }

  const Architecture& arch() const { return arch_; }
  std::size_t size() const { return data_.size(); }
  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }
  Storage& values() { return data_; }
  const Storage& values() const { return data_; }

  MatrixMap W(int l) {
    return MatrixMap(data_.data() + weight_offset_[l], arch_.fan_in(l), arch_.fan_out(l));
  }
  ConstMatrixMap W(int l) const {
    return ConstMatrixMap(data_.data() + weight_offset_[l], arch_.fan_in(l), arch_.fan_out(l));
  }
  VectorMap B(int l) { return VectorMap(data_.data() + bias_offset_[l], arch_.fan_out(l)); }
  ConstVectorMap B(int l) const {
    return ConstVectorMap(data_.data() + bias_offset_[l], arch_.fan_out(l));
  }

  // Same architecture, all zeros; the shape of a gradient.
  void SetZero() { std::fill(data_.begin(), data_.end(), Scalar(0)); }

  MlpParams ZerosLike() const {
    MlpParams out = *this;
    std::fill(out.data_.begin(), out.data_.end(), Scalar(0));
    return out;
  }

  template <typename Other>
  MlpParams<Other> Cast() const {
    MlpParams<Other> out(arch_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data()[i] = static_cast<Other>(data_[i]);
    return out;
  }

  bool AllFinite() const {
    for (Scalar v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const MlpParams& a, const MlpParams& b) {
    return a.arch_ == b.arch_ && a.data_ == b.data_;
  }

 private:
  Architecture arch_;
  Storage data_;
  std::vector<std::size_t> weight_offset_;
  std::vector<std::size_t> bias_offset_;
};

// Fan-in uniform scaling (variance 1/fan_in), zero biases.
template <typename Scalar, typename Rng>
MlpParams<Scalar> InitMlp(const Architecture& arch, Rng& rng) {
  MlpParams<Scalar> p(arch);
  for (int l = 0; l < arch.num_layers(); ++l) {
    const double limit = std::sqrt(3.0 / arch.fan_in(l));
    std::uniform_real_distribution<double> u(-limit, limit);
    auto w = p.W(l);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<Scalar>(u(rng));
  }
  return p;
}

template <typename Scalar>
Scalar Elu(Scalar x) {
  return x > 0 ? x : std::expm1(x);
}

// Activations kept for the backward pass. pre[l] is the pre-activation of
// hidden layer l; act[l] is the input to layer l (act[0] is the batch input).
template <typename Scalar>
struct ForwardCache {
  std::vector<Matrix<Scalar>> pre;
  std::vector<Matrix<Scalar>> act;
  Matrix<Scalar> output;
  // Backward-pass scratch, reused across calls to avoid reallocation.
  mutable Matrix<Scalar> delta;
  mutable Matrix<Scalar> back;

  int batch() const { return static_cast<int>(output.rows()); }
};

// Rows of `input` are examples. Rejects non-finite input.
template <typename Scalar, typename Derived>
void Forward(const MlpParams<Scalar>& p, const Eigen::MatrixBase<Derived>& input,
             ForwardCache<Scalar>& cache) {
  const Architecture& arch = p.arch();
  if (input.cols() != arch.input) {
    throw std::invalid_argument("MLP forward: input width " + std::to_string(input.cols()) +
                                " != " + std::to_string(arch.input));
  }
  const int hidden = static_cast<int>(arch.hidden.size());
  cache.pre.resize(hidden);
  cache.act.resize(hidden + 1);
  cache.act[0] = input;
  if (!cache.act[0].allFinite()) throw std::invalid_argument("MLP forward: non-finite input");
  for (int l = 0; l < hidden; ++l) {
    cache.pre[l].noalias() = cache.act[l] * p.W(l);
    cache.pre[l].rowwise() += p.B(l);
    // ELU(x) = max(x, 0) + min(exp(x) - 1, 0), written branch-free.
    const auto a = cache.pre[l].array();
    cache.act[l + 1] = a.max(Scalar(0)) + (a.exp() - Scalar(1)).min(Scalar(0));
  }
  cache.output.noalias() = cache.act[hidden] * p.W(hidden);
  cache.output.rowwise() += p.B(hidden);
}

template <typename Scalar, typename Derived>
Matrix<Scalar> Forward(const MlpParams<Scalar>& p, const Eigen::MatrixBase<Derived>& input) {
  ForwardCache<Scalar> cache;
  Forward(p, input, cache);
  return std::move(cache.output);
}

// Reverse-mode pass: accumulates d(loss)/d(params) into *grad given
// d(loss)/d(output) for every row of the forward batch.
template <typename Scalar>
void Backward(const MlpParams<Scalar>& p, const ForwardCache<Scalar>& cache,
              const Matrix<Scalar>& output_grad, MlpParams<Scalar>* grad) {
  const Architecture& arch = p.arch();
  if (output_grad.rows() != cache.output.rows() || output_grad.cols() != arch.output()) {
    throw std::invalid_argument("MLP backward: output gradient shape mismatch");
  }
  if (!(grad->arch() == arch)) throw std::invalid_argument("MLP backward: gradient shape");
  const int hidden = static_cast<int>(arch.hidden.size());
  Matrix<Scalar>& delta = cache.delta;
  Matrix<Scalar>& back = cache.back;
  delta = output_grad;
  for (int l = hidden; l >= 0; --l) {
    grad->W(l).noalias() += cache.act[l].transpose() * delta;
    grad->B(l) += delta.colwise().sum();
    if (l == 0) break;
    back.noalias() = delta * p.W(l).transpose();
    // ELU'(x) = 1 for x > 0 and exp(x) = ELU(x) + 1 otherwise, which is
    // min(ELU(x) + 1, 1).
    delta.resize(back.rows(), back.cols());
    delta.array() = back.array() * (cache.act[l].array() + Scalar(1)).min(Scalar(1));
  }
}

template <typename Scalar>
Matrix<Scalar> HeadBlock(const Matrix<Scalar>& output, const Architecture& arch, int head) {
  return output.middleCols(arch.head_offset(head), arch.heads[head]);
}

}  // namespace nn
}  // namespace mbgen

#endif  // MBGEN_NN_MLP_H_
