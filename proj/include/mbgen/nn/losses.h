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

#ifndef MBGEN_NN_LOSSES_H_
#define MBGEN_NN_LOSSES_H_

#include <cmath>
#include <stdexcept>

#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace nn {

// Loss value (summed over features, averaged over the batch) and its
// gradient with respect to the prediction block.
template <typename Scalar>
struct LossGrad {
  double value = 0.0;
  Matrix<Scalar> grad;
};

template <typename Scalar>
LossGrad<Scalar> MseLoss(const Matrix<Scalar>& pred, const Matrix<Scalar>& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw std::invalid_argument("MseLoss: shape mismatch");
  }
  const double batch = static_cast<double>(pred.rows());
  LossGrad<Scalar> out;
  Matrix<Scalar> diff = pred - target;
  out.value = diff.template cast<double>().squaredNorm() / batch;
  out.grad = diff * static_cast<Scalar>(2.0 / batch);
  return out;
}

// log(1 + exp(x)) without overflow.
template <typename Scalar>
Scalar Softplus(Scalar x) {
  return std::max(x, Scalar(0)) + std::log1p(std::exp(-std::abs(x)));
}

template <typename Scalar>
Scalar Sigmoid(Scalar x) {
  if (x >= 0) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

// Negative log-likelihood of independent Bernoulli targets under logits:
// softplus(z) - t z per feature; gradient sigmoid(z) - t.
template <typename Scalar>
LossGrad<Scalar> BernoulliLogitsLoss(const Matrix<Scalar>& logits,
                                     const Matrix<Scalar>& targets) {
  if (logits.rows() != targets.rows() || logits.cols() != targets.cols()) {
    throw std::invalid_argument("BernoulliLogitsLoss: shape mismatch");
  }
  const double batch = static_cast<double>(logits.rows());
  LossGrad<Scalar> out;
  out.grad.resize(logits.rows(), logits.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      const Scalar z = logits(i, j), t = targets(i, j);
      total += static_cast<double>(Softplus(z) - t * z);
      out.grad(i, j) = static_cast<Scalar>((Sigmoid(z) - t) / batch);
    }
  }
  out.value = total / batch;
  return out;
}

}  // namespace nn
}  // namespace mbgen

#endif  // MBGEN_NN_LOSSES_H_
