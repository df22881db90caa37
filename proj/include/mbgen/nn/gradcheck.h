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

// Central-difference gradient checking for MlpParams<double>.

#ifndef MBGEN_NN_GRADCHECK_H_
#define MBGEN_NN_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "mbgen/nn/losses.h"
#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace nn {

enum class LossKind { kMse, kBernoulliObs, kBernoulliTerm };

// Loss of head `head` under `kind` plus its gradient wrt all outputs.
inline LossGrad<double> HeadLoss(LossKind kind, const Matrix<double>& output,
                                 const Architecture& arch, int head,
                                 const Matrix<double>& target) {
  Matrix<double> block = HeadBlock(output, arch, head);
  LossGrad<double> part =
      kind == LossKind::kMse ? MseLoss(block, target) : BernoulliLogitsLoss(block, target);
  LossGrad<double> out;
  out.value = part.value;
  out.grad = Matrix<double>::Zero(output.rows(), output.cols());
  out.grad.middleCols(arch.head_offset(head), arch.heads[head]) = part.grad;
  return out;
}

// Largest per-block relative error max|a - n| / max(max|a|, max|n|) over the
// weight and bias blocks of every layer.
inline double MaxBlockRelativeError(const MlpParams<double>& analytic,
                                    const MlpParams<double>& numeric) {
  double worst = 0.0;
  const Architecture& arch = analytic.arch();
  auto block = [&](const auto& a, const auto& n) {
    const double scale = std::max({a.cwiseAbs().maxCoeff(), n.cwiseAbs().maxCoeff(), 1e-12});
    worst = std::max(worst, (a - n).cwiseAbs().maxCoeff() / scale);
  };
  for (int l = 0; l < arch.num_layers(); ++l) {
    block(analytic.W(l), numeric.W(l));
    block(analytic.B(l), numeric.B(l));
  }
  return worst;
}

// Compares the backward pass with central differences of
// `loss(params) -> value` at perturbation h.
inline MlpParams<double> NumericGradient(
    MlpParams<double> params, const std::function<double(const MlpParams<double>&)>& loss,
    double h = 1e-5) {
  MlpParams<double> g = params.ZerosLike();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params.data()[i];
    params.data()[i] = keep + h;
    const double up = loss(params);
    params.data()[i] = keep - h;
    const double down = loss(params);
    params.data()[i] = keep;
    g.data()[i] = (up - down) / (2 * h);
  }
  return g;
}

// One random network and batch; returns the worst block error over the three
// losses (MSE on head 0, Bernoulli on heads 1 and 2).
template <typename Rng>
double RandomNetworkGradientError(const Architecture& arch, int batch, Rng& rng) {
  MlpParams<double> params = InitMlp<double>(arch, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int l = 0; l < arch.num_layers(); ++l) {
    for (Eigen::Index i = 0; i < params.B(l).size(); ++i) params.B(l)(i) = 0.1 * normal(rng);
  }
  Matrix<double> input(batch, arch.input);
  for (Eigen::Index i = 0; i < input.size(); ++i) input.data()[i] = normal(rng);
  std::bernoulli_distribution coin(0.5);
  double worst = 0.0;
  const LossKind kinds[] = {LossKind::kMse, LossKind::kBernoulliObs, LossKind::kBernoulliTerm};
  for (int head = 0; head < static_cast<int>(arch.heads.size()) && head < 3; ++head) {
    Matrix<double> target(batch, arch.heads[head]);
    for (Eigen::Index i = 0; i < target.size(); ++i) {
      target.data()[i] = kinds[head] == LossKind::kMse ? normal(rng) : (coin(rng) ? 1.0 : 0.0);
    }
    ForwardCache<double> cache;
    Forward(params, input, cache);
    LossGrad<double> lg = HeadLoss(kinds[head], cache.output, arch, head, target);
    MlpParams<double> analytic = params.ZerosLike();
    Backward(params, cache, lg.grad, &analytic);
    MlpParams<double> numeric = NumericGradient(params, [&](const MlpParams<double>& p) {
      return HeadLoss(kinds[head], Forward(p, input), arch, head, target).value;
    });
    worst = std::max(worst, MaxBlockRelativeError(analytic, numeric));
  }
  return worst;
}

}  // namespace nn
}  // namespace mbgen

#endif  // MBGEN_NN_GRADCHECK_H_
