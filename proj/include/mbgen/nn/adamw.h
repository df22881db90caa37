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

#ifndef MBGEN_NN_ADAMW_H_
#define MBGEN_NN_ADAMW_H_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace nn {

struct AdamWConfig {
  double step_size = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double epsilon = 1e-5;
  double weight_decay = 1e-6;
};

// Bias-corrected Adam with decoupled decay:
//   p <- p * (1 - step_size * weight_decay) - step_size * m_hat / (sqrt(v_hat) + eps)
template <typename Scalar>
class AdamW {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

 public:
  AdamW() = default;
  AdamW(std::size_t num_params, AdamWConfig config)
      : config_(config),
        m_(Array::Zero(static_cast<Eigen::Index>(num_params))),
        v_(Array::Zero(static_cast<Eigen::Index>(num_params))) {}

  const AdamWConfig& config() const { return config_; }
  std::int64_t step_count() const { return step_; }

  void Step(MlpParams<Scalar>& params, const MlpParams<Scalar>& grad) {
    const Eigen::Index n = static_cast<Eigen::Index>(m_.size());
    if (static_cast<Eigen::Index>(params.size()) != n ||
        static_cast<Eigen::Index>(grad.size()) != n) {
      throw std::invalid_argument("AdamW: parameter count mismatch");
    }
    Eigen::Map<const Array> g(grad.data(), n);
    if (!g.allFinite()) {
      Eigen::Index bad = 0;
      while (std::isfinite(g[bad])) ++bad;
      throw std::domain_error("AdamW: non-finite gradient at parameter " + std::to_string(bad) +
                              " (step " + std::to_string(step_ + 1) + ")");
    }
    ++step_;
    const double b1 = config_.beta1, b2 = config_.beta2;
    const Scalar c1 = static_cast<Scalar>(1.0 - std::pow(b1, static_cast<double>(step_)));
    const Scalar c2 = static_cast<Scalar>(1.0 - std::pow(b2, static_cast<double>(step_)));
    const Scalar lr = static_cast<Scalar>(config_.step_size);
    const Scalar shrink = static_cast<Scalar>(1.0 - config_.step_size * config_.weight_decay);
    const Scalar eps = static_cast<Scalar>(config_.epsilon);
    m_ = Scalar(b1) * m_ + Scalar(1.0 - b1) * g;
    v_ = Scalar(b2) * v_ + Scalar(1.0 - b2) * g.square();
    Eigen::Map<Array> p(params.data(), n);
    p = p * shrink - lr * (m_ / c1) / ((v_ / c2).sqrt() + eps);
  }

 private:
  AdamWConfig config_;
  Array m_;
  Array v_;
  std::int64_t step_ = 0;
};

}  // namespace nn
}  // namespace mbgen

#endif  // MBGEN_NN_ADAMW_H_
